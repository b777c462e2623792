import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import expm

from artifact import wiener as wn
from artifact.grouprep import MatrixGroupModel

SU2 = MatrixGroupModel.su(2, 1)
Y = 0.7 * np.diag([1j, -1j])


def test_construction_identity():
    p = wn.sample_path(SU2, 1.0, 4, np.random.default_rng(0), n_paths=3)
    assert np.array_equal(p.group_points[:, 0], np.broadcast_to(np.eye(2), (3, 2, 2)))
    X = np.einsum("psa,aij->psij", p.flat_increments, wn.algebra_basis(SU2))
    for j in range(16):
        step = np.array([expm(x) for x in X[:, j]])
        assert np.array_equal(p.group_points[:, j + 1], p.group_points[:, j] @ step)


def test_quaternion_kernel_matches_matrices():
    p = wn.sample_path(SU2, 1.0, 5, np.random.default_rng(1), n_paths=4)
    assert np.allclose(wn.mckean_endpoints(SU2, p.flat_increments), p.endpoints, atol=1e-12)


def test_increment_covariance():
    m = MatrixGroupModel.su(3)
    inc = wn._increments(m, 2.0, 3, 20000, np.random.default_rng(2))
    # s T dt with T = 1/2, dt = T/8
    assert abs(inc.var() - 2.0 * 0.5 * 0.5 / 8) < 2e-3


def test_identity_gauge_is_exact():
    ident = lambda t: (np.broadcast_to(np.eye(2), (len(t), 2, 2)), np.zeros((len(t), 2, 2)))
    r = wn.quasi_invariance_check(SU2, 1.0, ident, wn.real_trace, 2000, m=4)
    assert r["lhs"] == r["rhs"]


def test_gauge_must_start_at_identity():
    import pytest

    path = lambda t: (np.broadcast_to(1j * np.diag([1, -1]), (len(t), 2, 2)), np.zeros((len(t), 2, 2)))
    with pytest.raises(ValueError):
        wn.quasi_invariance_check(SU2, 1.0, path, wn.one, 10, m=2)


def test_density_has_unit_mean():
    r = wn.quasi_invariance_check(SU2, 1.0, wn.exp_path(Y), wn.one, 20000, m=6, seed=3)
    assert abs(r["density_mean"] - 1) < 3 * r["density_sigma"]


def test_quasi_invariance_su3():
    m = MatrixGroupModel.su(3)
    g = wn.exp_path(0.8 * m.algebra_basis[0] + 0.3 * m.algebra_basis[3])
    r = wn.quasi_invariance_check(m, 1.0, g, wn.real_trace, 20000, m=6, seed=4)
    assert abs(r["lhs"] - r["rhs"]) < 3 * r["sigma"]


def test_berechnung_normalization():
    r = wn.smoothed_berechnung_check(SU2, Y, 1.0, wn.one, 20000, m=6, seed=5)
    assert r["rhs"] == 1.0 and abs(r["lhs"] - 1) < 3 * r["sigma"]


def test_berechnung_zero_drift_is_endpoint_law():
    r = wn.smoothed_berechnung_check(SU2, np.zeros((2, 2)), 1.0, wn.real_trace, 20000, m=6, seed=6)
    # Casimir of the fundamental: |omega + rho|^2 - |rho|^2 = 3/2
    assert abs(r["rhs"] - 2 * np.exp(-1.5 / 2)) < 1e-15
    assert abs(r["lhs"] - r["rhs"]) < 3 * r["sigma"]


def test_berechnung_generic_f_uses_haar_quadrature():
    f = lambda Z: np.abs(np.trace(Z, axis1=1, axis2=2)) ** 2
    r = wn.smoothed_berechnung_check(SU2, Y, 1.0, f, 20000, m=6, seed=7, n_mc=20000)
    assert abs(r["lhs"] - r["rhs"]) < 3 * r["sigma"]


def test_angle_density_normalized():
    th = np.linspace(0, np.pi, 4001)
    d = wn.su2_angle_density(th, 1.0)
    assert abs(trapezoid(d, th) - 1) < 1e-6


def test_large_time_is_haar():
    th = np.linspace(0.01, 3.1, 50)
    assert np.allclose(wn.su2_angle_density(th, 40.0), 2 / np.pi * np.sin(th) ** 2, atol=1e-8)


def test_refinement_gap_shrinks():
    g6 = wn.refinement_gap(SU2, 1.0, 6, 2000)
    g10 = wn.refinement_gap(SU2, 1.0, 10, 2000)
    assert g10 < 10 * g6 and g10 < g6


def test_endpoint_law_small():
    r = wn.endpoint_law_check(1.0, 6, 20000, seed=8, bins=20)
    assert r["p_value"] > 0.01
