import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import affine, charform, grouprep as gr
from artifact.folding import fold_tag


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_lift_is_antidiagonal_automorphism(n):
    m = gr.MatrixGroupModel.su(n)
    J = m.J
    assert np.allclose(np.abs(J), np.fliplr(np.eye(n)))
    rng = np.random.default_rng(n)
    g1, g2 = gr.haar_sample(m, rng, size=2)
    assert np.allclose(m.tau(g1 @ g2), m.tau(g1) @ m.tau(g2))
    assert np.allclose(m.tau(m.tau(g1)), g1)
    assert np.allclose(m.tau_inv(g1), np.linalg.inv(m.tau(g1)))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_pinning_signs(n):
    # dtau(E_a) = (-1)^(1 + ht a) E_{tau a}; simple roots map with sign +1
    m = gr.MatrixGroupModel.su(n)
    for (i, j), s in m.pinning_signs().items():
        assert s == (-1) ** (1 + j - i)


def test_su2_has_no_outer_automorphism():
    with pytest.raises(ValueError):
        gr.MatrixGroupModel.su(2)


def test_rep_kinds():
    assert gr.rep_kind_for_weight(4, (0, 1, 0)) == ("wedge", 2)
    assert gr.rep_kind_for_weight(4, (1, 0, 1)) == ("adjoint",)
    assert gr.rep_kind_for_weight(4, (0, 0, 0)) == ("trivial",)
    assert gr.rep_kind_for_weight(4, (0, 2, 0)) is None


@pytest.mark.parametrize("n,lam,dim,trace", [(3, (1, 1), 8, -2), (4, (0, 1, 0), 6, 4), (4, (1, 0, 1), 15, 5),
                                              (5, (1, 0, 0, 1), 24, -4), (6, (1, 0, 0, 0, 1), 35, 7)])
def test_intertwiner(n, lam, dim, trace):
    m = gr.MatrixGroupModel.su(n)
    rep = gr.RepModel(m, lam)
    T = gr.solve_intertwiner(m, rep)
    assert rep.dim == dim
    assert abs(np.trace(T) - trace) < 1e-9
    assert np.allclose(T @ T, np.eye(dim), atol=1e-10)
    g = gr.haar_sample(m, np.random.default_rng(0))
    assert np.allclose(rep.matrix(m.tau(g)) @ T, T @ rep.matrix(g), atol=1e-10)


def test_non_invariant_weight_has_no_intertwiner():
    m = gr.MatrixGroupModel.su(4)
    with pytest.raises((ValueError, ArithmeticError)):
        gr.solve_intertwiner(m, gr.RepModel(m, (1, 0, 0)))


@given(st.integers(0, 2**31 - 1))
def test_character_oracle(seed):
    m = gr.MatrixGroupModel.su(4)
    fd = fold_tag("A3^2")
    rep = gr.RepModel(m, (1, 0, 1))
    T = gr.solve_intertwiner(m, rep)
    H = np.random.default_rng(seed).uniform(size=fd.l) @ np.array(fd.torus_lattice, dtype=float)
    lhs = np.trace(rep.matrix(m.torus(H)) @ T)
    assert abs(lhs - charform.twisted_character(fd, (1, 0, 1), H)) < 1e-8


def test_haar_moments():
    m = gr.MatrixGroupModel.su(3)
    g = gr.haar_sample(m, np.random.default_rng(1), size=40000)
    tr = np.trace(g, axis1=1, axis2=2)
    assert abs(tr.mean()) < 0.02
    assert abs(np.mean(np.abs(tr) ** 2) - 1) < 0.03
    assert np.allclose(np.linalg.det(g), 1)


@pytest.mark.parametrize("theta", [0.3, 1.1, 2.5])
def test_su2_heat_kernel_closed_form(theta):
    s, t = 0.7, 1.3
    eig = np.array([np.exp(1j * theta), np.exp(-1j * theta)])
    v = gr.heat_kernel(2, eig, s, t, eigenvalues=True)["value"]
    k = np.arange(0, 200)
    exact = np.sum((k + 1) * np.sin((k + 1) * theta) / np.sin(theta) * np.exp(-s * t / 2 * ((k + 1) ** 2 - 1) / 2))
    assert abs(v - exact) < 1e-12


def test_heat_kernel_tail_bound():
    r = gr.heat_kernel(3, np.eye(3), 1.0, 0.5, tol=1e-10)
    assert r["tail_bound"] < 1e-10 * abs(r["value"])


def test_weyl_integral_constant():
    m = gr.MatrixGroupModel.su(4)
    r = gr.weyl_integral_check(m, fold_tag("A3^2"), lambda g: np.ones(len(g)), 100, 12)
    assert abs(r["torus_value"] - 1) < 1e-10


def test_convolution_trivial_rep():
    m = gr.MatrixGroupModel.su(3)
    rep = gr.RepModel(m, (0, 0))
    g1, g2 = gr.haar_sample(m, np.random.default_rng(3), size=2)
    r = gr.twisted_convolution_check(m, rep, g1, g2, 100)
    assert abs(r["lhs"] - 1) < 1e-12 and abs(r["rhs"] - 1) < 1e-12


def test_heatprop_a1_on_wall_is_exact():
    r = gr.heatprop_check(affine.AffineAlgebraTag.parse("A1"), 1.0, [0.0], [0.0], 2000)
    assert abs(r["rhs"] - r["lhs"]) < 1e-9 * abs(r["lhs"])


def test_heatprop_a2_twisted_small():
    r = gr.heatprop_check(affine.AffineAlgebraTag.parse("A2^2"), 1.0, [0.13], [-0.21], 20000, seed=2)
    assert r["n_sigma"] < 4 and r["rel_err"] < 0.05


def test_calibrated_sign_frozen():
    assert gr.calibrate_sign(fold_tag("A2^2"), (1, 1)) == -1
    assert gr.calibrate_sign(fold_tag("A3^2"), (0, 1, 0)) == 1
