import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import charform as cf
from artifact.folding import fold_tag
from artifact.rootsys import build_root_system

FOLDS = ["A2^2", "A3^2", "A4^2", "D4^3", "D5^2", "E6^2"]


def _points(fd, n, seed):
    B = np.array(fd.torus_lattice, dtype=float)
    return np.random.default_rng(seed).uniform(size=(n, fd.l)) @ B


@pytest.mark.parametrize("tag", FOLDS)
def test_denominator_identity(tag):
    fd = fold_tag(tag)
    H = _points(fd, 200, 1)
    d = cf.denominator(fd, H)
    A = cf.alternating_sum(cf.weyl_table(fd.r1), fd.r1.weight_coords(fd.rho_tau), H)
    assert np.max(np.abs(d - A) / np.abs(A)) < 1e-10


def test_classical_weyl_dimension_frozen():
    R = build_root_system("A", 2)
    assert [cf.weyl_dimension(R, lam) for lam in [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0)]] == [3, 8, 6, 15, 10]
    G = build_root_system("G2", 2)
    assert sorted(cf.weyl_dimension(G, lam) for lam in [(1, 0), (0, 1)]) == [7, 14]


def test_character_at_identity_is_dimension():
    R = build_root_system("B", 3)
    for lam in [(1, 0, 0), (0, 0, 1), (1, 1, 0)]:
        v = cf.classical_character(R, lam, np.zeros(R.ambient_dim))
        assert abs(v - cf.weyl_dimension(R, lam)) < 1e-9


# frozen twining dimensions (trace of the intertwiner, calibrated sign)
TWINING = {("A2^2", (1, 1)): -2, ("A3^2", (0, 1, 0)): 4, ("A3^2", (1, 0, 1)): 5}


@pytest.mark.parametrize("key", TWINING)
def test_twining_dimension(key):
    tag, lam = key
    fd = fold_tag(tag)
    v = cf.twisted_character(fd, lam, np.zeros(fd.base.ambient_dim))
    assert abs(v - TWINING[key]) < 1e-12


def test_non_invariant_weight_gives_zero():
    fd = fold_tag("A3^2")
    assert np.all(cf.twisted_character(fd, (1, 0, 0), _points(fd, 5, 0)) == 0)


@pytest.mark.parametrize("tag", ["A3^2", "A4^2", "D4^3"])
def test_orthonormality(tag):
    fd = fold_tag(tag)
    lams = cf.tau_invariant_dominant(fd, 5)
    G = np.array([[cf.twisted_inner_product(fd, a, b) for b in lams] for a in lams])
    assert np.max(np.abs(G - np.eye(5))) < 1e-9


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_twisted_character_is_weyl_invariant(a, b, seed):
    fd = fold_tag("A3^2")
    lam = (a, b, a)
    W = cf.weyl_table(fd.r1)
    H = _points(fd, 1, seed)[0]
    vals = [cf.twisted_character(fd, lam, w @ H) for w in W.elements[:4]]
    assert np.allclose(vals, vals[0], atol=1e-8 * max(1, abs(vals[0])))


@given(st.integers(0, 3), st.integers(0, 3))
def test_wall_values_are_finite(a, b):
    fd = fold_tag("A4^2")
    lam = (a, b, b, a)
    v = cf.twisted_character(fd, lam, np.zeros(fd.base.ambient_dim))
    assert np.isfinite(v) and abs(v - round(v.real)) < 1e-9


def test_radial_laplacian():
    fd = fold_tag("A3^2")
    r = cf.radial_laplacian_check(fd, (1, 2, 1))
    assert r["analytic_residual"] < 1e-12 and r["fd_residual"] < 1e-4
