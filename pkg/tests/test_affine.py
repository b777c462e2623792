import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import affine as af

# frozen: Kac's dual Coxeter numbers and the level units
HVEE = {"A1": 2, "A2": 3, "D4": 6, "E6": 12, "A2^2": 3, "A3^2": 3, "A4^2": 5, "D4^3": 4, "D5^2": 5, "E6^2": 9}
UNIT = {"A1": 1, "A2^2": 2, "A3^2": 2, "A4^2": 2, "D4^3": 3, "D5^2": 2, "E6^2": 2}


@pytest.mark.parametrize("tag", HVEE)
def test_dual_coxeter(tag):
    assert af.AffineAlgebraTag.parse(tag).dual_coxeter == HVEE[tag]


@pytest.mark.parametrize("tag", UNIT)
def test_level_unit(tag):
    assert af.level_unit(af.AffineAlgebraTag.parse(tag)) == UNIT[tag]


@pytest.mark.parametrize("tag", ["A1", "A2^2", "A3^2", "D4^3"])
def test_poisson_identity(tag):
    alg = af.AffineAlgebraTag.parse(tag)
    rng = np.random.default_rng(5)
    for t in (0.5, 1.0, 2.0):
        h, k = rng.normal(size=(2, alg.l))
        assert af.poisson_check(alg, t, h, k)["rel_err"] < 1e-8


def test_poisson_complex_t():
    alg = af.AffineAlgebraTag.parse("A2^2")
    r = af.poisson_check(alg, 0.8 + 0.3j, np.array([0.2]), np.array([-0.4]))
    assert r["rel_err"] < 1e-8


def test_bad_t_rejected():
    with pytest.raises(ValueError):
        af.AffinePoint(-1.0, np.zeros(1), np.zeros(1))


def _theta_oracle(b, K):
    """Level-1 A1 basic character: sum q^{n^2} y^n / phi(q), q = e^{-2 pi i b}, y = e^{sqrt2 K}."""
    q = np.exp(-2j * np.pi * b)
    y = np.exp(math.sqrt(2) * K)
    n = np.arange(-40, 41)
    return np.sum(q ** (n * n) * y**n) / np.prod([1 - q**k for k in range(1, 500)])


@pytest.mark.parametrize("b,K", [(-0.3j, 0.2), (0.1 - 0.4j, -0.5), (0.25 - 0.2j, 0.0), (-0.5j, 0.0)])
def test_a1_basic_character(b, K):
    alg = af.AffineAlgebraTag.parse("A1")
    v = af.character_value(alg, af.HighestWeight(1, (0,)), b, np.array([K], complex))
    assert abs(v - _theta_oracle(b, K)) < 1e-12 * abs(v)


def test_vacuum_character_is_one():
    for tag in ("A2^2", "A3^2", "D4^3"):
        alg = af.AffineAlgebraTag.parse(tag)
        v = af.character_value(alg, af.HighestWeight(0, (0,) * alg.fd.base.rank), -0.4j, np.full(alg.l, 0.3 + 0j))
        assert abs(v - 1) < 1e-10


def test_character_periodic_in_b():
    alg = af.AffineAlgebraTag.parse("A2^2")
    lam = af.HighestWeight(2, (1, 1))
    K = np.array([0.37 + 0j])
    v0 = af.character_value(alg, lam, 0.1 - 0.35j, K)
    v2 = af.character_value(alg, lam, 2.1 - 0.35j, K)
    assert abs(v0 - v2) < 1e-9 * abs(v0)


def test_q_expansion_coefficients_are_dyadic():
    # at K = log 2 rho^vee the grade coefficients lie in Z[1/2^k]
    alg = af.AffineAlgebraTag.parse("A2^2")
    fd = alg.fd
    K = fd.coords(math.log(2) * np.array(fd.base.rho, dtype=float)).astype(complex)
    sig, P, Nx = 0.3, 2, 64
    xs = P * np.arange(Nx) / Nx
    f = np.array([af.character_value(alg, af.HighestWeight(1, (0, 0)), x - 1j * sig, K) for x in xs])
    c = np.fft.fft(f) / Nx
    n = np.arange(Nx)
    n[n > Nx // 2] -= Nx
    coef = c * np.exp(-2 * np.pi * (n / P) * sig)
    low = [coef[i] * 2**8 for i in range(Nx) if -6 <= n[i] <= 0]
    assert all(abs(v - round(v.real)) < 1e-3 for v in low)
    assert abs(coef[0] - 1) < 1e-9  # the highest-weight space


def test_dominance():
    alg = af.AffineAlgebraTag.parse("A2^2")
    with pytest.raises(ValueError):
        af.check_dominant(alg, af.HighestWeight(1, (1, 1)))
    af.check_dominant(alg, af.HighestWeight(2, (1, 1)))
    with pytest.raises(ValueError):
        af.character_value(alg, af.HighestWeight(0, (0, 0)), 0.3j, np.zeros(1, complex))


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 3), min_size=2, max_size=2),
       st.fractions(-5, 5, max_denominator=7), st.fractions(1, 5, max_denominator=7))
def test_lattice_action_composes(g1, g2, a, b):
    alg = af.AffineAlgebraTag.parse("A3^2")
    basis = alg.fd.translation_basis
    gam1 = tuple(sum(c * v[i] for c, v in zip(g1, basis)) for i in range(4))
    gam2 = tuple(sum(c * v[i] for c, v in zip(g2, basis)) for i in range(4))
    h = (Fraction(1, 3), Fraction(-1, 5), Fraction(1, 5), Fraction(-1, 3))
    p = (h, a, b)
    lhs = af.lattice_action(alg, gam2, af.lattice_action(alg, gam1, p))
    rhs = af.lattice_action(alg, tuple(x + y for x, y in zip(gam1, gam2)), p)
    assert lhs == rhs


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_lattice_action_preserves_norm(g):
    # 2ab + (h, h) is invariant
    alg = af.AffineAlgebraTag.parse("A3^2")
    basis = alg.fd.translation_basis
    gam = tuple(sum(c * v[i] for c, v in zip(g, basis)) for i in range(4))
    s = alg.fd.base.form_scale
    h, a, b = (Fraction(1, 2), Fraction(1, 7), Fraction(-1, 7), Fraction(-1, 2)), Fraction(2, 3), Fraction(3, 2)
    h2, a2, b2 = af.lattice_action(alg, gam, (h, a, b))
    assert 2 * a * b + s * sum(x * x for x in h) == 2 * a2 * b2 + s * sum(x * x for x in h2)
