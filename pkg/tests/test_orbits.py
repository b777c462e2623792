import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from artifact import orbits as ob
from artifact.grouprep import MatrixGroupModel

SU3 = MatrixGroupModel.su(3)
SU4 = MatrixGroupModel.su(4)


def test_alcove_vertices_frozen():
    # A2^2: the alcove is a segment of length 1/(2 sqrt 2) in LS0
    V = ob.alcove_vertices(ob.folded_data(SU3))
    assert np.allclose(np.abs(V[:, 0]), [0, 1 / (2 * np.sqrt(2))])


def test_zero_loop_shell():
    L = ob.TwistedLoop.constant(SU3, np.zeros((3, 3)), a=0.4, b=1.5, N=16)
    assert ob.shell_invariant(L) == {"a": 2 * 0.4 * 1.5, "b": 1.5}


def test_seam_and_b_checks():
    x = np.zeros((17, 3, 3), dtype=complex)
    x[-1] = 0.1j * np.diag([1, -1, 0])
    with pytest.raises(ValueError):
        ob.TwistedLoop(SU3, x, 0.0, 1.0)
    with pytest.raises(ValueError):
        ob.TwistedLoop(SU3, np.zeros((17, 3, 3)), 0.0, 0.0)


def test_small_seam_is_repinned():
    x = np.zeros((17, 3, 3), dtype=complex)
    x[-1] = 1e-10j * np.diag([1, -1, 0])
    L = ob.TwistedLoop(SU3, x, 0.0, 1.0)
    assert np.all(L.samples[-1] == 0)


def test_grid_mismatch():
    L = ob.TwistedLoop.constant(SU3, np.zeros((3, 3)), 0.0, 1.0, 16)
    g = ob.random_gauge(SU3, 32, np.random.default_rng(0))
    with pytest.raises(ValueError):
        ob.gauge_action(g, L)


def test_json_round_trip():
    rng = np.random.default_rng(1)
    L = ob.gauge_action(ob.random_gauge(SU4, 32, rng), ob.TwistedLoop.from_alcove(SU4, [0.1, 0.05], 1.2, 32, 0.3))
    L2 = ob.TwistedLoop.from_json(L.to_json())
    assert np.array_equal(L.samples, L2.samples) and L.a == L2.a and L.b == L2.b


def test_constant_loop_monodromy():
    fd = ob.folded_data(SU4)
    mu = np.array([-0.2, -0.1])
    L = ob.TwistedLoop.from_alcove(SU4, mu, 0.8, 16)
    assert np.allclose(ob.monodromy(L), SU4.torus(fd.embed(mu)), atol=1e-12)


def test_gauge_random_is_twisted_periodic():
    g = ob.random_gauge(SU4, 64, np.random.default_rng(2))
    assert np.allclose(g.g[-1], SU4.tau(g.g[0]))
    # derivative against central differences
    fd = (g.g[2:] - g.g[:-2]) * 64 * 2 / 2
    assert np.max(np.abs(fd - g.dg[1:-1])) < 0.05 * np.max(np.abs(g.dg))


@pytest.mark.parametrize("model", [SU3, SU4, MatrixGroupModel.su(5), MatrixGroupModel.su(3, 1)])
def test_round_trip(model):
    fd = ob.folded_data(model)
    rng = np.random.default_rng(7)
    for _ in range(5):
        mu = ob.random_alcove_point(fd, rng)
        L = ob.TwistedLoop.from_alcove(model, mu, rng.uniform(0.5, 2), 64, a=0.2)
        Lg = ob.gauge_action(ob.random_gauge(model, 64, rng), L)
        assert np.linalg.norm(ob.classify(Lg).coords - mu) < 1e-6
        assert abs(ob.shell_invariant(Lg)["a"] - ob.shell_invariant(L)["a"]) < 1e-8


def test_gauged_path_solves_gauged_equation():
    rng = np.random.default_rng(4)
    L = ob.TwistedLoop.from_alcove(SU3, [-0.1], 1.0, 128)
    g = ob.random_gauge(SU3, 128, rng)
    z = ob.fundamental_solution(L)
    zg = ob.fundamental_solution(ob.gauge_action(g, L))
    # compare on the coarser of the two output grids
    gs = 128 // (len(z["t"]) - 1)
    zs = (len(zg["t"]) - 1) // (len(z["t"]) - 1)
    pred = g.g[0] @ z["z"] @ np.linalg.inv(g.g[::gs])
    assert np.allclose(zg["t"][::zs], z["t"])
    assert np.max(np.abs(pred - zg["z"][::zs])) < 1e-6


def test_equivariance():
    rng = np.random.default_rng(5)
    L = ob.gauge_action(ob.random_gauge(SU4, 128, rng), ob.TwistedLoop.from_alcove(SU4, [-0.2, -0.05], 1.3, 128))
    g = ob.random_gauge(SU4, 128, rng)
    M, Mg = ob.monodromy(L), ob.monodromy(ob.gauge_action(g, L))
    assert np.max(np.abs(Mg - g.g[0] @ M @ SU4.tau_inv(g.g[0]))) < 1e-6


def test_fourth_order():
    fd = ob.folded_data(SU3)
    b = 0.9
    x0 = 2 * b * 2j * np.pi * np.diag(fd.embed([-0.15]))
    errs = []
    for N in (32, 64, 128):
        g = ob.random_gauge(SU3, N, np.random.default_rng(11))
        z = ob.cf4_monodromy(ob.gauge_action(g, ob.TwistedLoop.constant(SU3, x0, 0.0, b, N)))
        errs.append(np.max(np.abs(z - g.g[0] @ expm(x0 / (2 * b)) @ np.linalg.inv(g.g[-1]))))
    assert errs[0] / errs[1] >= 8 and errs[1] / errs[2] >= 8


@given(st.integers(0, 2**31 - 1))
def test_fold_is_affine_weyl_invariant(seed):
    # torus points differing by W^1 translations and reflections fold to the same alcove point
    fd = ob.folded_data(SU4)
    rng = np.random.default_rng(seed)
    mu = rng.normal(size=2)
    T = fd.coords(np.array(fd.translation_basis, dtype=float))
    shifted = -(mu + rng.integers(-3, 4, size=2) @ T)
    a, b = ob.fold_to_alcove(fd, mu), ob.fold_to_alcove(fd, shifted)
    assert ob.in_alcove(fd, a, 1e-12)
    assert np.allclose(a, b, atol=1e-9)


@given(st.integers(0, 2**31 - 1))
def test_classify_twisted_conjugates(seed):
    rng = np.random.default_rng(seed)
    fd = ob.folded_data(SU4)
    mu = ob.random_alcove_point(fd, rng)
    from artifact.grouprep import haar_sample

    h = haar_sample(SU4, rng)
    M = h @ SU4.torus(fd.embed(mu)) @ SU4.tau_inv(h)
    assert np.linalg.norm(ob.classify_monodromy(SU4, M).coords - mu) < 1e-7


def test_character_checks_agree():
    fd = ob.folded_data(SU4)
    mu = np.array([-0.3, -0.1])
    checks = ob.character_checks(SU4, SU4.torus(fd.embed(mu)), mu)
    assert len(checks) == 2 and all(c["abs_diff"] < 1e-10 for c in checks)
