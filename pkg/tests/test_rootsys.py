from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact.rootsys import build_root_system, classical_root_count, classical_weyl_order, weyl_group_matrices

SYSTEMS = [("A", 1), ("A", 2), ("A", 4), ("B", 3), ("C", 3), ("D", 4), ("D", 5), ("BC", 2), ("E6", 6), ("F4", 4),
           ("G2", 2)]
# frozen: |W| from the classification tables
WEYL = {("A", 1): 2, ("A", 2): 6, ("A", 4): 120, ("B", 3): 48, ("C", 3): 48, ("D", 4): 192, ("D", 5): 1920,
        ("BC", 2): 8, ("E6", 6): 51840, ("F4", 4): 1152, ("G2", 2): 12}


@pytest.mark.parametrize("typ,rank", SYSTEMS)
def test_counts(typ, rank):
    R = build_root_system(typ, rank)
    assert len(R.roots) == classical_root_count(typ, rank)
    assert R.weyl_order == WEYL[(typ, rank)] == classical_weyl_order(typ, rank)


@pytest.mark.parametrize("typ,rank", SYSTEMS)
def test_root_lengths(typ, rank):
    R = build_root_system(typ, rank)
    lengths = {R.inner(a, a) for a in R.roots}
    if typ == "BC":
        assert lengths == {1, 2, 4}
    else:
        assert max(lengths) == 2


@pytest.mark.parametrize("typ,rank", [s for s in SYSTEMS if s[0] != "BC"])
def test_highest_root_dominates(typ, rank):
    R = build_root_system(typ, rank)
    th = R.highest_root
    assert all(R.inner(th, a) >= 0 for a in R.simple_roots)


def test_cartan_g2():
    R = build_root_system("G2", 2)
    C = np.array(R.cartan_matrix)
    assert sorted(C[0, 1:].tolist() + C[1, :1].tolist()) == [-3, -1]


@given(st.sampled_from([s for s in SYSTEMS if s[0] != "BC"]), st.data())
def test_reflections_permute_roots(sys_, data):
    R = build_root_system(*sys_)
    roots = set(R.roots)
    a = data.draw(st.sampled_from(R.roots))
    assert {R.reflect(a, b) for b in R.roots} == roots


@pytest.mark.parametrize("typ,rank", [("A", 3), ("B", 2), ("G2", 2)])
def test_weyl_matrices_orthogonal(typ, rank):
    R = build_root_system(typ, rank)
    mats, _ = weyl_group_matrices(R)
    assert len(mats) == R.weyl_order
    G = np.eye(R.ambient_dim)
    for M in mats[:50]:
        assert np.allclose(M.T @ G @ M, G)


def test_rho_is_half_sum():
    R = build_root_system("C", 3)
    half = tuple(sum(c) / 2 for c in zip(*R.positive_roots))
    assert tuple(Fraction(x) for x in R.rho) == tuple(Fraction(x) for x in half)
