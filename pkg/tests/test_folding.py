import pytest

from artifact.folding import centralizer_order, fold_tag, weyl_group_orders

# frozen: folded type, R1 type, a0, |W^tau|
TABLE = {
    "A3^2": ("C2", "B2", 1, 8), "A5^2": ("C3", "B3", 1, 48), "A2^2": ("BC1", "C1", 2, 2),
    "A4^2": ("BC2", "C2", 2, 8), "D4^2": ("B3", "C3", 1, 48), "D5^2": ("B4", "C4", 1, 384),
    "D4^3": ("G2", "G2", 1, 12), "E6^2": ("F4", "F4", 1, 1152),
}


@pytest.mark.parametrize("tag", TABLE)
def test_fold_table(tag):
    fd = fold_tag(tag)
    ftype, r1, a0, w = TABLE[tag]
    assert fd.folded_type == ftype
    assert fd.r1.name == r1
    assert fd.a0 == a0
    assert weyl_group_orders(fd)["order_W_tau"] == w


@pytest.mark.parametrize("tag", TABLE)
def test_rho_tau_is_tau_fixed(tag):
    fd = fold_tag(tag)
    assert tuple(fd.auto.apply(fd.rho_tau)) == tuple(fd.rho_tau)
    # rho^tau from R1 agrees with the base rho on every supported fold
    assert tuple(fd.rho_tau) == tuple(fd.base.rho)


@pytest.mark.parametrize("tag", TABLE)
def test_embed_coords_inverse(tag):
    import numpy as np

    fd = fold_tag(tag)
    x = np.random.default_rng(0).normal(size=(5, fd.l))
    assert np.allclose(fd.coords(fd.embed(x)), x)


def test_untwisted_fold_is_trivial():
    fd = fold_tag("A3")
    assert fd.order == 1 and fd.l == 3 and fd.dim_T_mod_S0 == 0


def test_weyl_s_extension():
    fd = fold_tag("A3^2")
    o = weyl_group_orders(fd)
    assert o["order_W_S"] % o["order_W_tau"] == 0
    assert centralizer_order(fd) >= 1


def test_tau_invariant_weights():
    fd = fold_tag("A4^2")
    assert fd.is_tau_invariant((1, 2, 2, 1))
    assert not fd.is_tau_invariant((1, 0, 0, 0))
    with pytest.raises(ValueError):
        fd.base_weight_to_r1((1, 0, 0, 0))
