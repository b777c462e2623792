"""Diagram automorphisms and folded root data.

For a diagram automorphism ``tau`` of order ``r`` the fixed subspace ``LS0``
of the torus algebra carries the restricted roots ``R^tau`` (orthogonal
projections of the roots of ``R``) and the system ``R1`` that governs
characters on the outer component: the dual of ``R^tau`` for reduced folds,
and ``{2 abar : abar long or middle}`` (type C) for ``A_{2n}``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _exact
from .rootsys import RootSystem, Vec, build_root_system, weyl_group_matrices

_F = Fraction


@dataclass(frozen=True, eq=False)
class DiagramAutomorphism:
    """A permutation of the simple roots preserving the Cartan matrix."""

    base: RootSystem
    perm: tuple[int, ...]
    order: int

    def __post_init__(self):
        n = self.base.rank
        p = tuple(int(i) for i in self.perm)
        object.__setattr__(self, "perm", p)
        if sorted(p) != list(range(n)):
            raise ValueError("perm is not a permutation of the simple roots")
        A = self.base.cartan_matrix
        if any(A[i][j] != A[p[i]][p[j]] for i in range(n) for j in range(n)):
            raise ValueError("perm is not a diagram symmetry")
        q, k = list(range(n)), 0
        while True:
            q = [p[i] for i in q]
            k += 1
            if q == list(range(n)):
                break
        if k != self.order:
            raise ValueError(f"perm has order {k}, not {self.order}")

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        seen, out = set(), []
        for i in range(self.base.rank):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.perm[j]
            seen.update(orb)
            out.append(tuple(orb))
        return tuple(out)

    @cached_property
    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Exact ambient matrix: permutes simple roots, fixes their orthocomplement."""
        R = self.base
        comp = _exact.nullspace(R.simple_roots, R.ambient_dim)
        src = list(R.simple_roots) + comp
        dst = [R.simple_roots[self.perm[i]] for i in range(R.rank)] + comp
        # T src_k = dst_k  =>  T = dst^T (src^T)^{-1}
        srcT = [list(col) for col in zip(*src)]
        dstT = [list(col) for col in zip(*dst)]
        T = _exact.matmul(dstT, _exact.inverse(srcT))
        return tuple(tuple(row) for row in T)

    def apply(self, v: Sequence) -> Vec:
        return _exact.matvec(self.matrix, v)

    @cached_property
    def np_matrix(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)


def standard_automorphism(R: RootSystem, order: int) -> DiagramAutomorphism:
    """The canonical diagram automorphism of the given order.

    ``A_n`` flip, ``D_n`` swap of the two spin nodes, the ``D_4`` cycle
    1 -> 3 -> 4 -> 1 and the ``E_6`` flip; order 1 is the identity.
    """
    n = R.rank
    if order == 1:
        return DiagramAutomorphism(R, tuple(range(n)), 1)
    t = R.type_tag
    if order == 2 and t == "A" and n >= 2:
        return DiagramAutomorphism(R, tuple(n - 1 - i for i in range(n)), 2)
    if order == 2 and t == "D":
        p = list(range(n))
        p[n - 2], p[n - 1] = n - 1, n - 2
        return DiagramAutomorphism(R, tuple(p), 2)
    if order == 3 and t == "D" and n == 4:
        return DiagramAutomorphism(R, (2, 1, 3, 0), 3)
    if order == 2 and t == "E6":
        return DiagramAutomorphism(R, (5, 1, 4, 3, 2, 0), 2)
    raise ValueError(f"{R.name} admits no diagram automorphism of order {order}")


def identify_type(rank: int, roots: Sequence[Vec], simple: Sequence[Vec], scale: Fraction, reduced: bool) -> str:
    """Cartan type tag of an irreducible system from root and length counts."""
    def n2(v):
        return scale * _exact.dot(v, v)

    if not reduced:
        return "BC"
    lens = Counter(n2(r) for r in roots)
    total, l = len(roots), rank
    if len(lens) == 1:
        if total == l * (l + 1):
            return "A"
        if l == 6 and total == 72:
            return "E6"
        if total == 2 * l * (l - 1):
            return "D"
    else:
        long2 = max(lens)
        nlong = lens[long2]
        if l == 2 and total == 12:
            return "G2"
        if l == 4 and total == 48 and nlong == 24:
            return "F4"
        if l == 2:
            return "C" if n2(simple[-1]) == long2 else "B"
        if nlong == 2 * l:
            return "C"
        if total - nlong == 2 * l:
            return "B"
    raise ValueError("unrecognized root system")


def _system_from_simple(type_tag: str, simple, scale, killing, reduced) -> RootSystem:
    rank = len(simple)
    tag = type_tag
    label = tag if tag in ("E6", "F4", "G2") else f"{tag}{rank}"
    return RootSystem(tag, rank, tuple(tuple(_F(x) for x in s) for s in simple), scale, killing, reduced, label)


@dataclass(frozen=True, eq=False)
class FoldedData:
    """Folded root data of a diagram automorphism (see module docstring)."""

    auto: DiagramAutomorphism
    fixed_basis_exact: tuple[Vec, ...]
    folded_roots: tuple[tuple[Vec, int, str], ...]
    rtau: RootSystem
    r1: RootSystem
    a0: int

    @property
    def base(self) -> RootSystem:
        return self.auto.base

    @property
    def order(self) -> int:
        return self.auto.order

    @property
    def folded_type(self) -> str:
        return self.rtau.name

    @property
    def l(self) -> int:
        return len(self.fixed_basis_exact)

    @property
    def dim_T_mod_S0(self) -> int:
        return self.base.rank - self.l

    @property
    def rho_tau(self) -> Vec:
        return self.r1.rho

    @cached_property
    def np_rho_tau(self) -> np.ndarray:
        return np.array(self.rho_tau, dtype=float)

    @property
    def tag(self) -> str:
        b = self.base
        core = b.type_tag + str(b.rank) if b.type_tag not in ("E6", "F4", "G2") else b.type_tag
        if b.type_tag == "E6":
            core = "E6"
        return core if self.order == 1 else f"{core}^{self.order}"

    @cached_property
    def fixed_basis(self) -> np.ndarray:
        """Rows: an orthonormal basis of LS0 for ``<,>`` in ambient coordinates."""
        B = np.array(self.fixed_basis_exact, dtype=float)
        q, _ = np.linalg.qr(B.T)
        return (q.T / np.sqrt(float(self.base.form_scale)))

    def embed(self, coords: Sequence) -> np.ndarray:
        """Ambient vector(s) of points given in the orthonormal LS0 basis."""
        c = np.asarray(coords)
        return c @ self.fixed_basis

    def coords(self, h: np.ndarray) -> np.ndarray:
        """Orthonormal LS0 coordinates of ambient vectors."""
        return float(self.base.form_scale) * (np.asarray(h) @ self.fixed_basis.T)

    @cached_property
    def projection(self) -> tuple[tuple[Fraction, ...], ...]:
        F = [list(v) for v in self.fixed_basis_exact]
        G = _exact.matmul(F, [list(c) for c in zip(*F)])
        P = _exact.matmul(_exact.matmul([list(c) for c in zip(*F)], _exact.inverse(G)), F)
        return tuple(tuple(r) for r in P)

    @cached_property
    def torus_lattice(self) -> tuple[Vec, ...]:
        """Basis of ``Q^vee`` intersected with LS0 (orbit sums of simple coroots)."""
        R = self.base
        out = []
        for orb in self.auto.orbits:
            v = [_F(0)] * R.ambient_dim
            for i in orb:
                c = R.coroot(R.simple_roots[i])
                v = [a + b for a, b in zip(v, c)]
            out.append(tuple(v))
        return tuple(out)

    @cached_property
    def translation_basis(self) -> tuple[Vec, ...]:
        """Basis of the coroot lattice of R1 (the lattice ``a0 M``)."""
        return tuple(self.r1.coroot(b) for b in self.r1.simple_roots)

    def is_tau_invariant(self, lam: Sequence) -> bool:
        p = self.auto.perm
        return all(_F(lam[i]) == _F(lam[p[i]]) for i in range(len(lam)))

    def base_weight_to_r1(self, lam: Sequence) -> tuple[Fraction, ...]:
        """R1 fundamental-weight coordinates of a tau-invariant base weight."""
        if not self.is_tau_invariant(lam):
            raise ValueError("weight is not tau-invariant")
        return self.r1.weight_coords(self.base.weight(lam))

    def r1_weight_to_base(self, mu: Sequence) -> tuple[Fraction, ...]:
        return self.base.weight_coords(self.r1.weight(mu))


def fold(auto: DiagramAutomorphism) -> FoldedData:
    """Fold the base root system along ``auto``."""
    R = auto.base
    r = auto.order
    if r > 1 and R.type_tag not in ("A", "D", "E6"):
        raise ValueError(f"no folding for type {R.type_tag}")
    fixed = []
    for orb in auto.orbits:
        v = [_F(0)] * R.ambient_dim
        for i in orb:
            v = [a + b for a, b in zip(v, R.simple_roots[i])]
        fixed.append(tuple(v))
    F = [list(v) for v in fixed]
    G = _exact.matmul(F, [list(c) for c in zip(*F)])
    P = _exact.matmul(_exact.matmul([list(c) for c in zip(*F)], _exact.inverse(G)), F)

    def proj(v):
        return _exact.matvec(P, v)

    a2n = R.type_tag == "A" and r == 2 and R.rank % 2 == 0
    mult = Counter()
    cls = {}
    for a in R.roots:
        ab = proj(a)
        ta = auto.apply(a)
        if ta == a:
            c = "long"
        elif a2n and R.inner(a, ta) == 0:
            c = "middle"
        elif a2n:
            c = "short"
        else:
            c = "short"
        if ab in cls and cls[ab] != c:
            raise RuntimeError("inconsistent length classes")
        cls[ab] = c
        mult[ab] += 1
    distinct = sorted(mult, key=lambda v: (cls[v], v))

    simple_tau = []
    for orb in auto.orbits:
        s = proj(R.simple_roots[orb[0]])
        simple_tau.append(s)
    reduced = not a2n
    scale = R.form_scale
    # R^tau
    tag_tau = identify_type(len(simple_tau), distinct, simple_tau, scale, reduced)
    rtau = _system_from_simple(tag_tau, simple_tau, scale, R.killing_scale, reduced)
    if set(rtau.roots) != set(distinct):
        raise RuntimeError("restricted roots do not form the expected system")
    # R1
    if a2n:
        simple1 = []
        for s in simple_tau:
            if cls[s] == "middle":
                simple1.append(tuple(2 * x for x in s))
            else:
                simple1.append(tuple(4 * x for x in s))
        target = {tuple(2 * x for x in v) for v in distinct if cls[v] in ("long", "middle")}
    else:
        simple1 = [rtau.coroot(s) for s in simple_tau]
        target = {rtau.coroot(v) for v in distinct}
    tag1 = "C" if a2n else identify_type(len(simple1), list(target), simple1, scale, True)
    r1 = _system_from_simple(tag1, simple1, scale, R.killing_scale, True)
    if set(r1.roots) != target:
        raise RuntimeError("R1 closure mismatch")
    folded = tuple((v, mult[v], cls[v]) for v in distinct)
    if r == 1:
        folded = tuple((v, 1, R.length_class(v)) for v in R.roots)
    return FoldedData(auto, tuple(fixed), folded, rtau, r1, 2 if a2n else 1)


def fold_tag(tag: str) -> FoldedData:
    """Fold from an algebra tag ``<Type><rank>^<r>`` such as ``A4^2`` or ``D4^3``."""
    t = tag.strip()
    r = 1
    if "^" in t:
        t, rs = t.split("^")
        r = int(rs.strip("()"))
    t = t.upper()
    if t.startswith("E6") or t.startswith("F4") or t.startswith("G2"):
        typ, rank = t[:2], int(t[1])
    elif t.startswith("BC"):
        typ, rank = "BC", int(t[2:])
    else:
        typ, rank = t[0], int(t[1:])
    R = build_root_system(typ, rank)
    return fold(standard_automorphism(R, r))


def weyl_group_orders(fd: FoldedData) -> dict:
    """``|W^tau|`` by enumeration and ``|W(S)|`` from the split extension."""
    w_tau = fd.r1.weyl_order
    r = fd.order
    if r == 1:
        w_s = w_tau
    elif r == 2:
        w_s = 2**fd.dim_T_mod_S0 * w_tau
    else:
        w_s = 3 * w_tau
    return {"order_W_tau": w_tau, "order_W_S": w_s}


def m_lattice_basis(fd: FoldedData) -> dict:
    """Basis of the translation lattice ``M`` with ``a0 M`` the coroot lattice of R1.

    Returns the basis of ``M``, the basis of ``a0 M`` and the Gram determinant
    of ``a0 M`` under ``<,>`` (its square root is the covolume used in the
    Poisson normalization).
    """
    T = fd.translation_basis
    Mb = tuple(tuple(x / fd.a0 for x in v) for v in T)
    G = [[fd.base.inner(a, b) for b in T] for a in T]
    det = _det(G)
    return {"basis": Mb, "translation_basis": T, "gram_det": det, "covolume": float(det) ** 0.5}


def _det(G) -> Fraction:
    n = len(G)
    m = [list(map(_F, row)) for row in G]
    d = _F(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return _F(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def in_lattice(basis: Sequence[Vec], v: Sequence) -> bool:
    """True if ``v`` is an integral combination of the independent ``basis``."""
    try:
        c = _exact.solve_left(basis, v)
    except ValueError:
        return False
    return all(x.denominator == 1 for x in c)


def centralizer_order(fd: FoldedData) -> int:
    """Brute-force ``|{w in W : tau w tau^-1 = w}|`` on the base Weyl group."""
    mats, _ = weyl_group_matrices(fd.base)
    T = fd.auto.np_matrix
    Ti = np.linalg.inv(T)
    conj = np.einsum("ij,njk,kl->nil", T, mats, Ti)
    return int(np.sum(np.all(np.abs(conj - mats) < 1e-9, axis=(1, 2))))
