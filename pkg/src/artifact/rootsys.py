"""Exact finite root systems.

Every system lives in an ambient coordinate space whose invariant form is a
rational multiple of the standard dot product, ``<x, y> = form_scale * x.y``.
The scale is chosen so that long roots have squared length 2 (for ``BC_n``
the squared lengths are 1, 2, 4 with the middle roots C-normalized).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _exact

Vec = tuple[Fraction, ...]
WeightVector = tuple[Fraction, ...]
"""Coordinates in the fundamental-weight basis of a named root system."""

_F = Fraction


def _vec(xs) -> Vec:
    return tuple(_F(x) for x in xs)


def _unit(i: int, n: int, s=1) -> list[Fraction]:
    v = [_F(0)] * n
    v[i] = _F(s)
    return v


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A finite root system with exact rational data.

    Attributes
    ----------
    type_tag : str
        One of ``A, B, C, D, E6, F4, G2, BC``.
    rank : int
    simple_roots : tuple of Vec
        Ordered basis in ambient coordinates (Bourbaki labelling).
    form_scale : Fraction
        ``<x, y> = form_scale * dot(x, y)`` on the ambient space.
    killing_scale : Fraction
        Factor converting ``<,>`` to the Killing form of the base algebra.
    reduced : bool
        False only for ``BC``.
    """

    type_tag: str
    rank: int
    simple_roots: tuple[Vec, ...]
    form_scale: Fraction
    killing_scale: Fraction
    reduced: bool = True
    label: str = field(default="")

    # exact structure -------------------------------------------------
    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        return self.form_scale * _exact.dot(x, y)

    @property
    def ambient_dim(self) -> int:
        return len(self.simple_roots[0])

    @property
    def form_matrix(self) -> list[list[Fraction]]:
        d = self.ambient_dim
        return [[self.form_scale if i == j else _F(0) for j in range(d)] for i in range(d)]

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        """``A[i][j] = <alpha_i, alpha_j^vee>``."""
        s = self.simple_roots
        out = []
        for a in s:
            row = []
            for b in s:
                v = 2 * self.inner(a, b) / self.inner(b, b)
                if v.denominator != 1:
                    raise ValueError("non-crystallographic simple system")
                row.append(int(v))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def _root_coeffs(self) -> tuple[tuple[int, ...], ...]:
        # closure of the simple roots under simple reflections, tracked as
        # integer coefficient vectors in the simple-root basis
        n = self.rank
        A = self.cartan_matrix
        seen = {tuple(int(i == j) for j in range(n)) for i in range(n)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for c in frontier:
                for i in range(n):
                    p = sum(c[j] * A[j][i] for j in range(n))
                    if p == 0:
                        continue
                    d = list(c)
                    d[i] -= p
                    d = tuple(d)
                    if d not in seen:
                        seen.add(d)
                        nxt.append(d)
            frontier = nxt
        if not self.reduced:
            len2 = {c: self._len2_coeffs(c) for c in seen}
            m = min(len2.values())
            short = [c for c in seen if len2[c] == m]
            seen |= {tuple(2 * x for x in c) for c in short}
        pos = sorted((c for c in seen if all(x >= 0 for x in c)), key=lambda c: (sum(c), c))
        return tuple(pos) + tuple(tuple(-x for x in c) for c in pos)

    def _len2_coeffs(self, c) -> Fraction:
        v = self.from_simple_coords(c)
        return self.inner(v, v)

    def from_simple_coords(self, c: Sequence) -> Vec:
        out = [_F(0)] * self.ambient_dim
        for ci, a in zip(c, self.simple_roots):
            if ci:
                ci = _F(ci)
                for k, x in enumerate(a):
                    if x:
                        out[k] += ci * x
        return tuple(out)

    @cached_property
    def roots(self) -> tuple[Vec, ...]:
        """Positive roots (by height) followed by their negatives."""
        return tuple(self.from_simple_coords(c) for c in self._root_coeffs)

    @cached_property
    def positive_roots(self) -> tuple[Vec, ...]:
        return self.roots[: len(self.roots) // 2]

    @cached_property
    def highest_root(self) -> Vec:
        # highest root of the reduced part that is long, via maximal height
        pos = self._root_coeffs[: len(self.roots) // 2]
        if not self.reduced:
            pos = [c for c in pos if not all(x % 2 == 0 for x in c)]
        return self.from_simple_coords(max(pos, key=lambda c: (sum(c), c)))

    def coroot(self, alpha: Sequence) -> Vec:
        a = _vec(alpha)
        n2 = self.inner(a, a)
        return tuple(2 * x / n2 for x in a)

    @cached_property
    def fundamental_weights(self) -> tuple[Vec, ...]:
        X = _exact.inverse(self.cartan_matrix)
        return tuple(self.from_simple_coords(row) for row in X)

    @cached_property
    def rho(self) -> Vec:
        d = self.ambient_dim
        return tuple(sum((r[k] for r in self.positive_roots), _F(0)) / 2 for k in range(d))

    @cached_property
    def squared_lengths(self) -> tuple[Fraction, ...]:
        return tuple(sorted({self.inner(r, r) for r in self.roots}))

    def length_class(self, alpha: Sequence) -> str:
        n2 = self.inner(alpha, alpha)
        ls = self.squared_lengths
        if len(ls) == 1:
            return "long"
        if n2 == ls[-1]:
            return "long"
        if n2 == ls[0]:
            return "short"
        return "middle"

    def weight(self, coords: Sequence) -> Vec:
        """Ambient vector of the weight with fundamental-weight coordinates."""
        if len(coords) != self.rank:
            raise ValueError(f"weight needs {self.rank} coordinates, got {len(coords)}")
        d = self.ambient_dim
        w = self.fundamental_weights
        return tuple(sum((_F(coords[i]) * w[i][k] for i in range(self.rank)), _F(0)) for k in range(d))

    def weight_coords(self, v: Sequence) -> WeightVector:
        """Fundamental-weight coordinates ``<v, alpha_i^vee>``."""
        return tuple(self.inner(v, self.coroot(a)) for a in self.simple_roots)

    @cached_property
    def weight_gram(self) -> tuple[tuple[Fraction, ...], ...]:
        w = self.fundamental_weights
        return tuple(tuple(self.inner(a, b) for b in w) for a in w)

    def norm2_weight(self, coords: Sequence) -> Fraction:
        G = self.weight_gram
        n = self.rank
        return sum((_F(coords[i]) * G[i][j] * coords[j] for i in range(n) for j in range(n)), _F(0))

    def reflect(self, alpha: Sequence, v: Sequence) -> Vec:
        c = self.inner(v, self.coroot(alpha))
        return tuple(_F(x) - c * a for x, a in zip(v, alpha))

    @cached_property
    def weyl_order(self) -> int:
        """Order of W as the size of the orbit of the regular weight rho."""
        A = self.cartan_matrix
        n = self.rank
        start = (1,) * n
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for lam in frontier:
                for i in range(n):
                    if lam[i] == 0:
                        continue
                    mu = tuple(lam[j] - lam[i] * A[i][j] for j in range(n))
                    if mu not in seen:
                        seen.add(mu)
                        nxt.append(mu)
            frontier = nxt
        return len(seen)

    # float views --------------------------------------------------------
    @cached_property
    def np_roots(self) -> np.ndarray:
        return np.array(self.roots, dtype=float)

    @cached_property
    def np_positive_roots(self) -> np.ndarray:
        return np.array(self.positive_roots, dtype=float)

    @cached_property
    def np_simple_roots(self) -> np.ndarray:
        return np.array(self.simple_roots, dtype=float)

    @cached_property
    def np_rho(self) -> np.ndarray:
        return np.array(self.rho, dtype=float)

    def np_weight(self, coords: Sequence) -> np.ndarray:
        return np.array(self.weight(coords), dtype=float)

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return self.type_tag if self.type_tag in ("E6", "F4", "G2") else f"{self.type_tag}{self.rank}"

    def to_dict(self) -> dict:
        fs = _exact.frac_str
        return {
            "type_tag": self.type_tag,
            "rank": self.rank,
            "roots": [[fs(x) for x in r] for r in self.roots],
            "simple_roots": [[fs(x) for x in r] for r in self.simple_roots],
            "positive_roots": [[fs(x) for x in r] for r in self.positive_roots],
            "form_matrix": [[fs(x) for x in row] for row in self.form_matrix],
            "rho": [fs(x) for x in self.rho],
            "fundamental_weights": [[fs(x) for x in w] for w in self.fundamental_weights],
            "killing_scale": fs(self.killing_scale),
        }


_CLASSICAL_ORDER = {
    "A": lambda n: math.factorial(n + 1),
    "B": lambda n: 2**n * math.factorial(n),
    "C": lambda n: 2**n * math.factorial(n),
    "BC": lambda n: 2**n * math.factorial(n),
    "D": lambda n: 2 ** (n - 1) * math.factorial(n),
    "E6": lambda n: 51840,
    "F4": lambda n: 1152,
    "G2": lambda n: 12,
}


def classical_weyl_order(type_tag: str, rank: int) -> int:
    return _CLASSICAL_ORDER[type_tag](rank)


def classical_root_count(type_tag: str, rank: int) -> int:
    n = rank
    return {
        "A": n * (n + 1),
        "B": 2 * n * n,
        "C": 2 * n * n,
        "D": 2 * n * (n - 1),
        "BC": 2 * n * n + 2 * n,
        "E6": 72,
        "F4": 48,
        "G2": 12,
    }[type_tag]


def build_root_system(type_tag: str, rank: int) -> RootSystem:
    """Construct one of the supported root systems.

    Parameters
    ----------
    type_tag : str
        ``A, B, C, D, E6, F4, G2`` or ``BC``.
    rank : int

    Raises
    ------
    ValueError
        For an unsupported (type, rank) pair.
    """
    t, n = type_tag.upper(), int(rank)
    valid = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 1,
        "D": n >= 3,
        "BC": n >= 1,
        "E6": n == 6,
        "F4": n == 4,
        "G2": n == 2,
    }
    if t == "E":
        t = f"E{n}"
    if t not in valid or not valid[t]:
        raise ValueError(f"unsupported root system ({type_tag}, {rank})")
    one = _F(1)
    if t == "A":
        simple = [_unit(i, n + 1) for i in range(n)]
        for i in range(n):
            simple[i][i + 1] = _F(-1)
        return RootSystem("A", n, tuple(map(_vec, simple)), one, _F(2 * (n + 1)))
    if t in ("B", "BC", "C", "D"):
        simple = []
        for i in range(n - 1):
            v = _unit(i, n)
            v[i + 1] = _F(-1)
            simple.append(v)
        if t in ("B", "BC"):
            simple.append(_unit(n - 1, n))
            ks = _F(2 * (2 * n - 1)) if t == "B" else _F(2 * (2 * n + 1))
            return RootSystem(t, n, tuple(map(_vec, simple)), one, ks, reduced=(t == "B"))
        if t == "C":
            simple.append(_unit(n - 1, n, 2))
            return RootSystem("C", n, tuple(map(_vec, simple)), _F(1, 2), _F(2 * (n + 1)))
        v = _unit(n - 2, n)
        v[n - 1] = _F(1)
        simple.append(v)
        return RootSystem("D", n, tuple(map(_vec, simple)), one, _F(2 * (2 * n - 2)))
    h = _F(1, 2)
    if t == "E6":
        simple = [
            [h, -h, -h, -h, -h, -h, -h, h],
            [1, 1, 0, 0, 0, 0, 0, 0],
            [-1, 1, 0, 0, 0, 0, 0, 0],
            [0, -1, 1, 0, 0, 0, 0, 0],
            [0, 0, -1, 1, 0, 0, 0, 0],
            [0, 0, 0, -1, 1, 0, 0, 0],
        ]
        return RootSystem("E6", 6, tuple(map(_vec, simple)), one, _F(24))
    if t == "F4":
        simple = [[0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 0, 1], [h, -h, -h, -h]]
        return RootSystem("F4", 4, tuple(map(_vec, simple)), one, _F(18))
    simple = [[1, -1, 0], [-2, 1, 1]]
    return RootSystem("G2", 2, tuple(map(_vec, simple)), _F(1, 3), _F(8))


def dual_root(R: RootSystem, alpha: Sequence) -> Vec:
    """Return ``2 alpha / <alpha, alpha>``.

    Raises
    ------
    ValueError
        If ``alpha`` is not a root of ``R``.
    """
    a = _vec(alpha)
    if a not in set(R.roots):
        raise ValueError("not a root of the given system")
    return R.coroot(a)


def dominant_weights_below(R: RootSystem, norm_cap) -> list[WeightVector]:
    """Dominant weights with ``<lam + rho, lam + rho> <= norm_cap``.

    Sorted by that norm, then lexicographically.  Adding a fundamental
    weight strictly increases the norm, so a monotone search is exhaustive.
    """
    cap = _F(norm_cap) if not isinstance(norm_cap, float) else _F(norm_cap).limit_denominator(10**12)
    n = R.rank
    rho_c = R.weight_coords(R.rho)
    G = R.weight_gram

    def norm(c):
        v = [c[i] + rho_c[i] for i in range(n)]
        return sum((v[i] * G[i][j] * v[j] for i in range(n) for j in range(n)), _F(0))

    start = (0,) * n
    if norm(start) > cap:
        return []
    out = {start: norm(start)}
    stack = [start]
    while stack:
        c = stack.pop()
        for i in range(n):
            d = list(c)
            d[i] += 1
            d = tuple(d)
            if d in out:
                continue
            nd = norm(d)
            if nd <= cap:
                out[d] = nd
                stack.append(d)
    keys = sorted(out, key=lambda c: (out[c], c))
    return [tuple(_F(x) for x in c) for c in keys]


def reflection_matrix(alpha: Sequence) -> np.ndarray:
    """Ambient matrix of the orthogonal reflection in ``alpha``."""
    a = np.asarray(alpha, dtype=float)
    return np.eye(a.size) - 2.0 * np.outer(a, a) / (a @ a)


def weyl_group_matrices(R: RootSystem) -> tuple[np.ndarray, np.ndarray]:
    """Enumerate W(R) as ambient matrices together with det signs.

    Breadth-first search over words in the simple reflections; elements are
    identified by their image of the regular vector rho.
    """
    S = [reflection_matrix(a) for a in R.simple_roots]
    d = R.ambient_dim
    rho = R.np_rho
    mats = [np.eye(d)]
    signs = [1]
    seen = {tuple(np.round(rho, 8))}
    frontier = [0]
    while frontier:
        nxt = []
        for k in frontier:
            for s in S:
                m = s @ mats[k]
                key = tuple(np.round(m @ rho, 8))
                if key in seen:
                    continue
                seen.add(key)
                mats.append(m)
                signs.append(-signs[k])
                nxt.append(len(mats) - 1)
        frontier = nxt
    return np.array(mats), np.array(signs, dtype=float)
