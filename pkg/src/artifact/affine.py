"""Affine Weyl group sums: the analytic Kac-Weyl numerator and its Poisson dual.

Notation.  ``l = dim LS0``, ``(,)`` is the base invariant form restricted to
LS0 and extended bilinearly to complex vectors.  The translation lattice is
``a0 M = Q(R1^vee)``, the coroot lattice of ``R1``, with covolume ``vol``.
For ``Re(1/t) > 0`` and ``h, k`` in the complexified LS0 the lattice side is

    L(t, h, k) = sum_{gamma in a0 M} sum_{w in W^tau} eps(w)
                 exp(|2 pi i gamma + h - w k|^2 / 2t)

and the character side is

    (vol (2 pi / t)^(l/2))^-1 sum_{nu in rho^tau + P+(R1)}
        A(nu)(h) A(nu)(-k) exp(-(t/2) |nu|^2)

with ``A(nu)(h) = sum_w eps(w) exp((w nu, h))``.  The numerator of the
affine character at ``Lambda + rho~ = aD + H`` and the point ``bD + K`` is
``exp(-(|h|^2 + |k|^2)/2t) L(t, h, k)`` with ``t = -1/(ab)``,
``h = H/a``, ``k = K/b``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import charform, kernels, lattice
from .folding import FoldedData, fold_tag, m_lattice_basis
from .rootsys import dominant_weights_below


@dataclass(frozen=True, eq=False)
class AffineAlgebraTag:
    """An affine algebra ``X_n^(r)`` through its folded data."""

    tag: str
    fd: FoldedData

    @classmethod
    def parse(cls, tag: str) -> "AffineAlgebraTag":
        return cls(tag, fold_tag(tag))

    @property
    def l(self) -> int:
        return self.fd.l

    @property
    def a0(self) -> int:
        return self.fd.a0

    @cached_property
    def basis(self) -> np.ndarray:
        """Rows: basis of ``a0 M`` in orthonormal LS0 coordinates."""
        T = np.array(self.fd.translation_basis, dtype=float)
        return self.fd.coords(T)

    @cached_property
    def weight_basis(self) -> np.ndarray:
        """Rows: fundamental weights of R1 in orthonormal LS0 coordinates."""
        return self.fd.coords(np.array(self.fd.r1.fundamental_weights, dtype=float))

    @cached_property
    def vol(self) -> float:
        """Covolume of ``a0 M``."""
        return m_lattice_basis(self.fd)["covolume"]

    @cached_property
    def weyl(self) -> charform.WeylGroupTable:
        return charform.weyl_table(self.fd.r1)

    @cached_property
    def weyl_coords(self) -> np.ndarray:
        """``W^tau`` as ``(|W|, l, l)`` matrices on orthonormal LS0 coordinates."""
        F = self.fd.fixed_basis
        s = float(self.fd.base.form_scale)
        return s * np.einsum("ia,nab,jb->nij", F, self.weyl.elements, F)

    @cached_property
    def dual_coxeter(self) -> int:
        """Dual Coxeter number ``h^vee = a0 <rho^tau, theta^vee> + 1``, theta the highest root of R1.

        The affine wall is ``(x, theta) = kappa`` and ``alpha_0 = (delta - theta)/a0``,
        so ``<rho~, alpha_0^vee> = 1`` gives this value.
        """
        R1 = self.fd.r1
        th = R1.highest_root
        return int(self.a0 * R1.inner(self.fd.rho_tau, R1.coroot(th)) + 1)


@dataclass(frozen=True)
class AffinePoint:
    """Scaled point ``(t, h, k)``; ``h, k`` in orthonormal LS0 coordinates."""

    t: complex
    h: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        if (1 / complex(self.t)).real <= 0:
            raise ValueError("need Re(1/t) > 0")


def _q(x: np.ndarray, y: np.ndarray | None = None):
    """Bilinear ``(x, y)`` on the last axis."""
    return np.sum(x * (x if y is None else y), axis=-1)


def numerator_lattice_side(alg: AffineAlgebraTag, p: AffinePoint, tol: float = 1e-13,
                           with_prefactor: bool = False) -> dict:
    """``L(t, h, k)``, or ``exp(-(|h|^2+|k|^2)/2t) L`` with ``with_prefactor``.

    ``tol`` is relative: the enumeration radius is grown until the proven
    tail bound is below ``tol`` times the magnitude of the partial sum.
    Sums that cancel by more than ``CANCEL_LIMIT`` are recomputed in
    extended precision from exact lattice and Weyl data.  Returns
    ``{"value", "tail_bound", "radius", "n_points", "extended", "cond"}``.
    """
    fd = alg.fd
    h = np.asarray(p.h, dtype=complex)
    k = np.asarray(p.k, dtype=complex)
    t = complex(p.t)
    c = 1.0 / (2.0 * t)
    WK = np.einsum("nij,j->ni", alg.weyl_coords, k)
    X = h[None, :] - WK
    signs = alg.weyl.signs
    base = c * _q(X)
    if with_prefactor:
        base = base - c * (_q(h) + _q(k))
    a = 4 * math.pi**2 * c.real
    B = alg.basis
    covol = alg.vol
    rcov = lattice.covering_radius_bound(B)
    V = (4j * math.pi * c * X).real
    b = float(np.max(np.linalg.norm(V, axis=1)))
    logK = float(np.max(base.real)) + math.log(len(signs))

    def evaluate(radius):
        G, N = lattice.enumerate_ball(B, np.zeros(alg.l), radius, return_coeffs=True)
        wts = np.exp(-4 * math.pi**2 * c * _q(G))
        S = kernels.expsum(G, wts.astype(complex), 4j * math.pi * c * X)
        value = np.sum(signs * np.exp(base) * S)
        mag = np.sum(np.exp(base.real) * kernels.expsum(G, np.abs(wts).astype(complex), V).real)
        cond = mag / max(abs(value), 1e-300)
        if cond > CANCEL_LIMIT:
            value = _mp_lattice(alg, N, t, fd.embed(h), fd.embed(k), with_prefactor, cond)
        return value, len(G), cond

    r1, _ = lattice.gaussian_radius(a, b, 0, logK, alg.l, covol, rcov, math.exp(logK) * 1e-3)
    v1, _, _ = evaluate(r1)
    target = tol * max(abs(v1), 1e-12 * math.exp(logK))
    r2, bound = lattice.gaussian_radius(a, b, 0, logK, alg.l, covol, rcov, target)
    value, n, cond = evaluate(max(r1, r2))
    return {"value": complex(value), "tail_bound": bound, "radius": max(r1, r2), "n_points": n,
            "extended": bool(cond > CANCEL_LIMIT), "cond": float(cond)}


# sums whose absolute magnitude exceeds the result by more than this factor are
# redone in extended precision
CANCEL_LIMIT = 1e4


def _digits(cond: float) -> int:
    return 25 + int(math.log10(max(cond, 1.0)))


def _mpvec(v):
    import mpmath

    return [mpmath.mpc(complex(x)) if isinstance(x, (complex, np.complexfloating))
            else mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction)
            else mpmath.mpf(float(x)) for x in v]


def _mp_lattice(alg: AffineAlgebraTag, N, t, H, K, with_prefactor, cond) -> complex:
    """Lattice side in ambient coordinates with exact lattice and Weyl data."""
    import mpmath

    fd = alg.fd
    Tb = fd.translation_basis
    d = fd.base.ambient_dim
    sc = fd.base.form_scale
    with mpmath.workdps(_digits(cond)):
        s = mpmath.mpf(sc.numerator) / sc.denominator
        cm = 1 / (2 * mpmath.mpc(t))
        Hm = _mpvec(H)
        Km = _mpvec(K)
        dot = lambda x, y: s * mpmath.fsum(u * v for u, v in zip(x, y))
        gam = []
        for n in N:
            g = [sum((int(n[i]) * Tb[i][j] for i in range(len(Tb))), Fraction(0)) for j in range(d)]
            gam.append(_mpvec(g))
        two_pi_i = 2j * mpmath.pi
        acc = mpmath.mpc(0)
        pre = cm * (dot(Hm, Hm) + dot(Km, Km)) if with_prefactor else 0
        for w, sg in zip(alg.weyl.exact_elements, alg.weyl.signs):
            wK = [mpmath.fsum(mpmath.mpf(e.numerator) / e.denominator * kk for e, kk in zip(row, Km))
                  for row in w]
            x = [u - v for u, v in zip(Hm, wK)]
            inner = mpmath.fsum(mpmath.exp(cm * dot(y, y)) for y in
                                ([two_pi_i * gi + xi for gi, xi in zip(g, x)] for g in gam))
            acc += int(sg) * inner
        return complex(acc * mpmath.exp(-pre))


def numerator_character_side(alg: AffineAlgebraTag, p: AffinePoint, tol: float = 1e-13) -> dict:
    """Character side of the Poisson identity (see module docstring).

    ``A(nu)(h) A(nu)(-k)`` equals ``delta(h) delta(-k) chi~(h) chi~(-k)`` for
    either sign choice, so no twining sign enters.
    """
    fd = alg.fd
    t = complex(p.t)
    h = np.asarray(p.h, dtype=complex)
    k = np.asarray(p.k, dtype=complex)
    Hh = fd.embed(h)
    Hk = fd.embed(-k)
    R1 = fd.r1
    W = alg.weyl
    nW = len(W)
    a = t.real / 2
    b = float(np.linalg.norm(h.real) + np.linalg.norm(k.real))
    Pb = alg.weight_basis
    covol = lattice.covolume(Pb)
    rcov = lattice.covering_radius_bound(Pb)
    logK = 2 * math.log(nW)
    norm = alg.vol * (2 * math.pi / t) ** (alg.l / 2)
    s = float(fd.base.form_scale)

    def evaluate(radius):
        ws = dominant_weights_below(R1, Fraction(radius**2).limit_denominator(10**9))
        nus = [tuple(x + y for x, y in zip(R1.weight(lam), fd.rho_tau)) for lam in ws]
        total = 0j
        mag = 0.0
        for nu in nus:
            pts, sg, _, _ = W._orbit_data(nu)
            O = np.array(pts, dtype=float)
            e1 = np.exp(s * O @ Hh)
            e2 = np.exp(s * O @ Hk)
            g = np.exp(-t * float(R1.inner(nu, nu)) / 2)
            total += np.sum(sg * e1) * np.sum(sg * e2) * g
            mag += np.sum(np.abs(e1)) * np.sum(np.abs(e2)) * abs(g)
        cond = mag / max(abs(total), 1e-300)
        if cond > CANCEL_LIMIT:
            total = _mp_character(alg, nus, t, Hh, Hk, cond)
        return total / norm, len(ws), cond > CANCEL_LIMIT

    r1, _ = lattice.gaussian_radius(a, b, 0, logK, alg.l, covol, rcov, math.exp(logK) * 1e-3)
    v1, _, _ = evaluate(r1)
    target = tol * max(abs(v1 * norm), 1e-300)
    r2, bound = lattice.gaussian_radius(a, b, 0, logK, alg.l, covol, rcov, target)
    value, n, ext = evaluate(max(r1, r2))
    return {"value": complex(value), "tail_bound": bound / abs(norm), "radius": max(r1, r2),
            "n_terms": n, "extended": ext}


def _mp_character(alg: AffineAlgebraTag, nus, t, Hh, Hk, cond) -> complex:
    import mpmath

    fd = alg.fd
    sc = fd.base.form_scale
    W = alg.weyl
    with mpmath.workdps(_digits(cond)):
        s = mpmath.mpf(sc.numerator) / sc.denominator
        A = _mpvec(Hh)
        B = _mpvec(Hk)
        tm = mpmath.mpc(t)
        total = mpmath.mpc(0)
        for nu in nus:
            pts, sg, _, _ = W._orbit_data(nu)
            s1 = s2 = mpmath.mpc(0)
            for pt, e in zip(pts, sg):
                v = _mpvec(pt)
                s1 += int(e) * mpmath.exp(s * mpmath.fsum(x * y for x, y in zip(v, A)))
                s2 += int(e) * mpmath.exp(s * mpmath.fsum(x * y for x, y in zip(v, B)))
            n2 = fd.r1.inner(nu, nu)
            total += s1 * s2 * mpmath.exp(-tm * (mpmath.mpf(n2.numerator) / n2.denominator) / 2)
        return complex(total)


def poisson_check(alg: AffineAlgebraTag, t: complex, h, k, tol: float = 1e-13) -> dict:
    """Both sides of the Poisson identity and their relative difference."""
    p = AffinePoint(t, np.asarray(h, dtype=complex), np.asarray(k, dtype=complex))
    L = numerator_lattice_side(alg, p, tol)
    C = numerator_character_side(alg, p, tol)
    rel = abs(L["value"] - C["value"]) / abs(C["value"])
    return {"lattice_side": L["value"], "character_side": C["value"], "rel_err": rel,
            "lattice_tail": L["tail_bound"], "character_tail": C["tail_bound"]}


def lattice_action(alg: AffineAlgebraTag, gamma: Sequence, point: tuple) -> tuple:
    """Translation by ``gamma`` in ``M`` on ``h + a c + b d``, given as ``(h, a, b)``.

    ``gamma`` and ``h`` are ambient vectors of any exact scalar type.  The map is
    ``h -> h + b a0 gamma``, ``a -> a - (h, gamma) - (b a0 / 2) |gamma|^2``,
    ``b -> b``; it composes as ``gamma, gamma' -> gamma + gamma'``.
    """
    h, a, b = point
    s = alg.fd.base.form_scale
    a0 = alg.a0
    hg = s * sum(x * y for x, y in zip(h, gamma))
    gg = s * sum(x * x for x in gamma)
    h2 = tuple(x + b * a0 * g for x, g in zip(h, gamma))
    return h2, a - hg - b * a0 * gg / 2, b


# --- affine characters ------------------------------------------------------

@dataclass(frozen=True)
class HighestWeight:
    """Dominant affine weight ``Lambda`` as (level, finite part) with ``<Lambda, d> = 0``.

    ``finite`` holds base fundamental-weight coordinates of a tau-invariant
    weight.
    """

    level: int
    finite: tuple[int, ...]


def level_unit(alg: AffineAlgebraTag) -> Fraction:
    """Factor ``|theta|^2 / 2 a0`` converting ``m + h^vee`` to the scale of ``(,)`` on LS0."""
    R1 = alg.fd.r1
    th = R1.highest_root
    return R1.inner(th, th) / (2 * alg.a0)


def check_dominant(alg: AffineAlgebraTag, lam: HighestWeight) -> None:
    fd = alg.fd
    if not fd.is_tau_invariant(lam.finite) or any(x < 0 for x in lam.finite):
        raise ValueError("finite part must be dominant and tau-invariant")
    R1 = fd.r1
    v = fd.base.weight(lam.finite)
    th = R1.highest_root
    if alg.a0 * R1.inner(v, R1.coroot(th)) > lam.level:
        raise ValueError("weight is not dominant at this level")


def affine_numerator(alg: AffineAlgebraTag, lam: HighestWeight, b: complex, K, tol: float = 1e-14,
                     full: bool = False):
    """``N(Lambda + rho~)(bD + K)`` through the lattice side (the full record with ``full``)."""
    fd = alg.fd
    kappa = float(level_unit(alg) * (lam.level + alg.dual_coxeter))
    nu = fd.coords(np.array(fd.base.weight(lam.finite), dtype=float) + fd.np_rho_tau)
    a = kappa / (2j * math.pi)
    t = -1.0 / (a * b)
    h = nu / a
    k = np.asarray(K, dtype=complex) / b
    rec = numerator_lattice_side(alg, AffinePoint(t, h, k), tol, with_prefactor=True)
    return rec if full else rec["value"]


# denominators cancelling beyond this factor are treated as lying on a wall
WALL_COND = 1e8
# sample count and radius (relative to |rho|) of the circle used at walls
WALL_SAMPLES = 24
WALL_RADIUS = 0.05


def character_value(alg: AffineAlgebraTag, lam: HighestWeight, b: complex, K, tol: float = 1e-14) -> complex:
    """``ch L(Lambda)(bD + K)`` as the ratio of numerators at ``Lambda`` and ``0``.

    Requires ``Im b < 0`` (the convergence domain).  ``K`` is given in
    orthonormal LS0 coordinates and enters as ``exp((mu, K))``, so ``K = 2 pi i z``
    with real ``z`` is a point of the compact torus.
    """
    if not complex(b).imag < 0:
        raise ValueError("point outside the convergence domain Y(V(Lambda)): need Im b < 0")
    check_dominant(alg, lam)
    zero = HighestWeight(0, (0,) * alg.fd.base.rank)
    K = np.asarray(K, dtype=complex)
    den = affine_numerator(alg, zero, b, K, tol, full=True)
    if den["cond"] < WALL_COND:
        return affine_numerator(alg, lam, b, K, tol) / den["value"]
    # K lies on (or next to) a wall where both numerators vanish.  The
    # character is entire in K, so take the mean over a small circle in a
    # regular direction.
    v = alg.fd.coords(alg.fd.np_rho_tau)
    v = WALL_RADIUS * v / np.linalg.norm(v)
    vals = []
    for j in range(WALL_SAMPLES):
        Kj = K + np.exp(2j * math.pi * (j + 0.5) / WALL_SAMPLES) * v
        vals.append(affine_numerator(alg, lam, b, Kj, tol) / affine_numerator(alg, zero, b, Kj, tol))
    return complex(np.mean(vals))
