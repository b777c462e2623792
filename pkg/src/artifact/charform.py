"""Weyl groups, alternating sums, denominators and characters.

Points ``h`` are ambient vectors (real or complex), shape ``(d,)`` or
``(p, d)``; use ``FoldedData.embed`` to build them from orthonormal LS0
coordinates.  Two exponential conventions are supported:

``"e"``   exponentials ``e(<mu, h>) = exp(2 pi i <mu, h>)``;
``"exp"`` exponentials ``exp(<mu, h>)``, so ``"e"`` at ``h`` equals
          ``"exp"`` at ``2 pi i h``.

For twisted data the Weyl group is ``W^tau = W(R1)`` acting on the ambient
space (identity on the orthocomplement of LS0), and ``rho^tau = rho(R1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from . import _precise, kernels
from .folding import FoldedData
from .rootsys import RootSystem, dominant_weights_below, weyl_group_matrices

TWO_PI_I = 2j * np.pi
# points with dist(<beta, h>, Z) below this are treated as lying on the wall
SNAP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeylGroupTable:
    """The Weyl group of ``system`` as ambient orthogonal matrices."""

    system: RootSystem
    elements: np.ndarray
    signs: np.ndarray

    def __len__(self) -> int:
        return len(self.elements)

    def orbit(self, v: np.ndarray) -> np.ndarray:
        """``(|W|, d)`` array of ``w v``."""
        return self.elements @ np.asarray(v, dtype=float)

    def signed_orbit(self, nu: Sequence) -> tuple[tuple, np.ndarray]:
        """Exact orbit of a rational vector with the signs ``eps(w)``.

        Returns an empty orbit if ``nu`` lies on a wall (its alternating sum
        vanishes identically).
        """
        return self._orbit_data(nu)[:2]

    @cached_property
    def exact_elements(self) -> tuple:
        """The elements as tuples of Fraction rows (entries have small denominators)."""
        out = []
        for m in self.elements:
            rows = tuple(tuple(Fraction(float(x)).limit_denominator(1000) for x in row) for row in m)
            if np.max(np.abs(np.array(rows, dtype=float) - m)) > 1e-9:
                raise ArithmeticError("Weyl group element is not rational with small denominators")
            out.append(rows)
        return tuple(out)

    def _orbit_data(self, nu: Sequence):
        return _signed_orbit(self.system, tuple(Fraction(x) for x in nu), len(self))


@lru_cache(maxsize=4096)
def _signed_orbit(R: RootSystem, nu: tuple, order: int):
    simple = R.simple_roots
    cor = [R.coroot(a) for a in simple]
    seen = {nu: 1}
    frontier = [nu]
    while frontier:
        nxt = []
        for v in frontier:
            for a, c in zip(simple, cor):
                k = R.inner(v, c)
                if k == 0:
                    continue
                u = tuple(x - k * y for x, y in zip(v, a))
                if u not in seen:
                    seen[u] = -seen[v]
                    nxt.append(u)
        frontier = nxt
    if len(seen) != order:
        return (), np.zeros(0), None, 1
    pts = tuple(seen)
    M, q = _precise.integer_frequencies(pts, R.form_scale)
    return pts, np.array([seen[p] for p in pts], dtype=float), M, q


@lru_cache(maxsize=None)
def weyl_table(R: RootSystem) -> WeylGroupTable:
    mats, signs = weyl_group_matrices(R)
    return WeylGroupTable(R, mats, signs)


def _exponent_factor(convention: str) -> complex:
    if convention == "e":
        return TWO_PI_I
    if convention == "exp":
        return 1.0
    if convention == "exp_i":
        return 1j
    raise ValueError(f"unknown convention {convention!r}")


def _as_points(h, d: int) -> tuple[np.ndarray, bool]:
    H = np.asarray(h, dtype=complex)
    single = H.ndim == 1
    H = np.atleast_2d(H)
    if H.shape[1] != d:
        raise ValueError(f"point dimension {H.shape[1]} does not match ambient dimension {d}")
    return H, single


# an alternating sum smaller than this fraction of |W| max|term| is recomputed
# in extended precision from the exact orbit
CANCEL_RATIO = 1e-4


def _alt(W: WeylGroupTable, nu: Sequence, H: np.ndarray, convention: str) -> np.ndarray:
    """``sum_w eps(w) exp(c <w nu, h>)`` for rows of ``H``; ``nu`` rational."""
    pts, signs, M, q = W._orbit_data(nu)
    if not pts:
        return np.zeros(H.shape[0], dtype=complex)
    scale = float(W.system.form_scale)
    orb = np.array(pts, dtype=float)
    Z = _exponent_factor(convention) * scale * H
    out = kernels.expsum(orb, signs.astype(complex), Z)
    bound = len(pts) * np.exp(np.max((Z @ orb.T).real, axis=1))
    bad = np.flatnonzero(np.abs(out) < CANCEL_RATIO * bound)
    for p in bad:
        if convention == "e" and not np.any(H[p].imag):
            out[p] = _precise.exp_sum_exact(M, q, signs, H[p].real)
        else:
            out[p] = _alt_mp(W.system, pts, signs, H[p], convention, np.abs(out[p]) / bound[p])
    return out


@lru_cache(maxsize=None)
def _root_freqs(R: RootSystem):
    return _precise.integer_frequencies(R.positive_roots, R.form_scale)


def _alt_mp(R: RootSystem, pts, signs, h, convention: str, ratio: float) -> complex:
    import mpmath

    digits = 20 + int(max(0.0, -np.log10(max(ratio, 1e-300))))
    with mpmath.workdps(digits):
        fac = {"e": 2j * mpmath.pi, "exp": mpmath.mpf(1), "exp_i": mpmath.mpc(0, 1)}[convention]
        hs = [mpmath.mpc(complex(x)) for x in h]
        sc = mpmath.mpf(R.form_scale.numerator) / R.form_scale.denominator
        acc = mpmath.mpc(0)
        for v, sg in zip(pts, signs):
            e = mpmath.fsum(mpmath.mpf(x.numerator) / x.denominator * y for x, y in zip(v, hs) if x)
            acc += int(sg) * mpmath.exp(fac * sc * e)
        return complex(acc)


def alternating_sum(W: WeylGroupTable, mu: Sequence, h, convention: str = "e"):
    """``A(mu)(h) = sum_w eps(w) e(<w mu, h>)``.

    Parameters
    ----------
    W : WeylGroupTable
    mu : sequence
        Fundamental-weight coordinates for ``W.system``.
    h : array_like
        Ambient point(s).
    convention : {"e", "exp"}
    """
    R = W.system
    H, single = _as_points(h, R.ambient_dim)
    out = _alt(W, R.weight(mu), H, convention)
    return out[0] if single else out


def _delta_product(R: RootSystem, rho: Sequence, H: np.ndarray, convention: str) -> np.ndarray:
    """``exp(c<rho,h>) prod_{beta > 0} (1 - exp(-c<beta,h>))``.

    Each factor is evaluated as ``2 sinh(x/2) exp(-x/2)``; for real points in
    the ``e`` convention, factors near zero get their phase reduced exactly.
    """
    s = float(R.form_scale)
    c = _exponent_factor(convention)
    X = c * s * H @ R.np_positive_roots.T
    f = 2.0 * np.sinh(X / 2.0) * np.exp(-X / 2.0)
    if convention == "e":
        near = np.abs(f) < 1e-3
        rows = np.flatnonzero(near.any(axis=1) & ~np.any(H.imag, axis=1))
        if rows.size:
            M, q = _root_freqs(R)
            for p in rows:
                res, D = _precise.phase_residues(M, q, H[p].real)
                for j in np.flatnonzero(near[p]):
                    x = TWO_PI_I * _precise.centered_fraction(res[j], D)
                    f[p, j] = 2.0 * np.sinh(x / 2.0) * np.exp(-x / 2.0)
    rho = np.array(rho, dtype=float)
    return np.exp(c * s * H @ rho) * np.prod(f, axis=1)


def denominator(fd: FoldedData, h, convention: str = "e"):
    """``delta^tau(h) = e(rho^tau) prod_{beta in R1+} (1 - e(-beta))``."""
    H, single = _as_points(h, fd.base.ambient_dim)
    out = _delta_product(fd.r1, fd.rho_tau, H, convention)
    return out[0] if single else out


def classical_denominator(R: RootSystem, h, convention: str = "e"):
    """``delta(h) = e(rho) prod_{alpha in R+} (1 - e(-alpha))``."""
    H, single = _as_points(h, R.ambient_dim)
    out = _delta_product(R, R.rho, H, convention)
    return out[0] if single else out


def _factors(R: RootSystem, H: np.ndarray, convention: str) -> np.ndarray:
    X = _exponent_factor(convention) * float(R.form_scale) * H @ R.np_positive_roots.T
    return 2.0 * np.sinh(X / 2.0) * np.exp(-X / 2.0)


def _weyl_ratio(W: WeylGroupTable, rho: Sequence, nu: Sequence, H: np.ndarray, convention: str):
    """``A(nu)/A(rho)`` at ``H`` with removable singularities resolved.

    Returns the values and a mask of points evaluated by the wall formula:
    with ``S`` the positive roots whose walls contain the point, both sums
    are differentiated by ``prod_{beta in S} d_beta``, which is exact there.
    Real points in the ``e`` convention detect walls exactly and evaluate
    near-wall ratios in extended precision; other points snap to walls
    closer than ``SNAP_TOL``.
    """
    R = W.system
    out = np.empty(H.shape[0], dtype=complex)
    flag = np.zeros(H.shape[0], dtype=bool)
    f = _factors(R, H, convention)
    careful = np.min(np.abs(f), axis=1) < 1e-3 if f.shape[1] else np.zeros(H.shape[0], bool)
    exact_rows = careful & (convention == "e") & ~np.any(H.imag, axis=1)
    fast = ~careful
    if fast.any():
        out[fast] = _alt(W, nu, H[fast], convention) / _delta_product(R, rho, H[fast], convention)
    for p in np.flatnonzero(exact_rows):
        out[p], flag[p] = _ratio_exact(W, rho, nu, H[p].real)
    for p in np.flatnonzero(careful & ~exact_rows):
        out[p], flag[p] = _ratio_snap(W, rho, nu, H[p], convention)
    return out, flag


def _wall_weights(W: WeylGroupTable, v: Sequence, S: list) -> tuple[np.ndarray, int, list]:
    """Orbit data of ``v`` with weights ``eps(w) prod_{beta in S} <w v, beta>``."""
    pts, signs, M, q = W._orbit_data(v)
    if not pts:
        return M, q, []
    R = W.system
    wts = []
    for pt, sg in zip(pts, signs):
        w = Fraction(int(sg))
        for beta in S:
            w *= R.inner(pt, beta)
        wts.append(w)
    return M, q, wts


def _ratio_exact(W: WeylGroupTable, rho: Sequence, nu: Sequence, h: np.ndarray) -> tuple[complex, bool]:
    R = W.system
    Mr, qr = _root_freqs(R)
    res, D = _precise.phase_residues(Mr, qr, h)
    on = [j for j, r in enumerate(res) if r == 0]
    S = [R.positive_roots[j] for j in on]
    # size of the non-vanishing part of the denominator fixes the precision
    x = np.array([_precise.centered_fraction(r, D) for j, r in enumerate(res) if r != 0])
    mag = np.prod(np.abs(2 * np.sin(np.pi * x))) if x.size else 1.0
    bits = 80 + int(np.log2(len(W))) + int(max(0.0, -np.log2(max(mag, 1e-300))))
    Mn, qn, wn = _wall_weights(W, nu, S)
    if not wn:
        return 0j, bool(S)
    Md, qd, wd = _wall_weights(W, rho, S)
    num = _precise.exp_sum_exact(Mn, qn, wn, h, bits)
    den = _precise.exp_sum_exact(Md, qd, wd, h, bits)
    return num / den, bool(S)


def _ratio_snap(W: WeylGroupTable, rho: Sequence, nu: Sequence, h: np.ndarray, convention: str) -> tuple[complex, bool]:
    R = W.system
    s = float(R.form_scale)
    pos = R.np_positive_roots
    c = _exponent_factor(convention)
    U = s * c * (h @ pos.T) / TWO_PI_I
    wall = np.abs(U - np.round(U.real)) < SNAP_TOL
    if not wall.any():
        Hh = h[None, :]
        return complex(_alt(W, nu, Hh, convention)[0] / _delta_product(R, rho, Hh, convention)[0]), False
    S = pos[wall]
    n = np.round(U[wall].real)
    z = c * h + TWO_PI_I * np.linalg.lstsq(s * S, n - U[wall], rcond=None)[0]
    p_nu, s_nu = W.signed_orbit(nu)
    if not p_nu:
        return 0j, True
    p_rho, s_rho = W.signed_orbit(rho)
    o_nu = np.array(p_nu, dtype=float)
    o_rho = np.array(p_rho, dtype=float)
    num = np.sum(s_nu * np.prod(s * o_nu @ S.T, axis=1) * np.exp(s * o_nu @ z))
    den = np.sum(s_rho * np.prod(s * o_rho @ S.T, axis=1) * np.exp(s * o_rho @ z))
    return complex(num / den), True


_SIGNS: dict[tuple[str, tuple], int] = {}


def twining_sign(fd: FoldedData, lam: Sequence) -> int:
    """Sign fixing which extension ``chi~_lam`` denotes.

    The sign makes ``chi~_lam(tau)`` the trace of the pinned intertwiner.  It
    is calibrated against the matrix model for the type A representations
    that model carries and is ``+1`` otherwise.
    """
    key = (fd.tag, tuple(int(x) for x in lam))
    if key in _SIGNS:
        return _SIGNS[key]
    sign = 1
    if fd.order == 2 and fd.base.type_tag == "A":
        from . import grouprep

        if grouprep.rep_kind_for_weight(fd.base.rank + 1, key[1]) is not None:
            sign = grouprep.calibrate_sign(fd, key[1])
    _SIGNS[key] = sign
    return sign


def _nu(fd: FoldedData, lam: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(fd.base.weight(lam), fd.rho_tau))


def twisted_character(fd: FoldedData, lam: Sequence, h, sign: int | None = None,
                      convention: str = "e", return_flag: bool = False):
    """Twining character ``chi~_lam`` on ``exp(h) tau``.

    Zero for weights that are not tau-invariant; otherwise
    ``sign * A^tau(lam + rho^tau) / delta^tau``.  With ``return_flag`` also
    returns whether the wall formula was used.
    """
    H, single = _as_points(h, fd.base.ambient_dim)
    if not fd.is_tau_invariant(lam):
        out = np.zeros(H.shape[0], dtype=complex)
        flag = np.zeros(H.shape[0], dtype=bool)
    else:
        if sign is None:
            sign = twining_sign(fd, lam) if fd.order > 1 else 1
        out, flag = _weyl_ratio(weyl_table(fd.r1), fd.rho_tau, _nu(fd, lam), H, convention)
        out = sign * out
    if single:
        out, flag = out[0], bool(flag[0])
    return (out, flag) if return_flag else out


def classical_character(R: RootSystem, lam: Sequence, h, convention: str = "e",
                        return_flag: bool = False):
    """Weyl character ``A(lam + rho)/A(rho)`` with wall handling."""
    H, single = _as_points(h, R.ambient_dim)
    nu = tuple(a + b for a, b in zip(R.weight(lam), R.rho))
    out, flag = _weyl_ratio(weyl_table(R), R.rho, nu, H, convention)
    if single:
        out, flag = out[0], bool(flag[0])
    return (out, flag) if return_flag else out


def _exact_ratio(R: RootSystem, nu: tuple, rho: tuple) -> int:
    num = den = Fraction(1)
    for a in R.positive_roots:
        num *= R.inner(nu, a)
        den *= R.inner(rho, a)
    q = num / den
    if q.denominator != 1:
        raise ArithmeticError("non-integral dimension")
    return int(q)


def weyl_dimension(R: RootSystem, lam: Sequence) -> int:
    """Exact ``prod <lam + rho, a> / <rho, a>`` over positive roots."""
    return _exact_ratio(R, tuple(a + b for a, b in zip(R.weight(lam), R.rho)), R.rho)


def twisted_dimension(fd: FoldedData, lam: Sequence) -> int:
    """Exact value of ``chi~_lam`` at ``tau`` before the sign."""
    if not fd.is_tau_invariant(lam):
        return 0
    return _exact_ratio(fd.r1, _nu(fd, lam), fd.rho_tau)


def tau_invariant_dominant(fd: FoldedData, count: int) -> list[tuple[int, ...]]:
    """First ``count`` tau-invariant dominant base weights ordered by ``|lam + rho^tau|``."""
    R1 = fd.r1
    cap = float(R1.norm2_weight(R1.weight_coords(R1.rho))) + 1.0
    while True:
        out = []
        for mu in dominant_weights_below(R1, cap):
            lam = fd.r1_weight_to_base(mu)
            if all(x.denominator == 1 and x >= 0 for x in lam):
                out.append(tuple(int(x) for x in lam))
        if len(out) >= count:
            return out[:count]
        cap *= 2


def grid_points(fd: FoldedData, N: int) -> np.ndarray:
    """Uniform grid ``sum_j (k_j/N) b_j`` on S0 for the torus lattice basis ``b``."""
    B = np.array(fd.torus_lattice, dtype=float)
    ks = np.indices((N,) * fd.l).reshape(fd.l, -1).T / N
    return ks @ B


def frequency_spread(fd: FoldedData, lam: Sequence) -> int:
    """Largest ``|<w(lam + rho^tau), b_j>|`` over ``W^tau`` and torus lattice generators."""
    pts, _ = weyl_table(fd.r1).signed_orbit(_nu(fd, lam))
    if not pts:
        return 0
    return int(max(abs(fd.base.inner(p, b)) for p in pts for b in fd.torus_lattice))


def twisted_inner_product(fd: FoldedData, lam: Sequence, mu: Sequence, N: int | None = None) -> complex:
    """``<chi~_lam, chi~_mu>`` by uniform torus quadrature of the Weyl integral.

    The integrand ``chi~_lam conj(chi~_mu) |delta^tau|^2`` equals
    ``A(lam + rho) conj(A(mu + rho))`` up to the two signs, a finite Fourier
    sum, so the grid rule is exact once ``N`` exceeds the frequency spread.
    """
    if not (fd.is_tau_invariant(lam) and fd.is_tau_invariant(mu)):
        return 0j
    W = weyl_table(fd.r1)
    if N is None:
        N = 2 * max(frequency_spread(fd, lam), frequency_spread(fd, mu)) + 1
    H = grid_points(fd, N).astype(complex)
    A = _alt(W, _nu(fd, lam), H, "e")
    B = _alt(W, _nu(fd, mu), H, "e")
    sgn = twining_sign(fd, lam) * twining_sign(fd, mu) if fd.order > 1 else 1
    return complex(sgn * np.mean(A * np.conj(B)) / len(W))


def radial_laplacian_check(fd: FoldedData, lam: Sequence, n_points: int = 50, seed: int = 0,
                           step: float = 1e-3) -> dict:
    """Check ``(Delta + |rho|^2)(delta chi~) = (|rho|^2 - |lam + rho|^2) delta chi~``.

    ``Delta`` is the flat Laplacian in orthonormal coordinates ``y = 2 pi h``
    on LS0, in which ``delta chi~ = A^tau(lam + rho^tau)`` is a sum of
    exponentials ``exp(i <w nu, y>)``.  The analytic residual differentiates
    term by term; the finite-difference residual uses second-order central
    differences and is relative to ``|nu|^2 max |A|``.
    """
    if not fd.is_tau_invariant(lam):
        raise ValueError("weight is not tau-invariant")
    rng = np.random.default_rng(seed)
    W = weyl_table(fd.r1)
    s = float(fd.base.form_scale)
    nu = _nu(fd, lam)
    n_rho = float(fd.r1.inner(fd.rho_tau, fd.rho_tau))
    n_nu = float(fd.r1.inner(nu, nu))
    pts, signs = W.signed_orbit(nu)
    orb = np.array(pts, dtype=float)
    Y = rng.uniform(-np.pi, np.pi, size=(n_points, fd.l))
    E = np.exp(1j * s * fd.embed(Y) @ orb.T) * signs
    F = E.sum(axis=1)
    lapF = (E * -(s * np.sum(orb * orb, axis=1))).sum(axis=1)
    analytic = np.max(np.abs(lapF + n_rho * F - (n_rho - n_nu) * F))
    fdlap = np.zeros_like(F)
    for j in range(fd.l):
        e = np.zeros(fd.l)
        e[j] = step
        Fp = _alt(W, nu, fd.embed(Y + e).astype(complex), "exp_i")
        Fm = _alt(W, nu, fd.embed(Y - e).astype(complex), "exp_i")
        fdlap += (Fp - 2 * F + Fm) / step**2
    fd_res = np.max(np.abs(fdlap - lapF)) / max(n_nu * np.max(np.abs(F)), 1e-300)
    return {
        "eigenvalue": n_nu - n_rho,
        "analytic_residual": float(analytic),
        "fd_residual": float(fd_res),
        "n_points": n_points,
    }
