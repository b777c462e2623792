"""Lattice enumeration and tail bounds for Gaussian-type lattice sums."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import integrate

# hard cap on the number of lattice points enumerated in one box
ENUM_CAP = 5_000_000


class LatticeResourceError(RuntimeError):
    """Raised when a requested accuracy needs more points than ``ENUM_CAP``."""


def covering_radius_bound(basis: np.ndarray) -> float:
    """Upper bound ``(1/2) sum |b_i|`` on the covering radius (rows are basis vectors)."""
    return 0.5 * float(np.sum(np.linalg.norm(basis, axis=1)))


def covolume(basis: np.ndarray) -> float:
    G = basis @ basis.T
    return float(math.sqrt(abs(np.linalg.det(G))))


def enumerate_ball(basis: np.ndarray, center: np.ndarray, radius: float, cap: int = ENUM_CAP,
                   return_coeffs: bool = False):
    """Lattice points ``n @ basis`` with ``|p - center| <= radius``.

    Coefficients are scanned over the exact bounding box of the ellipsoid
    (``|n_i - c_i| <= radius sqrt((G^-1)_ii)``), then filtered by norm.
    """
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    l = basis.shape[0]
    G = basis @ basis.T
    Gi = np.linalg.inv(G)
    c = np.linalg.solve(G, basis @ center)
    half = radius * np.sqrt(np.diag(Gi))
    lo = np.floor(c - half).astype(int)
    hi = np.ceil(c + half).astype(int)
    counts = hi - lo + 1
    total = int(np.prod(counts.astype(float)))
    if total > cap:
        raise LatticeResourceError(
            f"lattice enumeration needs {total} points, above the cap ENUM_CAP={cap}"
        )
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    N = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, l)
    P = N @ basis
    keep = np.sum((P - center) ** 2, axis=1) <= radius * radius
    return (P[keep], N[keep]) if return_coeffs else P[keep]


def tail_bound(f: Callable[[float], float], r0: float, dim: int, covol: float, rcov: float) -> float:
    """Bound ``sum_{|p| > r0} f(|p|)`` over a lattice (or a translate of one).

    Each point's Voronoi cell lies in the ball of radius ``rcov`` around it,
    so for ``f`` decreasing on ``[r0 - 2 rcov, inf)`` the sum is at most
    ``(1/covol) int_{|x| >= r0 - rcov} f(|x| - rcov) dx``.  Callers choose
    ``r0`` beyond the monotonicity threshold.
    """
    a = max(r0 - rcov, 0.0)
    sphere = 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)
    val, _ = integrate.quad(lambda r: f(max(r - rcov, 0.0)) * r ** (dim - 1), a, np.inf, limit=200)
    return sphere * val / covol


def gaussian_radius(a: float, b: float, p: float, logK: float, dim: int, covol: float, rcov: float,
                    tol: float) -> tuple[float, float]:
    """Smallest radius (on a doubling-then-bisection search) with tail below ``tol``.

    The summand is bounded by ``f(r) = exp(logK + b r - a r^2) r^p`` with
    ``a > 0``.  Returns ``(radius, bound)``.
    """
    if a <= 0:
        raise ValueError("Gaussian coefficient must be positive")

    def f(r):
        e = logK + b * r - a * r * r
        return math.exp(e) * r**p if e > -745 else 0.0

    # f is decreasing beyond the maximum of b r - a r^2 + p log r
    mono = (b + math.sqrt(b * b + 8 * a * p)) / (4 * a) if p > 0 else max(b / (2 * a), 0.0)
    lo = mono + 2 * rcov
    r = max(lo, 1.0)
    bound = tail_bound(f, r, dim, covol, rcov)
    while bound > tol:
        r *= 1.25
        bound = tail_bound(f, r, dim, covol, rcov)
        if r > 1e6:
            raise LatticeResourceError("tail bound does not reach the requested tolerance")
    return r, bound
