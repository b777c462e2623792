"""Brownian paths on SU(n) and Monte Carlo checks of the Wiener-integral identities.

Conventions: the metric on su(n) is ``(X, Y) = -tr(XY)``; flat increments
``dy_j`` are Gaussian with covariance ``s T dt_j`` in an orthonormal basis,
so the endpoint ``z(T)`` has density ``u_s(Z, T)`` with heat exponent
``(s T^2 / 2)(|lam + rho|^2 - |rho|^2)``.  Path pairings are
``(1/T) int_0^T (., .) dt`` with ``T = 1/r``, which is the loop form
``int_0^1`` for twisted-periodic integrands.  Stieltjes pairings are taken
on the generating flat increments at the left endpoints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats
from scipy.linalg import expm

from . import kernels
from .grouprep import MatrixGroupModel, _mc_stats, haar_sample, heat_kernel

_PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
SU2_BASIS = 1j * _PAULI / math.sqrt(2)


def algebra_basis(model: MatrixGroupModel) -> np.ndarray:
    """Orthonormal basis of su(n); for n = 2 the one used by the quaternion kernel."""
    return SU2_BASIS if model.n == 2 else model.algebra_basis


def quaternion_to_matrix(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q[..., 0, None, None] * np.eye(2) + np.einsum("...a,aij->...ij", q[..., 1:], 1j * _PAULI)


@dataclass(frozen=True, eq=False)
class PathSample:
    """Paths on the dyadic grid of ``[0, T]`` with their flat increments."""

    model: MatrixGroupModel
    times: np.ndarray
    group_points: np.ndarray  # (paths, 2^m + 1, n, n)
    flat_increments: np.ndarray  # (paths, 2^m, dim) coefficients in algebra_basis

    @property
    def endpoints(self) -> np.ndarray:
        return self.group_points[:, -1]


def _increments(model: MatrixGroupModel, s: float, m: int, n_paths: int, rng: np.random.Generator) -> np.ndarray:
    T = 1.0 / model.r
    dt = T / 2**m
    dim = model.n**2 - 1
    return rng.standard_normal((n_paths, 2**m, dim)) * math.sqrt(s * T * dt)


def sample_path(model: MatrixGroupModel, s: float, m: int, rng: np.random.Generator, n_paths: int = 1) -> PathSample:
    """McKean products ``z(t_{j+1}) = z(t_j) exp(dy_j)`` on ``2^m`` steps."""
    if s <= 0 or m < 0:
        raise ValueError("need s > 0 and m >= 0")
    T = 1.0 / model.r
    inc = _increments(model, s, m, n_paths, rng)
    X = np.einsum("psa,aij->psij", inc, algebra_basis(model))
    E = expm(X.reshape(-1, model.n, model.n)).reshape(X.shape)
    Z = np.empty((n_paths, 2**m + 1, model.n, model.n), dtype=complex)
    Z[:, 0] = np.eye(model.n)
    for j in range(2**m):
        Z[:, j + 1] = Z[:, j] @ E[:, j]
    return PathSample(model, np.linspace(0.0, T, 2**m + 1), Z, inc)


def mckean_endpoints(model: MatrixGroupModel, inc: np.ndarray) -> np.ndarray:
    """``prod_j exp(dy_j)`` for increment coefficients of shape (paths, steps, dim)."""
    if model.n == 2:
        return quaternion_to_matrix(kernels.su2_mckean(inc))
    X = np.einsum("psa,aij->psij", inc, algebra_basis(model))
    E = expm(X.reshape(-1, model.n, model.n)).reshape(X.shape)
    Z = np.broadcast_to(np.eye(model.n, dtype=complex), (inc.shape[0], model.n, model.n)).copy()
    for j in range(inc.shape[1]):
        Z = Z @ E[:, j]
    return Z


def _chunks(n_paths: int, seed: int, chunk: int):
    left = n_paths
    for child in np.random.SeedSequence(seed).spawn(math.ceil(n_paths / chunk)):
        k = min(chunk, left)
        left -= k
        yield k, np.random.default_rng(child)


def _pair(model: MatrixGroupModel, X: np.ndarray, inc: np.ndarray) -> np.ndarray:
    """``sum_j (X(t_j), dy_j)`` for X of shape (steps, n, n) or (n, n)."""
    B = algebra_basis(model)
    if X.ndim == 2:
        c = -np.einsum("ij,aji->a", X, B).real
        return inc.sum(axis=1) @ c
    c = -np.einsum("sij,aji->sa", X, B).real
    return np.einsum("psa,sa->p", inc, c)


# --- endpoint law ---------------------------------------------------------------------

def su2_angle_density(theta: np.ndarray, s: float, T: float = 1.0, tol: float = 1e-14) -> np.ndarray:
    """Density of the torus angle of ``z(T)``: ``u_s(theta, T) (2/pi) sin^2 theta`` on ``[0, pi]``."""
    theta = np.asarray(theta, dtype=float)
    eig = np.stack([np.exp(1j * theta), np.exp(-1j * theta)], axis=-1)
    u = heat_kernel(2, eig.reshape(-1, 2), s, T, T, tol, eigenvalues=True)["value"].real
    return u.reshape(theta.shape) * 2 / np.pi * np.sin(theta) ** 2


def endpoint_law_check(s: float = 1.0, m: int = 10, n_paths: int = 100_000, seed: int = 0, bins: int = 40,
                       chunk: int = 5000) -> dict:
    """Chi-square test of the SU(2) endpoint angle against the heat-kernel density."""
    model = MatrixGroupModel.su(2, 1)
    T = 1.0
    counts = np.zeros(bins, dtype=np.int64)
    edges = np.linspace(0.0, np.pi, bins + 1)
    for k, rng in _chunks(n_paths, seed, chunk):
        q = kernels.su2_mckean(_increments(model, s, m, k, rng))
        theta = np.arccos(np.clip(q[:, 0], -1.0, 1.0))
        counts += np.histogram(theta, edges)[0]
    # Gauss-Legendre per bin
    x, w = np.polynomial.legendre.leggauss(16)
    probs = np.array([
        (b - a) / 2 * w @ su2_angle_density((b - a) / 2 * x + (a + b) / 2, s, T) for a, b in zip(edges[:-1], edges[1:])
    ])
    probs /= probs.sum()
    chi2, p = stats.chisquare(counts, probs * n_paths)
    return {"chi2": float(chi2), "p_value": float(p), "bins": bins, "n_paths": n_paths, "depth": m, "s": s,
            "seed": seed}


def refinement_gap(model: MatrixGroupModel, s: float, m: int, n_paths: int, seed: int = 0) -> float:
    """Median operator-norm gap between depth ``m + 1`` endpoints and the depth ``m`` coupling."""
    rng = np.random.default_rng(seed)
    fine = _increments(model, s, m + 1, n_paths, rng)
    coarse = fine[:, 0::2] + fine[:, 1::2]
    Zf = mckean_endpoints(model, fine)
    Zc = mckean_endpoints(model, coarse)
    return float(np.median(np.linalg.norm(Zf - Zc, 2, axis=(1, 2))))


# --- quasi-invariance ----------------------------------------------------------------

def quasi_invariance_check(model: MatrixGroupModel, s: float, g_path: Callable, F: Callable, n_paths: int,
                           m: int = 8, seed: int = 0, chunk: int = 5000) -> dict:
    """``E[F(z(T))]`` against ``E[F(z(T) g(T)) exp(-(1/s)(z^-1 z', g' g^-1) - (1/2s)(g^-1 g', g^-1 g'))]``.

    ``g_path(t)`` returns ``(g(t), g'(t))`` stacks with ``g(0) = e``; ``F``
    maps a stack of endpoint matrices to real values.  The estimates share
    their samples.
    """
    T = 1.0 / model.r
    t = np.linspace(0.0, T, 2**m + 1)
    g, dg = (np.asarray(a, dtype=complex) for a in g_path(t))
    if np.max(np.abs(g[0] - np.eye(model.n))) > 1e-12:
        raise ValueError("g_path must start at the identity")
    gi = np.linalg.inv(g)
    right = dg[:-1] @ gi[:-1]
    left = gi @ dg
    norm = -np.trace(left @ left, axis1=1, axis2=2).real
    dt = T / 2**m
    energy = dt * (norm[0] / 2 + norm[1:-1].sum() + norm[-1] / 2) / T
    lhs, rhs, dens, diff = [], [], [], []
    for k, rng in _chunks(n_paths, seed, chunk):
        inc = _increments(model, s, m, k, rng)
        Z = mckean_endpoints(model, inc)
        D = np.exp(-_pair(model, right, inc) / (s * T) - energy / (2 * s))
        a = np.asarray(F(Z), dtype=float)
        b = np.asarray(F(Z @ g[-1]), dtype=float) * D
        lhs.append(a)
        rhs.append(b)
        dens.append(D)
        diff.append(a - b)
    lhs, rhs, dens, diff = (np.concatenate(v) for v in (lhs, rhs, dens, diff))
    l, sl = _mc_stats(lhs)
    r, sr = _mc_stats(rhs)
    d, sd = _mc_stats(dens)
    _, sigma = _mc_stats(diff)
    return {"lhs": l.real, "rhs": r.real, "sigma": sigma, "lhs_sigma": sl, "rhs_sigma": sr, "density_mean": d.real,
            "density_sigma": sd, "n_paths": n_paths, "depth": m, "seed": seed}


def exp_path(Y: np.ndarray) -> Callable:
    """``g(t) = exp(t Y)`` with ``g' = g Y``."""
    Y = np.asarray(Y, dtype=complex)

    def path(t):
        g = expm(np.asarray(t)[:, None, None] * Y[None])
        return g, g @ Y

    return path


def real_trace(Z: np.ndarray) -> np.ndarray:
    return np.trace(Z, axis1=-2, axis2=-1).real


def one(Z: np.ndarray) -> np.ndarray:
    return np.ones(Z.shape[0])


# --- smoothed Berechnung identity ---------------------------------------------------

def _casimir_fundamental(n: int) -> float:
    return (n * n - 1) / n


def berechnung_rhs(model: MatrixGroupModel, Y: np.ndarray, s: float, f, n_mc: int = 0, seed: int = 0) -> tuple[float, float]:
    """``int_G f(Z) u_s(Z g(T)^-1, T) dZ = E[f(W g(T))]`` for heat-distributed ``W``.

    Exact for ``f`` in ``{one, real_trace}`` (Schur: ``E[W] = exp(-(s T^2/2) C) 1``);
    otherwise Haar Monte Carlo against the heat kernel.
    """
    T = 1.0 / model.r
    gT = expm(T * np.asarray(Y, dtype=complex))
    if f is one:
        return 1.0, 0.0
    if f is real_trace:
        return float(math.exp(-s * T * T / 2 * _casimir_fundamental(model.n)) * np.trace(gT).real), 0.0
    rng = np.random.default_rng(seed)
    W = haar_sample(model, rng, size=n_mc)
    vals = np.asarray(f(W), dtype=float) * heat_kernel(model.n, W @ np.linalg.inv(gT), s, T, T)["value"].real
    v, sig = _mc_stats(vals)
    return v.real, sig


def smoothed_berechnung_check(model: MatrixGroupModel, Y: np.ndarray, s: float, f, n_paths: int, m: int = 10,
                              seed: int = 0, chunk: int = 5000, n_mc: int = 100_000) -> dict:
    """``exp(-|Y|^2 / 2s) E[f(z(T)) exp((1/s)(z^-1 z', Y))]`` against ``int f(Z) u_s(Z g(T)^-1, T) dZ``."""
    T = 1.0 / model.r
    Y = np.asarray(Y, dtype=complex)
    Ynorm2 = -np.trace(Y @ Y).real
    vals = []
    for k, rng in _chunks(n_paths, seed, chunk):
        inc = _increments(model, s, m, k, rng)
        Z = mckean_endpoints(model, inc)
        w = np.exp(_pair(model, Y, inc) / (s * T) - Ynorm2 / (2 * s))
        vals.append(np.asarray(f(Z), dtype=float) * w)
    lhs, sigma = _mc_stats(np.concatenate(vals))
    rhs, rsig = berechnung_rhs(model, Y, s, f, n_mc, seed + 1)
    sigma = math.hypot(sigma, rsig)
    return {"lhs": lhs.real, "rhs": rhs, "sigma": sigma, "rel_err": abs(lhs.real - rhs) / max(abs(rhs), 1e-300),
            "n_paths": n_paths, "depth": m, "seed": seed}
