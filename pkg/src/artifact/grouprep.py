"""Matrix models of SU(n) with a pinned outer automorphism.

The lift of the diagram automorphism is ``tau(g) = J conj(g) J^-1`` with a
unitary ``J`` solved from the pinning conditions ``dtau(e_i) = e_{tau(i)}``
on simple root vectors; its complex-linear differential is
``X -> -J X^T J^-1``.  With the root vectors ``e_a = E_ij`` this gives
``dtau(E_ij) = (-1)^(1 + ht a) E_{tau a}``.

Representations carried: trivial, exterior powers of the defining one and
the adjoint.  Characters of arbitrary irreducibles (for heat kernels) come
from the Jacobi-Trudi determinant in the eigenvalues, which has no
singularity at repeated eigenvalues.

The heat-kernel series is written in the source with a symbol ``x_lam``;
it is read here as the irreducible character ``chi_lam``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from . import charform, lattice
from .folding import FoldedData
from .rootsys import build_root_system, dominant_weights_below


def _unit(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=complex)
    E[i, j] = 1
    return E


def _nullspace(A: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    _, s, Vh = np.linalg.svd(A)
    tol = rel * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > tol))
    return Vh[rank:].conj().T


@dataclass(frozen=True, eq=False)
class MatrixGroupModel:
    """SU(n) with the lift of the diagram automorphism of order ``r``."""

    n: int
    r: int
    J: np.ndarray

    @classmethod
    def su(cls, n: int, r: int = 2) -> "MatrixGroupModel":
        if n < 2 or r not in (1, 2):
            raise ValueError("need n >= 2 and r in (1, 2)")
        if r == 2 and n < 3:
            raise ValueError("SU(2) has no outer automorphism")
        if r == 1:
            return cls(n, 1, np.eye(n, dtype=complex))
        # -J E_{i+1,i} = E_{s,s+1} J and -J E_{i,i+1} = E_{s+1,s}, s = n-2-i,
        # written on vec(J) (column-major: vec(AXB) = (B^T kron A) vec(X))
        rows = []
        I = np.eye(n)
        for i in range(n - 1):
            s = n - 2 - i
            for A, B in ((_unit(n, i + 1, i), _unit(n, s, s + 1)), (_unit(n, i, i + 1), _unit(n, s + 1, s))):
                rows.append(-np.kron(A.T, I) - np.kron(I, B))
        N = _nullspace(np.vstack(rows))
        if N.shape[1] != 1:
            raise ArithmeticError("pinning conditions do not determine J up to scale")
        J = N[:, 0].reshape(n, n, order="F")
        J = J / np.sqrt((J @ J.conj().T)[0, 0].real)
        # fix the overall phase so that J is real
        k = np.argmax(np.abs(J.ravel()))
        J = J * (abs(J.ravel()[k]) / J.ravel()[k])
        return cls(n, 2, J)

    @property
    def name(self) -> str:
        return f"SU({self.n})" + ("" if self.r == 1 else f" tau^{self.r}")

    def tau(self, g: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return g
        return self.J @ np.conj(g) @ self.J.conj().T

    def tau_inv(self, g: np.ndarray) -> np.ndarray:
        """``tau(g)^-1 = J g^T J^-1`` for unitary ``g``."""
        if self.r == 1:
            return np.swapaxes(g, -1, -2).conj()
        return self.J @ np.swapaxes(g, -1, -2) @ self.J.conj().T

    def dtau(self, X: np.ndarray) -> np.ndarray:
        """Complex-linear differential of ``tau`` on gl(n)."""
        if self.r == 1:
            return X
        return -self.J @ np.swapaxes(X, -1, -2) @ self.J.conj().T

    def torus(self, h: np.ndarray, convention: str = "e") -> np.ndarray:
        """Diagonal element for ambient torus vectors ``h`` (last axis of length n)."""
        h = np.asarray(h)
        z = {"e": 2j * np.pi, "exp": 1.0, "exp_i": 1j}[convention] * h
        out = np.zeros(h.shape + (self.n,), dtype=complex)
        idx = np.arange(self.n)
        out[..., idx, idx] = np.exp(z)
        return out

    @cached_property
    def positive_roots(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def tau_root(self, a: tuple[int, int]) -> tuple[int, int]:
        i, j = a
        return (self.n - 1 - j, self.n - 1 - i) if self.r == 2 else a

    @cached_property
    def chevalley(self) -> dict:
        """``{"e": {a: E_ij}, "f": {a: E_ji}, "h": [E_ii - E_{i+1,i+1}]}``."""
        n = self.n
        return {
            "e": {a: _unit(n, *a) for a in self.positive_roots},
            "f": {a: _unit(n, a[1], a[0]) for a in self.positive_roots},
            "h": [_unit(n, i, i) - _unit(n, i + 1, i + 1) for i in range(n - 1)],
        }

    def pinning_signs(self) -> dict:
        """Signs ``s_a`` with ``dtau(e_a) = s_a e_{tau a}``, read off the matrices."""
        out = {}
        for a, E in self.chevalley["e"].items():
            img = self.dtau(E)
            tgt = self.chevalley["e"][self.tau_root(a)]
            s = np.vdot(tgt, img)
            if not np.allclose(img, s * tgt, atol=1e-12) or abs(abs(s) - 1) > 1e-12:
                raise ArithmeticError(f"dtau does not map e_{a} to a multiple of e_{self.tau_root(a)}")
            out[a] = int(round(s.real))
        return out

    @cached_property
    def algebra_basis(self) -> np.ndarray:
        """Anti-Hermitian traceless basis of su(n), orthonormal for ``-tr(XY)``."""
        n = self.n
        B = []
        for i in range(n - 1):
            d = np.zeros(n)
            d[: i + 1] = 1
            d[i + 1] = -(i + 1)
            B.append(1j * np.diag(d) / np.linalg.norm(d))
        for i, j in self.positive_roots:
            E, F = _unit(n, i, j), _unit(n, j, i)
            B.append((E - F) / math.sqrt(2))
            B.append(1j * (E + F) / math.sqrt(2))
        return np.array(B)


# --- representations ------------------------------------------------------

def rep_kind_for_weight(n: int, lam: Sequence[int]):
    """``("trivial",)``, ``("wedge", k)`` or ``("adjoint",)`` if the model carries ``lam``."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != n - 1 or any(x < 0 for x in lam):
        return None
    if not any(lam):
        return ("trivial",)
    if n == 2 and lam == (2,):
        return ("adjoint",)
    if sum(lam) == 1:
        return ("wedge", lam.index(1) + 1)
    if n >= 3 and lam[0] == lam[-1] == 1 and sum(lam) == 2:
        return ("adjoint",)
    return None


@dataclass(frozen=True, eq=False)
class RepModel:
    """Irreducible representation ``lam`` of the model on a concrete carrier."""

    model: MatrixGroupModel
    lam: tuple[int, ...]

    def __post_init__(self):
        if rep_kind_for_weight(self.model.n, self.lam) is None:
            raise ValueError(f"no carrier for highest weight {self.lam} of SU({self.model.n})")

    @property
    def kind(self) -> tuple:
        return rep_kind_for_weight(self.model.n, self.lam)

    @cached_property
    def _subsets(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(self.model.n), self.kind[1]))

    @cached_property
    def _adjoint_frame(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.model.n
        basis = [_unit(n, i, j) for i in range(n) for j in range(n) if i != j]
        basis += [_unit(n, i, i) - _unit(n, i + 1, i + 1) for i in range(n - 1)]
        Bm = np.array([b.ravel() for b in basis]).T
        return np.array(basis), np.linalg.pinv(Bm)

    @property
    def dim(self) -> int:
        k = self.kind
        if k[0] == "trivial":
            return 1
        if k[0] == "wedge":
            return math.comb(self.model.n, k[1])
        return self.model.n**2 - 1

    def matrix(self, g: np.ndarray) -> np.ndarray:
        """``rho(g)`` for one matrix or a stack of matrices."""
        g = np.asarray(g, dtype=complex)
        kind = self.kind
        if kind[0] == "trivial":
            return np.ones(g.shape[:-2] + (1, 1), dtype=complex)
        if kind[0] == "wedge":
            S = np.array(self._subsets)
            sub = g[..., S[:, None, :, None], S[None, :, None, :]]
            return np.linalg.det(sub)
        basis, P = self._adjoint_frame
        conj = g[..., None, :, :] @ basis @ np.swapaxes(g, -1, -2).conj()[..., None, :, :]
        flat = conj.reshape(conj.shape[:-2] + (-1,))
        return np.swapaxes(flat @ P.T, -1, -2)

    def character(self, g: np.ndarray) -> np.ndarray:
        return np.trace(self.matrix(g), axis1=-2, axis2=-1)

    def natural_tau(self) -> np.ndarray | None:
        """The action of ``dtau`` on the adjoint carrier (``None`` for other carriers)."""
        if self.kind[0] != "adjoint":
            return None
        basis, P = self._adjoint_frame
        img = np.array([self.model.dtau(b).ravel() for b in basis]).T
        return P @ img


def solve_intertwiner(model: MatrixGroupModel, rep: RepModel, seed: int = 0) -> np.ndarray:
    """Unitary ``T`` with ``T rho(g) T^-1 = rho(tau(g))`` and ``T^r = 1``.

    ``T`` is the null vector of the intertwining relation on a few random
    group elements.  The remaining root of unity is fixed by a pinned rule:
    on the adjoint carrier ``T`` is ``dtau`` itself; on the other carriers
    ``T`` fixes the highest weight vector.
    """
    if model.r == 1:
        return np.eye(rep.dim, dtype=complex)
    n = model.n
    lam = rep.lam
    if tuple(lam) != tuple(reversed(lam)):
        raise ValueError(f"highest weight {lam} is not tau-invariant; no intertwiner exists")
    rng = np.random.default_rng(seed)
    d = rep.dim
    I = np.eye(d)
    rows = []
    for g in haar_sample(model, rng, size=3):
        R = rep.matrix(g)
        Rt = rep.matrix(model.tau(g))
        rows.append(np.kron(R.T, I) - np.kron(I, Rt))
    N = _nullspace(np.vstack(rows))
    if N.shape[1] != 1:
        raise ArithmeticError(f"intertwiner space has dimension {N.shape[1]}, expected 1")
    T = N[:, 0].reshape(d, d, order="F")
    Tr = np.linalg.matrix_power(T, model.r)
    T = T / Tr[0, 0] ** (1 / model.r)
    ref = rep.natural_tau()
    if ref is not None:
        k = np.argmax(np.abs(ref.ravel()))
        T = T * (ref.ravel()[k] / T.ravel()[k])
    else:
        T = T / T[0, 0]
    return T


def calibrate_sign(fd: FoldedData, lam: Sequence[int]) -> int:
    """Sign ``s`` with ``s A(lam + rho)/delta = tr(rho(e^h) T)`` on the model."""
    if fd.base.type_tag != "A":
        raise ValueError("matrix models exist for type A only")
    model = MatrixGroupModel.su(fd.base.rank + 1, fd.order)
    rep = RepModel(model, tuple(lam))
    T = solve_intertwiner(model, rep)
    rng = np.random.default_rng(1)
    H = fd.embed(rng.uniform(-0.5, 0.5, size=fd.l))
    mat = np.trace(rep.matrix(model.torus(H)) @ T)
    ref = charform.twisted_character(fd, lam, H, sign=1)
    s = mat / ref
    if abs(abs(s) - 1) > 1e-6 or abs(s.imag) > 1e-6:
        raise ArithmeticError(f"model trace and character formula disagree beyond a sign (ratio {s})")
    return int(round(s.real))


# --- Haar measure and integral formulas ---------------------------------------

def haar_sample(model: MatrixGroupModel, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed elements of SU(n): QR of a Ginibre matrix with phase fixes."""
    n = model.n
    shape = (n, n) if size is None else (size, n, n)
    Z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    Q = Q * (d / np.abs(d))[..., None, :]
    det = np.linalg.det(Q)
    return Q / (det ** (1 / n))[..., None, None]


def _mc_stats(vals: np.ndarray) -> tuple[complex, float]:
    vals = np.asarray(vals)
    m = vals.mean()
    sigma = float(np.sqrt(np.mean(np.abs(vals - m) ** 2) / max(len(vals) - 1, 1)))
    return complex(m), sigma


def weyl_integral_check(model: MatrixGroupModel, fd: FoldedData, f: Callable[[np.ndarray], np.ndarray],
                        n_mc: int, grid: int, seed: int = 0, max_frequency: int | None = None,
                        batch: int = 20000) -> dict:
    """Haar average of ``f(u tau)`` against the torus side of the Weyl integral formula.

    ``f`` maps a stack of matrices ``g`` (standing for ``g tau``) to values.
    The torus side is ``|W^tau|^-1`` times the grid mean of
    ``f(s tau) |delta^tau(s)|^2`` over ``grid^l`` points of S0.  With
    ``max_frequency`` (the largest frequency of ``f`` on S0) the grid is
    rejected when it cannot integrate the product exactly.
    """
    if max_frequency is not None:
        need = max_frequency + 2 * charform.frequency_spread(fd, (0,) * fd.base.rank) + 1
        if grid < need:
            raise ValueError(f"grid {grid} too coarse for frequency content {max_frequency}: need >= {need}")
    rng = np.random.default_rng(seed)
    vals = []
    left = n_mc
    while left > 0:
        m = min(batch, left)
        vals.append(np.asarray(f(haar_sample(model, rng, size=m))))
        left -= m
    mc, sigma = _mc_stats(np.concatenate(vals))
    H = charform.grid_points(fd, grid)
    delta = charform.denominator(fd, H, "e")
    tor = np.mean(np.asarray(f(model.torus(H))) * np.abs(delta) ** 2) / len(charform.weyl_table(fd.r1))
    return {"mc_value": mc, "mc_sigma": sigma, "torus_value": complex(tor), "n_mc": n_mc, "grid": grid,
            "seed": seed}


# --- characters and heat kernels ------------------------------------------------

def _partition(lam: Sequence[int]) -> list[int]:
    return [sum(lam[i:]) for i in range(len(lam))]


def schur_characters(eig: np.ndarray, lams: Sequence[Sequence[int]]) -> np.ndarray:
    """``chi_lam`` at matrices with eigenvalues ``eig`` (shape ``(B, n)``), via Jacobi-Trudi.

    Returns shape ``(B, len(lams))``.
    """
    eig = np.atleast_2d(eig)
    B, n = eig.shape
    parts = [_partition(l) for l in lams]
    kmax = max((p[0] + len(p) for p in parts if p), default=1)
    # complete homogeneous symmetric polynomials h_0..h_kmax
    h = np.zeros((B, kmax + 1), dtype=complex)
    h[:, 0] = 1
    for j in range(n):
        x = eig[:, j]
        for k in range(1, kmax + 1):
            h[:, k] = h[:, k] + x * h[:, k - 1]
    out = np.empty((B, len(lams)), dtype=complex)
    for c, p in enumerate(parts):
        m = len(p)
        if m == 0 or p[0] == 0:
            out[:, c] = 1
            continue
        M = np.zeros((B, m, m), dtype=complex)
        for i in range(m):
            for j in range(m):
                k = p[i] - i + j
                if 0 <= k <= kmax:
                    M[:, i, j] = h[:, k]
        out[:, c] = np.linalg.det(M)
    return out


@lru_cache(maxsize=64)
def _heat_terms(n: int, c: float, tol: float):
    """Dominant weights, dimensions and Gaussian factors with a proven tail bound below ``tol``."""
    R = build_root_system("A", n - 1)
    rho2 = float(R.inner(R.rho, R.rho))
    npos = len(R.positive_roots)
    rho_pair = math.prod(float(R.inner(R.rho, a)) for a in R.positive_roots)
    amax = math.sqrt(max(float(R.inner(a, a)) for a in R.roots))
    # |chi| <= d(lam) <= (|lam + rho| amax)^npos / prod <rho, a>; the sum over
    # the full weight lattice of d^2 exp(-c(|nu|^2 - |rho|^2)) bounds the tail
    F = np.linalg.cholesky(np.array([[float(R.inner(u, v)) for v in R.fundamental_weights]
                                     for u in R.fundamental_weights]))
    covol = float(np.prod(np.diag(F)))
    rcov = lattice.covering_radius_bound(F)
    logK = c * rho2 + 2 * npos * math.log(amax) - 2 * math.log(rho_pair)
    if c <= 0:
        raise ValueError("heat kernel needs s t T > 0")
    try:
        radius, bound = lattice.gaussian_radius(c, 0.0, 2 * npos, logK, n - 1, covol, rcov, tol)
    except lattice.LatticeResourceError as exc:
        raise lattice.LatticeResourceError(f"heat-kernel tail bound cannot reach {tol}: {exc}") from exc
    lams = dominant_weights_below(R, Fraction(radius * radius).limit_denominator(10**9))
    dims = np.array([charform.weyl_dimension(R, l) for l in lams], dtype=float)
    energy = np.array([float(R.norm2_weight(tuple(a + 1 for a in l))) - rho2 for l in lams])
    return [tuple(int(x) for x in l) for l in lams], dims, np.exp(-c * energy), bound


def heat_kernel(n: int, g: np.ndarray, s: float, t: float, T: float = 1.0, tol: float = 1e-12,
                eigenvalues: bool = False) -> dict:
    """Heat kernel ``u_s(g, t) = sum d(lam) chi_lam(g) exp(-(s t T/2)(|lam + rho|^2 - |rho|^2))`` on SU(n).

    ``g`` is a matrix or stack of matrices (or of eigenvalues with
    ``eigenvalues=True``).  Returns ``{"value", "tail_bound", "n_terms"}``.
    """
    g = np.asarray(g, dtype=complex)
    eig = g if eigenvalues else np.linalg.eigvals(g)
    single = eig.ndim == 1
    eig = np.atleast_2d(eig)
    lams, dims, gauss, bound = _heat_terms(n, float(s * t * T / 2), float(tol))
    chis = schur_characters(eig, lams)
    val = chis @ (dims * gauss)
    return {"value": val[0] if single else val, "tail_bound": bound, "n_terms": len(lams)}


def twisted_heat_kernel(model: MatrixGroupModel, g: np.ndarray, s: float, t: float, T: float = 1.0,
                        tol: float = 1e-12) -> dict:
    """``v_s(g tau, t)``; the kernel on the outer component is ``u_s(g, t)``."""
    return heat_kernel(model.n, g, s, t, T, tol)


def heatprop_integral(model: MatrixGroupModel, fd: FoldedData, t: float, theta_h, theta_k, n_mc: int,
                      seed: int = 0, tol: float = 1e-12, batch: int = 20000) -> tuple[complex, float]:
    """Haar estimate of ``int_G v_{t/T^2}(g e^h tau(g)^-1 e^-k tau, T) dg`` at ``T = 1/r``.

    ``h = 2 pi i theta_h`` and ``k = 2 pi i theta_k`` with ``theta`` in
    orthonormal LS0 coordinates.  Returns ``(estimate, standard error)``.
    """
    T = 1.0 / model.r
    eh = model.torus(fd.embed(np.asarray(theta_h, dtype=float)))
    emk = model.torus(-fd.embed(np.asarray(theta_k, dtype=float)))
    ss = np.random.SeedSequence(seed)
    vals = []
    left = n_mc
    for child in ss.spawn(math.ceil(n_mc / batch)):
        m = min(batch, left)
        g = haar_sample(model, np.random.default_rng(child), size=m)
        x = g @ eh @ model.tau_inv(g) @ emk
        vals.append(twisted_heat_kernel(model, x, t / T**2, T, T, tol)["value"])
        left -= m
    return _mc_stats(np.concatenate(vals))


def _heat_prefactor(alg, t: float, th: np.ndarray, tk: np.ndarray) -> complex:
    """``exp(-(|h|^2 + |k|^2)/2t - (t/2)|rho|^2) delta(h) delta(-k) / (vol (2 pi/t)^(l/2))``."""
    fd = alg.fd
    rho2 = float(fd.r1.inner(fd.rho_tau, fd.rho_tau))
    # |h|^2 = -(2 pi)^2 (theta, theta) for h = 2 pi i theta (bilinear form)
    pre = np.exp((2 * np.pi) ** 2 * (np.dot(th, th) + np.dot(tk, tk)) / (2 * t) - t * rho2 / 2)
    dh = charform.denominator(fd, fd.embed(th), "e")
    dk = charform.denominator(fd, fd.embed(-tk), "e")
    return complex(pre * dh * dk / (alg.vol * (2 * np.pi / t) ** (alg.l / 2)))


# |delta| below this marks a wall; the reduced numerator is then the mean over
# WALL_SAMPLES points of a circle of radius WALL_RADIUS in a regular direction
WALL_DELTA = 1e-3
WALL_SAMPLES = 16
WALL_RADIUS = 0.02


def reduced_numerator(alg, t: float, theta_h, theta_k, tol: float = 1e-13) -> complex:
    """Lattice numerator divided by the heat-kernel prefactor (entire in ``theta_h, theta_k``)."""
    from .affine import AffinePoint, numerator_lattice_side

    fd = alg.fd
    v = fd.coords(fd.np_rho_tau)
    v = WALL_RADIUS * v / np.linalg.norm(v)
    th = np.asarray(theta_h, dtype=complex)
    tk = np.asarray(theta_k, dtype=complex)

    def circle(x, on_wall):
        if not on_wall:
            return [x]
        return [x + np.exp(2j * np.pi * (j + 0.5) / WALL_SAMPLES) * v for j in range(WALL_SAMPLES)]

    wall_h = abs(charform.denominator(fd, fd.embed(th.real), "e")) < WALL_DELTA and not np.any(th.imag)
    wall_k = abs(charform.denominator(fd, fd.embed(-tk.real), "e")) < WALL_DELTA and not np.any(tk.imag)
    vals = []
    for a in circle(th, wall_h):
        for b in circle(tk, wall_k):
            p = AffinePoint(t, 2j * np.pi * a, 2j * np.pi * b)
            N = numerator_lattice_side(alg, p, tol, with_prefactor=True)["value"]
            vals.append(N / _heat_prefactor(alg, t, a, b))
    return complex(np.mean(vals))


def heatprop_rhs(alg, t: float, theta_h, theta_k, n_mc: int, seed: int = 0, tol: float = 1e-12) -> dict:
    """Right side of the heat-kernel identity at compact points ``h, k = 2 pi i theta``."""
    fd = alg.fd
    if fd.base.type_tag != "A":
        raise ValueError("the heat-kernel route needs a type A matrix model")
    model = MatrixGroupModel.su(fd.base.rank + 1, fd.order)
    th = np.asarray(theta_h, dtype=float)
    tk = np.asarray(theta_k, dtype=float)
    I, sig = heatprop_integral(model, fd, t, th, tk, n_mc, seed, tol)
    fac = _heat_prefactor(alg, t, th, tk)
    return {"value": complex(fac * I), "sigma": float(abs(fac) * sig), "integral": I, "integral_sigma": sig,
            "prefactor": fac}


def heatprop_check(alg, t: float, theta_h, theta_k, n_mc: int, seed: int = 0, tol: float = 1e-12) -> dict:
    """Lattice numerator against the Haar Monte Carlo side of the heat-kernel identity.

    Both sides carry the factor ``prefactor * delta(h) delta(-k)``, which
    vanishes on walls; the comparison is made after dividing it out, so
    ``lhs`` is the reduced lattice numerator and ``rhs`` the group integral.
    """
    th = np.asarray(theta_h, dtype=float)
    tk = np.asarray(theta_k, dtype=float)
    lhs = reduced_numerator(alg, t, th, tk, min(tol, 1e-13))
    rhs = heatprop_rhs(alg, t, th, tk, n_mc, seed, tol)
    I, sig = rhs["integral"], rhs["integral_sigma"]
    return {"lhs": lhs, "rhs": I, "sigma": sig, "rel_err": abs(I - lhs) / abs(lhs),
            "n_sigma": abs(I - lhs) / sig if sig > 0 else float("inf"), "n_mc": n_mc, "seed": seed}


def twisted_convolution_check(model: MatrixGroupModel, rep: RepModel, g1: np.ndarray, g2: np.ndarray,
                              n_mc: int, seed: int = 0, batch: int = 20000) -> dict:
    """``d int_G chi(g1 tau g tau^-1 g2^-1 g^-1) dg`` against ``chi(g1 tau) chi(tau^-1 g2^-1)``."""
    T = solve_intertwiner(model, rep)
    d = rep.dim
    rng = np.random.default_rng(seed)
    vals = []
    left = n_mc
    g2i = np.linalg.inv(g2)
    while left > 0:
        m = min(batch, left)
        g = haar_sample(model, rng, size=m)
        z = g1 @ model.tau(g) @ g2i @ np.swapaxes(g, -1, -2).conj()
        vals.append(d * rep.character(z))
        left -= m
    lhs, sigma = _mc_stats(np.concatenate(vals))
    rhs = np.trace(rep.matrix(g1) @ T) * np.trace(np.linalg.inv(T) @ rep.matrix(g2i))
    return {"lhs": lhs, "rhs": complex(rhs), "sigma": sigma, "n_mc": n_mc, "seed": seed}


def assembled_character(alg, lam, sigma: float, K, n_mc: int, seed: int = 0, tol: float = 1e-12) -> dict:
    """``ch L(Lambda)(bD + K)`` at ``b = -i sigma`` from the heat-kernel group integral.

    The numerator at ``Lambda + rho~ = aD + H`` is the prefactor times the
    Haar integral at ``t = -1/ab``, ``h = H/a``, ``k = K/b`` (compact points
    for real ``K``); it is divided by the universal function, the lattice
    numerator at ``Lambda = 0``.
    """
    from . import affine

    fd = alg.fd
    affine.check_dominant(alg, lam)
    K = np.asarray(K, dtype=float)
    b = -1j * sigma
    kappa = float(affine.level_unit(alg) * (lam.level + alg.dual_coxeter))
    nu = fd.coords(np.array(fd.base.weight(lam.finite), dtype=float) + fd.np_rho_tau)
    t = 2 * math.pi / (kappa * sigma)
    theta_h = nu / kappa
    theta_k = K / (2 * math.pi * sigma)
    num = heatprop_rhs(alg, t, theta_h, theta_k, n_mc, seed, tol)
    zero = affine.HighestWeight(0, (0,) * fd.base.rank)
    p = affine.affine_numerator(alg, zero, b, K.astype(complex))
    value = num["value"] / p
    return {"value": complex(value), "sigma": float(num["sigma"] / abs(p)), "n_mc": n_mc, "seed": seed}
