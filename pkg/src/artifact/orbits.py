"""Affine adjoint orbits of twisted loop groups through monodromy.

A loop ``x`` on ``[0, 1/r]`` with ``x(t + 1/r) = tau(x(t))`` and coefficients
``a C + b D`` is gauged by a twisted-periodic ``g`` to
``g x g^-1 - b g' g^-1``.  The fundamental solution of ``z' = z x / b`` has
``1/r``-monodromy ``M = z(1/r)``, which gauging changes to
``g(0) M tau(g(0))^-1``; the twisted conjugacy class of ``M tau`` is the
orbit label, reduced to a point of the fundamental alcove of the affine
Weyl group of R1 acting on LS0 (translations ``Q(R1^vee)``, walls
``(mu, alpha) in Z``).

The invariant form on matrices is ``tr(XY)`` (long roots of squared
length 2); the loop form integrates it over ``[0, 1]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm, expm_frechet

from . import charform
from .folding import FoldedData, fold_tag
from .grouprep import MatrixGroupModel, RepModel, rep_kind_for_weight, solve_intertwiner

SEAM_TOL = 1e-8
ALGEBRA_TOL = 1e-10


def _herm(X: np.ndarray) -> np.ndarray:
    return np.swapaxes(X, -1, -2).conj()


def folded_data(model: MatrixGroupModel) -> FoldedData:
    n = model.n
    return fold_tag(f"A{n - 1}" if model.r == 1 else f"A{n - 1}^{model.r}")


@dataclass(frozen=True, eq=False)
class TwistedLoop:
    """Samples ``x(t_j)``, ``t_j = j / (r N)``, ``j = 0..N``, of a twisted-periodic loop plus ``a C + b D``."""

    model: MatrixGroupModel
    samples: np.ndarray
    a: float
    b: float

    def __post_init__(self):
        X = np.asarray(self.samples, dtype=complex)
        n = self.model.n
        if X.ndim != 3 or X.shape[1:] != (n, n) or X.shape[0] < 3:
            raise ValueError(f"samples must have shape (N+1, {n}, {n}) with N >= 2")
        if self.b == 0:
            raise ValueError("b = 0 lies in the zero hyperplane, which is not handled")
        if np.max(np.abs(X + _herm(X))) > ALGEBRA_TOL or np.max(np.abs(np.trace(X, axis1=1, axis2=2))) > ALGEBRA_TOL:
            raise ValueError("samples must be anti-Hermitian and traceless")
        seam = np.max(np.abs(X[-1] - self.model.dtau(X[0])))
        if seam > SEAM_TOL:
            raise ValueError(f"seam condition x(1/r) = tau(x(0)) violated by {seam:.2e}")
        X = X.copy()
        X[-1] = self.model.dtau(X[0])
        object.__setattr__(self, "samples", X)

    @property
    def N(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def period(self) -> float:
        return 1.0 / self.model.r

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.period, self.N + 1)

    @classmethod
    def constant(cls, model: MatrixGroupModel, x0: np.ndarray, a: float, b: float, N: int) -> "TwistedLoop":
        return cls(model, np.repeat(np.asarray(x0, dtype=complex)[None], N + 1, axis=0), a, b)

    @classmethod
    def from_alcove(cls, model: MatrixGroupModel, mu, b: float, N: int, a: float = 0.0) -> "TwistedLoop":
        """Constant loop ``x0 = r b 2 pi i diag(H)``, ``H`` the ambient image of ``mu``; its monodromy is ``exp(2 pi i H)``."""
        fd = folded_data(model)
        H = fd.embed(np.asarray(mu, dtype=float))
        return cls.constant(model, model.r * b * 2j * np.pi * np.diag(H), a, b, N)

    def to_json(self) -> str:
        return json.dumps({"n": self.model.n, "r": self.model.r, "b": self.b, "a_coeff": self.a, "grid": self.N,
                           "samples": np.stack([self.samples.real, self.samples.imag], axis=-1).tolist()})

    @classmethod
    def from_json(cls, text: str) -> "TwistedLoop":
        d = json.loads(text)
        S = np.asarray(d["samples"], dtype=float)
        if S.shape[0] != int(d["grid"]) + 1:
            raise ValueError("grid size does not match the number of samples")
        model = MatrixGroupModel.su(int(d["n"]), int(d["r"]))
        return cls(model, S[..., 0] + 1j * S[..., 1], float(d["a_coeff"]), float(d["b"]))


def loop_form(loop: TwistedLoop, X: np.ndarray, Y: np.ndarray) -> float:
    """``int_0^1 tr(X Y) dt`` by the trapezoid rule over one twisted period, times ``r``."""
    vals = np.trace(X @ Y, axis1=1, axis2=2).real
    dt = loop.period / loop.N
    return float(loop.model.r * dt * (vals[0] / 2 + vals[1:-1].sum() + vals[-1] / 2))


def shell_invariant(loop: TwistedLoop) -> dict:
    """``{"a": 2 a b + (x, x), "b": b}``, the shell containing the element."""
    xx = loop_form(loop, loop.samples, loop.samples)
    return {"a": 2 * loop.a * loop.b + xx, "b": loop.b}


# --- gauge loops ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GaugeLoop:
    """Samples of a twisted-periodic ``g`` and of ``g'`` on a loop grid."""

    model: MatrixGroupModel
    g: np.ndarray
    dg: np.ndarray

    def __post_init__(self):
        seam = np.max(np.abs(self.g[-1] - self.model.tau(self.g[0])))
        if seam > SEAM_TOL:
            raise ValueError(f"gauge is not twisted periodic: seam defect {seam:.2e}")


def _tau_eigenbasis(model: MatrixGroupModel) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of the +1 and -1 eigenspaces of ``dtau`` on su(n)."""
    B = model.algebra_basis
    if model.r == 1:
        return B, B[:0]
    D = np.array([[np.trace(-X @ model.dtau(Y)).real for Y in B] for X in B])
    w, V = np.linalg.eigh((D + D.T) / 2)
    plus = np.einsum("ab,bij->aij", V[:, w > 0].T, B)
    minus = np.einsum("ab,bij->aij", V[:, w < 0].T, B)
    return plus, minus


def random_gauge(model: MatrixGroupModel, N: int, rng: np.random.Generator, modes: int = 2,
                 amplitude: float = 0.5, t: np.ndarray | None = None) -> GaugeLoop:
    """``g = exp(Y)`` with ``Y`` a random trigonometric twisted-periodic loop in su(n).

    ``tau``-even parts carry frequencies ``2 pi r m``, odd parts
    ``2 pi r (m + 1/2)``, so ``Y(t + 1/r) = dtau(Y(t))``.  ``g'`` is exact
    (Frechet derivative of the exponential).
    """
    r = model.r
    t = np.linspace(0.0, 1.0 / r, N + 1) if t is None else np.asarray(t, dtype=float)
    plus, minus = _tau_eigenbasis(model)
    Y = np.zeros((len(t), model.n, model.n), dtype=complex)
    dY = np.zeros_like(Y)
    for basis, shift in ((plus, 0.0), (minus, 0.5)):
        if len(basis) == 0:
            continue
        for m in range(modes + 1):
            w = 2 * np.pi * r * (m + shift)
            if w == 0:
                c = rng.normal(size=len(basis)) * amplitude
                Y += np.einsum("a,aij->ij", c, basis)[None]
                continue
            c = rng.normal(size=(2, len(basis))) * amplitude / (1 + m)
            A = np.einsum("a,aij->ij", c[0], basis)
            B = np.einsum("a,aij->ij", c[1], basis)
            Y += np.cos(w * t)[:, None, None] * A + np.sin(w * t)[:, None, None] * B
            dY += w * (-np.sin(w * t)[:, None, None] * A + np.cos(w * t)[:, None, None] * B)
    g = np.empty_like(Y)
    dg = np.empty_like(Y)
    for j in range(len(t)):
        g[j], dg[j] = expm_frechet(Y[j], dY[j])
    return GaugeLoop(model, g, dg)


def gauge_action(gauge: GaugeLoop, loop: TwistedLoop) -> TwistedLoop:
    """``x -> g x g^-1 - b g' g^-1`` with ``a -> a + (g^-1 g', x) - (b/2)(g' g^-1, g' g^-1)``."""
    if gauge.g.shape != loop.samples.shape:
        raise ValueError("gauge and loop are sampled on different grids")
    g, dg = gauge.g, gauge.dg
    gi = _herm(g)
    b = loop.b
    X = g @ loop.samples @ gi - b * dg @ gi
    X = (X - _herm(X)) / 2
    X = X - np.trace(X, axis1=1, axis2=2)[:, None, None] / loop.model.n * np.eye(loop.model.n)
    A = gi @ dg
    C = dg @ gi
    a = loop.a + loop_form(loop, A, loop.samples) - b / 2 * loop_form(loop, C, C)
    return TwistedLoop(loop.model, X, a, b)


# --- fundamental solution -----------------------------------------------------------

_C1 = 0.5  # CF4 split: exp(B0/2 + 2 B1) and exp(B0/2 - 2 B1)


def _polar(U: np.ndarray) -> np.ndarray:
    W, _, Vh = np.linalg.svd(U)
    return W @ Vh


def _cf4_path(X: np.ndarray, h: float, b: float) -> np.ndarray:
    """CF4 steps of size ``h`` using samples at ``0, h/2, h`` (Simpson moments) for ``z' = z X / b``."""
    n = X.shape[1]
    steps = (X.shape[0] - 1) // 2
    z = np.empty((steps + 1, n, n), dtype=complex)
    z[0] = np.eye(n)
    for s in range(steps):
        A0, Am, A1 = X[2 * s] / b, X[2 * s + 1] / b, X[2 * s + 2] / b
        B0 = h * (A0 + 4 * Am + A1) / 6
        B1 = h * (A1 - A0) / 12
        # right action: the earlier half-step factor is applied first
        z[s + 1] = _polar(z[s] @ expm(B0 / 2 - 2 * B1) @ expm(B0 / 2 + 2 * B1))
    return z


def _refine(loop: TwistedLoop) -> TwistedLoop:
    """Trigonometric interpolation to the grid with twice as many points."""
    r, N, model = loop.model.r, loop.N, loop.model
    base = loop.samples[:-1]
    full = [base]
    cur = base
    for _ in range(r - 1):
        cur = model.dtau(cur)
        full.append(cur)
    F = np.fft.fft(np.concatenate(full), axis=0)
    L = r * N
    pad = np.zeros((2 * L,) + F.shape[1:], dtype=complex)
    half = L // 2
    pad[:half] = F[:half]
    pad[-half:] = F[-half:]
    if L % 2 == 0:
        pad[half] = F[half] / 2
        pad[-half] = F[half] / 2
    fine = np.fft.ifft(pad, axis=0) * 2
    X = np.concatenate([fine[: 2 * N], model.dtau(fine[:1])])
    X = (X - _herm(X)) / 2
    return TwistedLoop(model, X, loop.a, loop.b)


def fundamental_solution(loop: TwistedLoop, tol: float = 1e-8, max_refine: int = 5) -> dict:
    """Fundamental solution of ``z' = z x / b`` on ``[0, 1/r]`` with ``z(0) = 1``.

    CF4 on the sample grid (step ``2 dt``) is compared with the same scheme
    at twice the step; the grid is refined spectrally until the endpoints
    differ by less than ``tol``.  Returns ``{"t", "z", "error_estimate", "N"}``.
    """
    cur = loop if loop.N % 4 == 0 else _refine(loop) if (2 * loop.N) % 4 == 0 else _refine(_refine(loop))
    for _ in range(max_refine + 1):
        h = 2 * cur.period / cur.N
        fine = _cf4_path(cur.samples, h, cur.b)
        coarse = _cf4_path(cur.samples[::2], 2 * h, cur.b)
        err = float(np.linalg.norm(fine[-1] - coarse[-1], 2))
        if err < tol:
            t = np.linspace(0.0, cur.period, fine.shape[0])
            return {"t": t, "z": fine, "error_estimate": err / 15, "N": cur.N}
        cur = _refine(cur)
    raise RuntimeError(f"fundamental solution did not converge to {tol} (last difference {err:.2e})")


def cf4_monodromy(loop: TwistedLoop) -> np.ndarray:
    """CF4 monodromy on the sample grid itself (step ``2 dt``, no refinement)."""
    if loop.N % 2:
        raise ValueError("the sample grid needs an even number of intervals")
    return _cf4_path(loop.samples, 2 * loop.period / loop.N, loop.b)[-1]


def monodromy(loop: TwistedLoop, tol: float = 1e-8) -> np.ndarray:
    """``M = z(1/r)``."""
    return fundamental_solution(loop, tol)["z"][-1]


# --- alcove ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AlcoveClass:
    """Point of the closed fundamental alcove (orthonormal LS0 coordinates)."""

    coords: np.ndarray
    boundary: tuple[bool, ...]
    residual: float = 0.0
    candidates: int = 1

    def to_dict(self) -> dict:
        return {"coords": [float(x) for x in self.coords], "boundary": list(self.boundary),
                "residual": self.residual, "candidates": self.candidates}


@lru_cache(maxsize=None)
def _alcove_data(tag: str):
    fd = fold_tag(tag)
    R1 = fd.r1
    s = float(fd.base.form_scale)
    simple = np.array([[float(x) for x in a] for a in R1.simple_roots])
    theta = np.array([float(x) for x in R1.highest_root])
    # pairings (mu, alpha) = s <embed(mu), alpha>
    A = s * fd.embed(np.eye(fd.l)) @ simple.T
    th = s * fd.embed(np.eye(fd.l)) @ theta
    n2 = lambda v: s * float(v @ v)
    # coroots 2 alpha / (alpha, alpha) in orthonormal coordinates
    cor = np.array([fd.coords(2 * a / n2(a)) for a in simple])
    th_cor = fd.coords(2 * theta / n2(theta))
    return fd, A.T, th, cor, th_cor


def _pairings(tag: str, mu: np.ndarray) -> tuple[np.ndarray, float]:
    _, A, th, _, _ = _alcove_data(tag)
    return A @ mu, float(th @ mu)


def in_alcove(fd: FoldedData, mu, eps: float = 1e-12) -> bool:
    p, q = _pairings(fd.tag, np.asarray(mu, dtype=float))
    return bool(np.all(p >= -eps) and q <= 1 + eps)


def fold_to_alcove(fd: FoldedData, mu, max_iter: int = 10000) -> np.ndarray:
    """Image of ``mu`` in the closed fundamental alcove under the affine Weyl group of R1."""
    _, A, th, cor, th_cor = _alcove_data(fd.tag)
    mu = np.asarray(mu, dtype=float).copy()
    for _ in range(max_iter):
        p = A @ mu
        i = int(np.argmin(p))
        if p[i] < -1e-13:
            mu = mu - p[i] * cor[i]
            continue
        q = float(th @ mu)
        if q > 1 + 1e-13:
            mu = mu - (q - 1) * th_cor
            continue
        return mu
    raise RuntimeError("alcove folding did not terminate")


def alcove_vertices(fd: FoldedData) -> np.ndarray:
    """Vertices ``0`` and ``w_i / m_i`` (fundamental coweights over the marks of theta)."""
    _, A, th, _, _ = _alcove_data(fd.tag)
    Ainv = np.linalg.inv(A)
    m = np.linalg.solve(A.T, th)
    return np.vstack([np.zeros(fd.l)] + [Ainv[:, i] / m[i] for i in range(fd.l)])


def random_alcove_point(fd: FoldedData, rng: np.random.Generator) -> np.ndarray:
    V = alcove_vertices(fd)
    return rng.dirichlet(np.ones(len(V))) @ V


def _boundary(fd: FoldedData, mu: np.ndarray, eps: float = 1e-9) -> tuple[bool, ...]:
    p, q = _pairings(fd.tag, mu)
    return tuple(bool(abs(x) < eps) for x in p) + (bool(abs(q - 1) < eps),)


# --- classification ---------------------------------------------------------------

def _phases(U: np.ndarray) -> np.ndarray:
    return np.mod(np.angle(np.linalg.eigvals(U)) / (2 * np.pi), 1.0)


def _circ(x: float) -> float:
    return abs((x + 0.5) % 1.0 - 0.5)


def _candidates(model: MatrixGroupModel, M: np.ndarray) -> list[np.ndarray]:
    """Ambient torus vectors ``H`` with ``exp(2 pi i H) tau`` possibly twisted-conjugate to ``M tau``."""
    n = model.n
    if model.r == 1:
        th = np.angle(np.linalg.eigvals(M)) / (2 * np.pi)
        th = np.sort(th)[::-1]
        m = int(round(th.sum()))
        if m > 0:
            th[:m] -= 1
        elif m < 0:
            th[m:] += 1
        return [np.sort(th)[::-1]]
    # (M tau)^2 = M tau(M) is conjugate to exp(4 pi i H)
    ph = list(_phases(M @ model.tau(M)))
    if n % 2:
        ph.pop(int(np.argmin([_circ(p) for p in ph])))
    pairs = []
    while ph:
        p = ph.pop(0)
        j = int(np.argmin([_circ(q + p) for q in ph]))
        ph.pop(j)
        pairs.append(p)
    k = len(pairs)
    out = []
    for bits in range(2**k):
        x = np.array([pairs[i] / 2 + 0.5 * ((bits >> i) & 1) for i in range(k)])
        mid = [0.0] if n % 2 else []
        out.append(np.concatenate([x, mid, -x[::-1]]))
    return out


@lru_cache(maxsize=None)
def _probe_reps(n: int, r: int):
    model = MatrixGroupModel.su(n, r)
    lams = [tuple([1] + [0] * (n - 3) + [1])] if n >= 3 else []
    if n % 2 == 0:
        k = n // 2
        lams.append(tuple(1 if i == k - 1 else 0 for i in range(n - 1)))
    out = []
    for lam in lams:
        if rep_kind_for_weight(n, lam) is None:
            continue
        rep = RepModel(model, lam)
        out.append((lam, rep, solve_intertwiner(model, rep)))
    return out


def classify_monodromy(model: MatrixGroupModel, M: np.ndarray, tol: float = 1e-6) -> AlcoveClass:
    """Alcove point of the twisted conjugacy class of ``M tau``."""
    fd = folded_data(model)
    cands = []
    for H in _candidates(model, M):
        mu = fold_to_alcove(fd, fd.coords(H))
        if not any(np.linalg.norm(mu - c) < 1e-7 for c in cands):
            cands.append(mu)
    if model.r == 1:
        mu = cands[0]
        return AlcoveClass(mu, _boundary(fd, mu), 0.0, len(cands))
    probes = _probe_reps(model.n, model.r)
    target = [np.trace(rep.matrix(M) @ T) for _, rep, T in probes]
    best, best_res = None, np.inf
    for mu in cands:
        H = fd.embed(mu)
        res = max((abs(charform.twisted_character(fd, lam, H) - v) for (lam, _, _), v in zip(probes, target)),
                  default=0.0)
        if res < best_res:
            best, best_res = mu, res
    if best_res > tol:
        raise ArithmeticError(f"no alcove candidate matches the twisted characters (residual {best_res:.2e})")
    return AlcoveClass(best, _boundary(fd, best), float(best_res), len(cands))


def classify(loop: TwistedLoop, tol: float = 1e-6) -> AlcoveClass:
    """Orbit label of ``x + a C + b D``: the alcove point of ``M(x/b) tau``."""
    return classify_monodromy(loop.model, monodromy(loop), tol)


def character_checks(model: MatrixGroupModel, M: np.ndarray, mu) -> list[dict]:
    """Twining characters of the probe representations at ``M tau`` and at the alcove point."""
    if model.r == 1:
        return []
    fd = folded_data(model)
    H = fd.embed(np.asarray(mu, dtype=float))
    out = []
    for lam, rep, T in _probe_reps(model.n, model.r):
        v = complex(np.trace(rep.matrix(M) @ T))
        w = complex(charform.twisted_character(fd, lam, H))
        out.append({"weight": list(lam), "monodromy": [v.real, v.imag], "alcove": [w.real, w.imag],
                    "abs_diff": abs(v - w)})
    return out
