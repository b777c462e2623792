"""Numpy reference implementations of the hot kernels."""
from __future__ import annotations

import numpy as np


def expsum(points: np.ndarray, weights: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """``out[p] = sum_j weights[j] * exp(Z[p] . points[j])``.

    Parameters
    ----------
    points : (m, d) float array
    weights : (m,) complex array
    Z : (p, d) complex array
    """
    points = np.ascontiguousarray(points, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=complex)
    Z = np.ascontiguousarray(Z, dtype=complex)
    out = np.empty(Z.shape[0], dtype=complex)
    step = max(1, 2**22 // max(1, points.shape[0]))
    for s in range(0, Z.shape[0], step):
        out[s : s + step] = np.exp(Z[s : s + step] @ points.T) @ weights
    return out


def su2_mckean(inc: np.ndarray) -> np.ndarray:
    """Endpoints of McKean products on SU(2) as unit quaternions.

    ``inc`` has shape (paths, steps, 3): coefficients of each flat increment
    in the basis ``i sigma_a / sqrt 2``.  Returns (paths, 4) quaternions
    ``(w, x, y, z)`` of ``prod_j exp(dy_j)`` ordered left to right.
    """
    inc = np.asarray(inc, dtype=float)
    P, S, _ = inc.shape
    q = np.zeros((P, 4))
    q[:, 0] = 1.0
    for j in range(S):
        q = _qmul(q, _qexp(inc[:, j, :]))
    return q


def _qexp(v: np.ndarray) -> np.ndarray:
    # exp(sum_a v_a i sigma_a / sqrt2) = cos|u| + sin|u| (u/|u|) . (i sigma)
    u = v / np.sqrt(2.0)
    th = np.sqrt(np.sum(u * u, axis=-1))
    sinc = np.where(th > 1e-12, np.sin(th) / np.where(th > 1e-12, th, 1.0), 1.0 - th * th / 6.0)
    out = np.empty(v.shape[:-1] + (4,))
    out[..., 0] = np.cos(th)
    out[..., 1:] = u * sinc[..., None]
    return out


def _qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # product in the convention where (0,1,0,0) <-> i sigma_x, which squares to -1
    # and i sigma_x * i sigma_y = - i sigma_z
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    out = np.empty(np.broadcast(aw, bw).shape + (4,))
    out[..., 0] = aw * bw - ax * bx - ay * by - az * bz
    out[..., 1] = aw * bx + ax * bw - (ay * bz - az * by)
    out[..., 2] = aw * by + ay * bw - (az * bx - ax * bz)
    out[..., 3] = aw * bz + az * bw - (ax * by - ay * bx)
    return out
