"""Exact phase reduction for exponential sums at real points.

A float is a dyadic rational, so for rational frequencies ``m / q`` the phase
``<m/q, h>`` can be reduced modulo 1 exactly in integer arithmetic.  This
removes the input-rounding floor that otherwise limits alternating sums and
denominator factors near their zeros.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np


def integer_frequencies(vectors: Sequence[Sequence[Fraction]], scale: Fraction) -> tuple[np.ndarray, int]:
    """Integer matrix ``M`` and ``q`` with ``scale * vectors = M / q``."""
    q = 1
    for v in vectors:
        for x in v:
            q = math.lcm(q, (Fraction(scale) * x).denominator)
    M = np.array([[int(Fraction(scale) * x * q) for x in v] for v in vectors], dtype=object)
    return M, q


def _dyadic(h: np.ndarray) -> tuple[np.ndarray, int]:
    ratios = [float(x).as_integer_ratio() for x in h]
    den = max(d for _, d in ratios)
    return np.array([n * (den // d) for n, d in ratios], dtype=object), den


def phase_residues(M: np.ndarray, q: int, h: np.ndarray) -> tuple[np.ndarray, int]:
    """Residues ``r_j`` and modulus ``D`` with ``<M_j/q, h> = r_j / D (mod 1)``."""
    Hn, den = _dyadic(h)
    D = q * den
    return np.array([int(x) % D for x in M.dot(Hn)], dtype=object), D


def centered_fraction(r: int, D: int) -> float:
    """Correctly rounded representative of ``r / D`` in ``[-1/2, 1/2)``."""
    if 2 * r >= D:
        r -= D
    return float(Fraction(r, D))


def exp_sum_exact(M: np.ndarray, q: int, weights, h: np.ndarray, bits: int = 200) -> complex:
    """``sum_j weights_j e(<M_j/q, h>)`` for real ``h`` in extended precision.

    ``weights`` are integers or Fractions.
    """
    res, D = phase_residues(M, q, h)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        two_pi = 2 * gmpy2.const_pi()
        Dm = gmpy2.mpfr(D)
        re = gmpy2.mpfr(0)
        im = gmpy2.mpfr(0)
        for r, w in zip(res, weights):
            if not w:
                continue
            s, c = gmpy2.sin_cos(two_pi * gmpy2.mpfr(r) / Dm)
            wm = gmpy2.mpq(w.numerator, w.denominator) if isinstance(w, Fraction) else int(w)
            re += wm * c
            im += wm * s
        return complex(float(re), float(im))
