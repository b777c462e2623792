"""Small exact linear algebra over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

Mat = List[List[Fraction]]


def frac_matrix(rows: Sequence[Sequence]) -> Mat:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = frac_matrix(rows)
    if not m:
        return m, []
    nrow, ncol = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, nrow) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(nrow):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrow:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def inverse(rows: Sequence[Sequence]) -> Mat:
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(frac_matrix(rows))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def nullspace(rows: Sequence[Sequence], ncol: int | None = None) -> Mat:
    """Basis of {x : A x = 0} as a list of vectors."""
    if ncol is None:
        ncol = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncol)] for i in range(ncol)]
    red, piv = rref(rows)
    free = [c for c in range(ncol) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncol
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Mat:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...]:
    """``a @ v`` skipping zero entries (the matrices here are sparse)."""
    nz = [(k, Fraction(x)) for k, x in enumerate(v) if x]
    return tuple(sum((row[k] * x for k, x in nz if row[k]), Fraction(0)) for row in a)


def solve_left(basis: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Coefficients c with sum_i c_i basis[i] = v (basis rows independent)."""
    k = len(basis)
    cols = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(len(v))]
    red, piv = rref(cols)
    if k in piv:
        raise ValueError("vector not in span")
    out = [Fraction(0)] * k
    for i, p in enumerate(piv):
        out[p] = red[i][k]
    return out


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(x, y)), Fraction(0))


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
