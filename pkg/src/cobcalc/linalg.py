"""Dense exact linear algebra over Q (lists of Fraction rows)."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional


def mat(rows) -> list:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> list:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int) -> list:
    return [[Fraction(0)] * m for _ in range(n)]


def mat_mul(a, b, cols: Optional[int] = None) -> list:
    """Matrix product; ``cols`` pins the width when b has zero rows."""
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}")
    if cols is None:
        cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        oi = out[i]
        for k, aik in enumerate(row):
            if aik == 0:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    oi[j] += aik * bk[j]
    return out


def mat_vec(a, v) -> list:
    return [sum((aij * vj for aij, vj in zip(row, v) if aij and vj), Fraction(0)) for row in a]


def transpose(a) -> list:
    return [list(col) for col in zip(*a)] if a else []


def rref(rows) -> tuple:
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, n_cols: Optional[int] = None) -> list:
    """Basis of the kernel of the matrix, via the standard rref parametrization."""
    if n_cols is None:
        if not rows:
            raise ValueError("need n_cols for an empty matrix")
        n_cols = len(rows[0])
    if not rows:
        return [
            [Fraction(1) if j == k else Fraction(0) for j in range(n_cols)]
            for k in range(n_cols)
        ]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def row_space(rows) -> tuple:
    """Canonical form of the span of the rows: nonzero rref rows as a tuple."""
    red, pivots = rref(rows)
    return tuple(tuple(r) for r in red[: len(pivots)])


def column_space(mat_rows) -> tuple:
    """Canonical form of the column span (row space of the transpose)."""
    return row_space(transpose(mat_rows)) if mat_rows else ()


def det(rows) -> Fraction:
    """Determinant by fraction-free-ish elimination with row swaps."""
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * result


def inverse(rows) -> list:
    """Inverse of a square matrix; raises on singular input."""
    n = len(rows)
    aug = [list(map(Fraction, r)) + identity(n)[i] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red[:n]]


def in_span(rows, vector) -> bool:
    """Whether ``vector`` lies in the row span of ``rows``."""
    if all(x == 0 for x in vector):
        return True
    if not rows:
        return False
    return rank(rows) == rank(list(rows) + [list(vector)])
