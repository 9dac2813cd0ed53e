"""Exact linear algebra over the rationals.

Matrices are numpy object arrays whose entries are ``fractions.Fraction``.
Elimination routines work on plain nested lists internally because the
per-element overhead of numpy object arrays buys nothing there.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        num, _, den = x.strip().partition("/")
        if den and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {x!r}")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    return Fraction(x)


def qmat(rows) -> np.ndarray:
    """Build a rational matrix from nested sequences of ints, strings or Fractions."""
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    out = np.empty((m, n), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = to_fraction(x)
    return out


def qvec(xs) -> np.ndarray:
    xs = list(xs)
    out = np.empty(len(xs), dtype=object)
    for i, x in enumerate(xs):
        out[i] = to_fraction(x)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    out = np.empty((m, n), dtype=object)
    out.fill(Fraction(0))
    return out


def diag(entries) -> np.ndarray:
    entries = [to_fraction(x) for x in entries]
    out = zeros(len(entries), len(entries))
    for i, x in enumerate(entries):
        out[i, i] = x
    return out


def block_diag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = zeros(n, m)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def is_zero(M) -> bool:
    return all(x == 0 for x in np.asarray(M).flat)


def equal(A, B) -> bool:
    A = np.asarray(A)
    B = np.asarray(B)
    return A.shape == B.shape and all(a == b for a, b in zip(A.flat, B.flat))


def trace(M) -> Fraction:
    return sum((M[i, i] for i in range(M.shape[0])), Fraction(0))


def _rows(M) -> list[list[Fraction]]:
    return [[to_fraction(x) for x in row] for row in np.asarray(M, dtype=object)]


def rref_rows(rows: list[list[Fraction]], ncols: int | None = None):
    """In-place reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not rows:
        return [], []
    ncols = len(rows[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = rows[r] = [x * inv for x in pr]
        nz = [k for k in range(c, len(pr)) if pr[k] != 0]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    ri = rows[i]
                    for k in nz:
                        ri[k] -= f * pr[k]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def rref(M):
    """Reduced row echelon form of ``M`` as (matrix, pivot columns)."""
    M = np.asarray(M, dtype=object)
    rows, piv = rref_rows(_rows(M), M.shape[1])
    out = qmat(rows) if rows else zeros(0, M.shape[1])
    return out, piv


def rank(M) -> int:
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    return len(rref_rows(_rows(M), M.shape[1])[1])


def nullspace(M) -> list[np.ndarray]:
    """Basis of {x : M x = 0}, one vector per free column, each with a 1 there."""
    M = np.asarray(M, dtype=object)
    ncols = M.shape[1]
    rows, piv = rref_rows(_rows(M), ncols) if M.shape[0] else ([], [])
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, piv):
            v[p] = -row[f]
        basis.append(qvec(v))
    return basis


def left_nullspace(M) -> list[np.ndarray]:
    return nullspace(np.asarray(M, dtype=object).T)


def row_space(vectors: Iterable[Sequence]) -> list[np.ndarray]:
    """Reduced echelon basis of the span of ``vectors``."""
    vecs = [[to_fraction(x) for x in v] for v in vectors]
    if not vecs:
        return []
    rows, _ = rref_rows(vecs, len(vecs[0]))
    return [qvec(r) for r in rows]


def column_space(M) -> np.ndarray:
    """Matrix whose columns are an echelon basis of the column span of ``M``."""
    M = np.asarray(M, dtype=object)
    basis = row_space(M.T)
    if not basis:
        return zeros(M.shape[0], 0)
    return np.array(basis, dtype=object).T


def solve(M, b):
    """One solution of ``M x = b`` (free variables zero), or None if inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    M = np.asarray(M, dtype=object)
    b = np.asarray(b, dtype=object)
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    n = M.shape[1]
    k = B.shape[1]
    aug = [list(map(to_fraction, M[i])) + list(map(to_fraction, B[i])) for i in range(M.shape[0])]
    rows, piv = rref_rows(aug, n + k)
    if any(p >= n for p in piv):
        return None
    X = zeros(n, k)
    for row, p in zip(rows, piv):
        for j in range(k):
            X[p, j] = row[n + j]
    return X[:, 0] if vector else X


def inverse(M) -> np.ndarray:
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(map(to_fraction, M[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows, piv = rref_rows(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return qmat([r[n:] for r in rows])


def det(M) -> Fraction:
    rows = _rows(M)
    n = len(rows)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        pivot = rows[c][c]
        result *= pivot
        for i in range(c + 1, n):
            f = rows[i][c] / pivot
            if f:
                for k in range(c, n):
                    rows[i][k] -= f * rows[c][k]
    return sign * result


def charpoly(M) -> list[Fraction]:
    """Characteristic polynomial det(t I - M) as coefficients [1, c1, ..., cn].

    Faddeev-LeVerrier recursion; exact over the rationals.
    """
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    coeffs = [Fraction(1)]
    N = eye(n)
    for k in range(1, n + 1):
        AN = M @ N
        c = -trace(AN) / k
        coeffs.append(c)
        N = AN
        for i in range(n):
            N[i, i] += c
    return coeffs


def int_charpoly(N: np.ndarray) -> list[int]:
    """Characteristic polynomial of an integer matrix, integer arithmetic only."""
    n = N.shape[0]
    coeffs = [1]
    P = None
    for k in range(1, n + 1):
        AN = N.copy() if P is None else N @ P
        t = sum(int(AN[i, i]) for i in range(n))
        if t % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c = -t // k
        coeffs.append(c)
        P = AN
        for i in range(n):
            P[i, i] += c
    return coeffs


def compound(M, r: int) -> np.ndarray:
    """r-th compound matrix: the action on the r-th exterior power in the
    basis of sorted r-subsets (lexicographic)."""
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    subsets = list(combinations(range(n), r))
    out = zeros(len(subsets), len(subsets))
    if r == 0:
        out[0, 0] = Fraction(1)
        return out
    for a, rows in enumerate(subsets):
        sub = M[list(rows), :]
        for b, cols in enumerate(subsets):
            out[a, b] = det(sub[:, list(cols)])
    return out


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=object), np.asarray(B, dtype=object))


def matpow(M, k: int) -> np.ndarray:
    if k < 0:
        M = inverse(M)
        k = -k
    out = eye(M.shape[0])
    base = M
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out


def left_inverse(B) -> np.ndarray:
    """A matrix L with L @ B = I, for B of full column rank.

    Picks the first set of independent rows of B, so L is supported on them.
    """
    B = np.asarray(B, dtype=object)
    n, d = B.shape
    _, piv = rref(B.T)
    if len(piv) != d:
        raise ValueError("columns are linearly dependent")
    Binv = inverse(B[piv, :])
    L = zeros(d, n)
    L[:, piv] = Binv
    return L


def common_denominator(M) -> tuple[np.ndarray, int]:
    """Write a rational matrix as N / d with N an integer object array."""
    from math import lcm

    M = np.asarray(M, dtype=object)
    d = 1
    for x in M.flat:
        d = lcm(d, x.denominator)
    N = np.empty(M.shape, dtype=object)
    for idx, x in np.ndenumerate(M):
        N[idx] = x.numerator * (d // x.denominator)
    return N, d


def fmt(x: Fraction) -> str:
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_text(M) -> str:
    """Right-aligned rows of exact entries, for printing."""
    cells = [[fmt(x) for x in row] for row in np.asarray(M, dtype=object)]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def rref_augmented(rows: list[list[Fraction]], ncols: int):
    """Row reduce pivoting only in the first ``ncols`` columns.

    Returns (all rows, pivots); rows past ``len(pivots)`` have zeros in the
    first ``ncols`` columns and carry the inconsistency information of the
    remaining columns.
    """
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        pr = rows[r] = [x * inv for x in rows[r]]
        nz = [k for k in range(c, len(pr)) if pr[k] != 0]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri = rows[i]
                for k in nz:
                    ri[k] -= f * pr[k]
        pivots.append(c)
        r += 1
    return rows, pivots


class SparseEchelon:
    """Incrementally maintained reduced echelon basis of sparse rows.

    Rows are dicts column -> Fraction. Every stored row has its pivot (least
    column) equal to 1 and zeros in the pivot columns of all other rows.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict) -> dict:
        row = {k: to_fraction(v) for k, v in row.items() if v}
        for p in sorted(k for k in row if k in self.rows):
            c = row.get(p)
            if not c:
                continue
            for k, x in self.rows[p].items():
                nv = row.get(k, 0) - c * x
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = 1 / row[p]
        row = {k: x * inv for k, x in row.items()}
        for q, other in self.rows.items():
            c = other.get(p)
            if c:
                for k, x in row.items():
                    nv = other.get(k, 0) - c * x
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        self.rows[p] = row
        return True

    def nullspace(self) -> list[list[Fraction]]:
        free = [c for c in range(self.ncols) if c not in self.rows]
        out = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for p, row in self.rows.items():
                x = row.get(f)
                if x:
                    v[p] = -x
            out.append(v)
        return out
