"""Dense linear algebra over F_p.

Vectors are 1-d and matrices 2-d numpy int64 arrays with entries in [0, p).
Linear maps are stored as matrices whose rows are the images of source
basis vectors, so applying a map is ``v @ M``.
"""

from __future__ import annotations

import numpy as np


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def as_matrix(rows, ncols: int, p: int) -> np.ndarray:
    if len(rows) == 0:
        return zeros(0, ncols)
    return np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p


def row_reduce(M: np.ndarray, p: int, transform: bool = False):
    """Reduced row echelon form of ``M`` modulo ``p``.

    Returns ``(R, pivots)`` where ``R`` holds the nonzero rows only, or
    ``(R, pivots, T)`` with ``T @ M == R`` when ``transform`` is set.
    """
    M = np.asarray(M, dtype=np.int64) % p
    r, c = M.shape
    if transform:
        A = np.concatenate([M, np.eye(r, dtype=np.int64)], axis=1)
    else:
        A = M.copy()
    pivots = []
    row = 0
    for col in range(c):
        if row == r:
            break
        nz = np.flatnonzero(A[row:, col])
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            A[[row, piv]] = A[[piv, row]]
        A[row] = A[row] * pow(int(A[row, col]), -1, p) % p
        f = A[:, col].copy()
        f[row] = 0
        if f.any():
            A = (A - np.outer(f, A[row])) % p
        pivots.append(col)
        row += 1
    if transform:
        return A[:row, :c], pivots, A[:row, c:]
    return A[:row], pivots


def rank(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(row_reduce(M, p)[1])


def reduce_vector(v: np.ndarray, R: np.ndarray, pivots, p: int) -> np.ndarray:
    """Remainder of ``v`` after clearing the pivot columns of the RREF ``R``."""
    v = np.asarray(v, dtype=np.int64) % p
    for i, col in enumerate(pivots):
        if v[col]:
            v = (v - v[col] * R[i]) % p
    return v


def left_kernel(M: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ M == 0}``."""
    r, c = M.shape
    if r == 0:
        return zeros(0, 0)
    if c == 0:
        return np.eye(r, dtype=np.int64)
    A = np.concatenate([M % p, np.eye(r, dtype=np.int64)], axis=1)
    R, pivots = row_reduce(A, p)
    rows = [R[i, c:] for i, col in enumerate(pivots) if col >= c]
    return as_matrix(rows, r, p)


class LinearSystem:
    """Solver for ``x @ rows == v`` with a fixed coefficient matrix."""

    def __init__(self, rows: np.ndarray, p: int):
        self.p = p
        self.rows = np.asarray(rows, dtype=np.int64) % p
        self.nrows, self.ncols = self.rows.shape
        if self.nrows:
            self.R, self.pivots, self.T = row_reduce(self.rows, p, transform=True)
        else:
            self.R = zeros(0, self.ncols)
            self.pivots = []
            self.T = zeros(0, 0)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        return reduce_vector(v, self.R, self.pivots, self.p)

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def solve(self, v):
        """Some ``x`` with ``x @ rows == v``, or ``None`` if ``v`` is not in the row span."""
        p = self.p
        v = np.asarray(v, dtype=np.int64) % p
        coeffs = np.zeros(len(self.pivots), dtype=np.int64)
        for i, col in enumerate(self.pivots):
            if v[col]:
                coeffs[i] = v[col]
                v = (v - v[col] * self.R[i]) % p
        if v.any():
            return None
        if not len(self.pivots):
            return np.zeros(self.nrows, dtype=np.int64)
        return coeffs @ self.T % p
