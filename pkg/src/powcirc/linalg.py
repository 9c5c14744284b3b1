"""Exact Gaussian elimination over F_p on numpy arrays.

Matrices use ``int64`` when every product of two residues fits (p < 2**31)
and fall back to object arrays of Python ints otherwise.  Pivoting always
takes the first nonzero entry of the column, so results are reproducible.
"""
from __future__ import annotations

import numpy as np

_INT64_LIMIT = 1 << 31


def dtype_for(p: int):
    return np.int64 if p < _INT64_LIMIT else object


def as_matrix(rows, p: int, ncols: int | None = None) -> np.ndarray:
    """Reduce ``rows`` mod p into a fresh 2-D array of the right dtype."""
    dt = dtype_for(p)
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        if dt is object or rows.dtype == object:
            A = np.empty(rows.shape, dtype=dt)
            for idx, x in np.ndenumerate(rows):
                A[idx] = int(x) % p
            return A
        return np.mod(rows.astype(np.int64), p)
    rows = [list(r) for r in rows]
    if not rows:
        return np.zeros((0, ncols or 0), dtype=dt)
    if dt is object:
        A = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                A[i, j] = int(x) % p
        return A
    return np.array([[int(x) % p for x in r] for r in rows], dtype=np.int64)


def rref(M, p: int):
    """Reduced row echelon form.  Returns ``(R, pivot_columns)``."""
    A = as_matrix(M, p)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[np.ix_(hit, np.arange(c, cols))] = (
                A[hit, c:] - np.outer(col[hit], A[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def nullspace(M, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis of {x : M x = 0} as rows; one row per free column, that entry set to 1."""
    A = as_matrix(M, p, ncols)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=dtype_for(p))
    R, piv = rref(A, p)
    pset = set(piv)
    free = [c for c in range(cols) if c not in pset]
    N = np.zeros((len(free), cols), dtype=dtype_for(p))
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(piv):
            N[k, pc] = (-R[i, f]) % p
    return N


def solve(A, b, p: int):
    """One solution of A x = b (free variables zero), or ``None`` if inconsistent."""
    A = as_matrix(A, p)
    rows, cols = A.shape
    aug = np.concatenate([A, as_matrix([[x] for x in b], p).reshape(rows, 1)], axis=1)
    R, piv = rref(aug, p)
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=dtype_for(p))
    for i, pc in enumerate(piv):
        x[pc] = R[i, cols]
    return x


def row_basis(vectors, p: int, ncols: int | None = None) -> np.ndarray:
    """Canonical basis (nonzero RREF rows) of the span of ``vectors``."""
    A = as_matrix(vectors, p, ncols)
    if A.shape[0] == 0:
        return A
    R, piv = rref(A, p)
    return R[: len(piv)]


def in_span(basis, v, p: int) -> bool:
    B = as_matrix(basis, p, len(v))
    if B.shape[0] == 0:
        return not any(int(x) % p for x in v)
    r0 = rank(B, p)
    return rank(np.concatenate([B, as_matrix([list(v)], p)], axis=0), p) == r0
