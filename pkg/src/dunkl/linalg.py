"""Exact rational matrices on top of FLINT, plus the float counterparts."""

from __future__ import annotations

import flint
import numpy as np

from .errors import RegularityError
from .scalars import Q, from_fmpq, is_exact


def to_flint(rows, ncols=None) -> flint.fmpq_mat:
    nrows = len(rows)
    ncols = len(rows[0]) if rows else (ncols or 0)
    flat = []
    for r in rows:
        for v in r:
            q = Q(v)
            flat.append(flint.fmpq(int(q.numerator), int(q.denominator)))
    return flint.fmpq_mat(nrows, ncols, flat)


def from_flint(m: flint.fmpq_mat) -> list:
    return [[from_fmpq(m[i, j]) for j in range(m.ncols())] for i in range(m.nrows())]


def column(m: flint.fmpq_mat, j: int) -> list:
    return [from_fmpq(m[i, j]) for i in range(m.nrows())]


def solve_stacked(A: flint.fmpq_mat, B: flint.fmpq_mat) -> flint.fmpq_mat:
    """Solve A X = B for an overdetermined A of full column rank.

    Row reduction of [A | B] keeps all equations: the system is uniquely
    solvable iff the pivots are exactly the first ncols(A) columns, and the
    remaining reduced rows (the surplus equations) vanish.
    """
    m, d = A.nrows(), A.ncols()
    r = B.ncols()
    aug = flint.fmpq_mat(m, d + r)
    for i in range(m):
        for j in range(d):
            aug[i, j] = A[i, j]
        for j in range(r):
            aug[i, d + j] = B[i, j]
    R, rank = aug.rref()
    for i in range(min(rank, d)):
        if R[i, i] != 1:
            raise RegularityError("intertwining system is not of full column rank")
    if rank < d:
        raise RegularityError("intertwining system is not of full column rank")
    if rank > d:
        raise RegularityError("intertwining system is inconsistent")
    X = flint.fmpq_mat(d, r)
    for i in range(d):
        for j in range(r):
            X[i, j] = R[i, d + j]
    return X


def solve_stacked_float(A: np.ndarray, B: np.ndarray, tol=1e-9) -> np.ndarray:
    s = np.linalg.svd(A, compute_uv=False)
    if s.size == 0 or s[-1] < tol * max(1.0, s[0]):
        raise RegularityError("intertwining system is numerically rank deficient")
    X, *_ = np.linalg.lstsq(A, B, rcond=None)
    resid = np.abs(A @ X - B).max() if B.size else 0.0
    if resid > tol * max(1.0, np.abs(B).max(initial=0.0)):
        raise RegularityError(f"intertwining system inconsistent (residual {resid:.2e})")
    return X


def as_float_array(rows) -> np.ndarray:
    return np.array([[float(v) for v in r] for r in rows], dtype=float)


def matrix_is_exact(rows) -> bool:
    return all(is_exact(v) for r in rows for v in r)
