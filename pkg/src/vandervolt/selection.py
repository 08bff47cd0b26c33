"""Selecting an invertible n x n row submatrix of a tall generalized
Vandermonde matrix: iterative MaxVol, and exhaustive MaxVol / MaxMinSv."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    SingularMatrixError,
    as_matrix,
    det_batch,
    determinant,
    lu_factor,
    singular_values,
    singular_values_batch,
)

DEFAULT_TOL = 0.01
SWAP_CAP_FACTOR = 200
MAX_SUBSETS = 1_000_000
NEAR_SINGULAR_RTOL = 1e-10
# rank test on the pivots of the initial row selection
_RANK_RTOL = 1e-13
# swaps by a factor within round-off of 1 do not increase the volume and can cycle
_SWAP_MARGIN = 1e-12
_CHUNK = 20_000


class Method(enum.Enum):
    MAXVOL = "maxvol"
    MAXVOL_EXHAUSTIVE = "maxvol-exhaustive"
    MAXMINSV = "maxminsv"


class SubsetSearchTooLargeError(ValueError):
    pass


class MaxVolConvergenceError(RuntimeError):
    def __init__(self, rows, message):
        self.rows = sorted(int(r) for r in rows)
        super().__init__(message)


@dataclass(frozen=True)
class SelectedBasis:
    row_indices: tuple[int, ...]
    method: Method
    volume: float
    sigma_min: float
    sigma_max: float
    dismissed: bool
    # |det| after initialization and after every accepted swap (MaxVol only)
    volume_history: tuple[float, ...] = field(default=(), compare=False)
    swaps: int = 0

    def to_dict(self, one_based: bool = True) -> dict:
        shift = 1 if one_based else 0
        return {
            "method": self.method.value,
            "row_indices": [i + shift for i in self.row_indices],
            "volume": self.volume,
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "dismissed": self.dismissed,
            "swaps": self.swaps,
        }


def near_singular(volume: float, sigma_min: float, scale: float) -> bool:
    """True when the smallest singular value is numerically zero relative to `scale`."""
    return bool(sigma_min <= NEAR_SINGULAR_RTOL * max(scale, 1.0))


def _finish(v, rows, method, history=(), swaps=0) -> SelectedBasis:
    rows = tuple(sorted(int(r) for r in rows))
    sub = v[list(rows)]
    spectrum = singular_values(sub)
    volume = float(np.prod(spectrum.values))
    return SelectedBasis(
        rows,
        method,
        volume,
        spectrum.sigma_min,
        spectrum.sigma_max,
        near_singular(volume, spectrum.sigma_min, spectrum.sigma_max),
        tuple(history),
        swaps,
    )


def _pivot_rows(v: np.ndarray) -> tuple[list[int], bool]:
    """Rows chosen by partial-pivoting elimination on a tall matrix."""
    a = v.copy()
    m, n = a.shape
    order = np.arange(m)
    scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
    deficient = False
    for k in range(n):
        col = np.abs(a[k:, k])
        # exact ties go to the smallest original row index
        tied = np.flatnonzero(col == col.max())
        p = k + int(tied[np.argmin(order[k:][tied])])
        if abs(a[p, k]) <= _RANK_RTOL * scale:
            deficient = True
            break
        if p != k:
            a[[k, p]] = a[[p, k]]
            order[[k, p]] = order[[p, k]]
        mult = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= mult[:, None] * a[k, None, k:]
    return [int(i) for i in order[:n]], deficient


def maxvol_rows(v, tol: float = DEFAULT_TOL, max_swaps: int | None = None) -> SelectedBasis:
    """Approximate maximum-volume n x n row submatrix of an m x n matrix.

    Starts from the pivot rows of a partially pivoted LU and keeps swapping
    in the row that holds the largest entry of ``V A^{-1}`` while that entry
    exceeds ``1 + tol``. On return the submatrix A is dominant: every entry
    of ``V A^{-1}`` is at most ``1 + tol`` in modulus.
    """
    v = as_matrix(v)
    m, n = v.shape
    if m < n:
        raise ValueError(f"need at least as many rows as columns, got {m} x {n}")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    rows, deficient = _pivot_rows(v)
    if deficient:
        return SelectedBasis(tuple(sorted(rows)), Method.MAXVOL, 0.0, 0.0,
                             singular_values(v).sigma_max, True)
    cap = SWAP_CAP_FACTOR * n if max_swaps is None else max_swaps
    history = [abs(determinant(v[rows]))]
    swaps = 0
    while True:
        # B = V A^{-1}, computed as the solution of A^T B^T = V^T
        try:
            b = lu_factor(v[rows].T).solve(v.T).T
        except SingularMatrixError:
            return SelectedBasis(tuple(sorted(rows)), Method.MAXVOL, 0.0, 0.0,
                                 singular_values(v).sigma_max, True)
        flat = int(np.argmax(np.abs(b)))  # first maximum: smallest (row, col)
        i, j = divmod(flat, n)
        if abs(b[i, j]) <= 1.0 + tol + _SWAP_MARGIN:
            break
        if swaps >= cap:
            raise MaxVolConvergenceError(rows, f"MaxVol did not converge within {cap} swaps")
        rows[j] = i
        swaps += 1
        history.append(abs(determinant(v[rows])))
    return _finish(v, rows, Method.MAXVOL, history, swaps)


def _check_guard(m: int, n: int) -> int:
    count = math.comb(m, n)
    if count > MAX_SUBSETS:
        raise SubsetSearchTooLargeError(
            f"C({m}, {n}) = {count} subsets exceeds the limit of {MAX_SUBSETS}"
        )
    return count


def iter_subset_chunks(m: int, n: int, chunk: int = _CHUNK):
    """All n-subsets of range(m) in lexicographic order, as int arrays of shape (<=chunk, n)."""
    it = itertools.combinations(range(m), n)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=int)


def subset_scores(v: np.ndarray, criterion: str) -> tuple[np.ndarray, np.ndarray]:
    """Score every n-row subset of v by |det| ('volume') or sigma_min ('sigma_min')."""
    m, n = v.shape
    _check_guard(m, n)
    subsets, scores = [], []
    for block in iter_subset_chunks(m, n):
        stack = v[block]
        if criterion == "volume":
            s = np.abs(det_batch(stack))
        else:
            s = singular_values_batch(stack)[:, -1]
        subsets.append(block)
        scores.append(s)
    return np.concatenate(subsets), np.concatenate(scores)


def _exhaustive(v, criterion: str, method: Method) -> SelectedBasis:
    v = as_matrix(v)
    m, n = v.shape
    if m < n:
        raise ValueError(f"need at least as many rows as columns, got {m} x {n}")
    subsets, scores = subset_scores(v, criterion)
    # argmax keeps the first (lexicographically smallest) of tied subsets
    best = int(np.argmax(scores))
    return _finish(v, subsets[best], method)


def exhaustive_maxvol(v) -> SelectedBasis:
    """Global maximizer of |det| over all n-row subsets."""
    return _exhaustive(v, "volume", Method.MAXVOL_EXHAUSTIVE)


def exhaustive_maxminsv(v) -> SelectedBasis:
    """Global maximizer of the smallest singular value over all n-row subsets."""
    return _exhaustive(v, "sigma_min", Method.MAXMINSV)


def select_rows(v, method: Method | str, tol: float = DEFAULT_TOL) -> SelectedBasis:
    method = Method(method)
    if method is Method.MAXVOL:
        return maxvol_rows(v, tol)
    if method is Method.MAXVOL_EXHAUSTIVE:
        return exhaustive_maxvol(v)
    return exhaustive_maxminsv(v)
