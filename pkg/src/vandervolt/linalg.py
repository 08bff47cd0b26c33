"""Dense linear algebra kernels: partial-pivoting LU, solves, inverses and
one-sided Jacobi singular values.

Every kernel works on a stack of matrices (leading batch axis) so that
exhaustive subset searches can factor thousands of small systems at once;
the single-matrix functions are thin wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when elimination meets an exactly zero pivot column."""

    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"matrix is singular (zero pivot in column {column})")


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _as_square(a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


# ---------------------------------------------------------------------------
# LU


def lu_factor_batch(a: np.ndarray):
    """Row-pivoted LU of a stack of square matrices.

    Parameters
    ----------
    a : ndarray, shape (S, n, n)

    Returns
    -------
    lu : ndarray, shape (S, n, n)
        Packed factors: strict lower part holds L (unit diagonal implied),
        upper part holds U.
    perm : ndarray of int, shape (S, n)
        Row permutation with ``a[s][perm[s]] == L @ U``.
    sign : ndarray, shape (S,)
        Parity of the permutation.
    singular_col : ndarray of int, shape (S,)
        First column with an exactly zero pivot, or -1.
    """
    lu = np.array(a, dtype=float, copy=True)
    S, n, _ = lu.shape
    perm = np.tile(np.arange(n), (S, 1))
    sign = np.ones(S)
    singular_col = np.full(S, -1)
    rows = np.arange(S)
    for k in range(n):
        # argmax returns the first maximum: ties go to the smallest row index
        p = k + np.argmax(np.abs(lu[:, k:, k]), axis=1)
        swap = p != k
        if np.any(swap):
            r = rows[swap]
            pk = p[swap]
            tmp = lu[r, k, :].copy()
            lu[r, k, :] = lu[r, pk, :]
            lu[r, pk, :] = tmp
            tmp = perm[r, k].copy()
            perm[r, k] = perm[r, pk]
            perm[r, pk] = tmp
            sign[swap] = -sign[swap]
        pivot = lu[:, k, k]
        zero = pivot == 0.0
        if np.any(zero):
            fresh = zero & (singular_col < 0)
            singular_col[fresh] = k
        if k + 1 < n:
            safe = np.where(zero, 1.0, pivot)
            mult = lu[:, k + 1 :, k] / safe[:, None]
            mult[zero] = 0.0
            lu[:, k + 1 :, k] = mult
            lu[:, k + 1 :, k + 1 :] -= mult[:, :, None] * lu[:, k, None, k + 1 :]
    return lu, perm, sign, singular_col


def det_batch(a: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square matrices; exactly singular ones give 0."""
    lu, _, sign, singular_col = lu_factor_batch(a)
    det = sign * np.prod(np.diagonal(lu, axis1=1, axis2=2), axis=1)
    det[singular_col >= 0] = 0.0
    return det


def lu_solve_batch(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``A X = B`` for each factored A in the stack; b has shape (S, n, k)."""
    S, n, _ = lu.shape
    x = np.take_along_axis(b, perm[:, :, None], axis=1).astype(float, copy=True)
    for i in range(1, n):
        x[:, i, :] -= np.einsum("sj,sjk->sk", lu[:, i, :i], x[:, :i, :])
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[:, i, :] -= np.einsum("sj,sjk->sk", lu[:, i, i + 1 :], x[:, i + 1 :, :])
        x[:, i, :] /= lu[:, i, i][:, None]
    return x


@dataclass(frozen=True)
class LUFactorization:
    permutation: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    sign: float

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    @property
    def packed(self) -> np.ndarray:
        return np.tril(self.lower, -1) + self.upper

    def determinant(self) -> float:
        return float(self.sign * np.prod(np.diag(self.upper)))

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        vector = b.ndim == 1
        if b.shape[0] != self.n:
            raise ValueError(f"right-hand side has length {b.shape[0]}, expected {self.n}")
        rhs = b[:, None] if vector else b
        x = lu_solve_batch(self.packed[None], self.permutation[None], rhs[None])[0]
        return x[:, 0] if vector else x

    def permutation_matrix(self) -> np.ndarray:
        """P with ``P @ A == L @ U``."""
        return np.eye(self.n)[self.permutation]


def lu_factor(a) -> LUFactorization:
    a = _as_square(a)
    lu, perm, sign, singular_col = lu_factor_batch(a[None])
    if singular_col[0] >= 0:
        raise SingularMatrixError(int(singular_col[0]))
    packed = lu[0]
    n = a.shape[0]
    lower = np.tril(packed, -1) + np.eye(n)
    upper = np.triu(packed)
    return LUFactorization(perm[0], lower, upper, float(sign[0]))


def determinant(a) -> float:
    try:
        return lu_factor(a).determinant()
    except SingularMatrixError:
        return 0.0


def solve(a, b) -> np.ndarray:
    return lu_factor(a).solve(b)


def inverse(a) -> np.ndarray:
    a = _as_square(a)
    return lu_factor(a).solve(np.eye(a.shape[0]))


# ---------------------------------------------------------------------------
# Singular values


def singular_values_batch(a: np.ndarray) -> np.ndarray:
    """Singular values (descending) of a stack of matrices, shape (S, min(m, n)).

    One-sided Jacobi: rotate column pairs until every pair is numerically
    orthogonal, then read the singular values off the column norms.
    """
    a = np.array(a, dtype=float, copy=True)
    if a.shape[1] < a.shape[2]:
        a = np.swapaxes(a, 1, 2).copy()
    S, _, n = a.shape
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    active = np.ones(S, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        if not pairs or not np.any(active):
            break
        idx = np.flatnonzero(active)
        w = a[idx]
        rotated = np.zeros(len(idx), dtype=bool)
        for p, q in pairs:
            ap = w[:, :, p]
            aq = w[:, :, q]
            alpha = np.einsum("si,si->s", ap, ap)
            beta = np.einsum("si,si->s", aq, aq)
            gamma = np.einsum("si,si->s", ap, aq)
            need = np.abs(gamma) > JACOBI_TOL * np.sqrt(alpha * beta)
            if not np.any(need):
                continue
            rotated |= need
            g = np.where(need, gamma, 1.0)
            with np.errstate(over="ignore", invalid="ignore"):
                # a huge zeta means an almost-zero rotation (t -> 0)
                zeta = (beta - alpha) / (2.0 * g)
                t = np.sign(zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
            t = np.nan_to_num(t, nan=0.0)
            t[zeta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            c = np.where(need, c, 1.0)
            s = np.where(need, s, 0.0)
            new_p = c[:, None] * ap - s[:, None] * aq
            new_q = s[:, None] * ap + c[:, None] * aq
            w[:, :, p] = new_p
            w[:, :, q] = new_q
        a[idx] = w
        active[idx[~rotated]] = False
    sv = np.sqrt(np.einsum("sij,sij->sj", a, a))
    return -np.sort(-sv, axis=1)


@dataclass(frozen=True)
class SingularSpectrum:
    values: np.ndarray

    @property
    def sigma_max(self) -> float:
        return float(self.values[0])

    @property
    def sigma_min(self) -> float:
        return float(self.values[-1])

    @property
    def spectral_norm(self) -> float:
        return self.sigma_max

    @property
    def frobenius_norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)))


def singular_values(a) -> SingularSpectrum:
    a = as_matrix(a)
    return SingularSpectrum(singular_values_batch(a[None])[0])
