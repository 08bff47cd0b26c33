"""Multi-indices and tensor-product polynomial bases (monomial and Chebyshev)."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MultiIndex = tuple[int, ...]


class Family(enum.Enum):
    MONOMIAL = "monomial"
    CHEBYSHEV = "chebyshev"


def total_degree_indices(d: int, k: int) -> list[MultiIndex]:
    """All multi-indices of total degree at most `k` in `d` variables.

    Ordered by total degree, and lexicographically descending inside each
    degree, so that for d=2 the monomials read 1, x1, x2, x1^2, x1 x2, x2^2, ...
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    out: list[MultiIndex] = []
    for total in range(k + 1):
        out.extend(indices_of_degree(d, total))
    return out


def indices_of_degree(d: int, total: int) -> list[MultiIndex]:
    """Multi-indices with |alpha| == total, lexicographically descending."""
    if d == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in indices_of_degree(d - 1, total - first):
            out.append((first,) + rest)
    return out


def chebyshev_eval(k: int, x):
    """T_k(x) by the three-term recursion; works on scalars and arrays."""
    if k < 0:
        raise ValueError("Chebyshev degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = x.copy()
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur if cur.ndim else float(cur)


def _univariate(family: Family, k: int, x: np.ndarray) -> np.ndarray:
    if family is Family.MONOMIAL:
        return x**k
    return chebyshev_eval(k, x)


@dataclass(frozen=True)
class BasisFunction:
    family: Family
    index: MultiIndex

    def __post_init__(self):
        if len(self.index) < 1:
            raise ValueError("multi-index must have at least one component")
        if any(int(a) != a or a < 0 for a in self.index):
            raise ValueError(f"invalid multi-index {self.index}")
        object.__setattr__(self, "index", tuple(int(a) for a in self.index))

    @property
    def dimension(self) -> int:
        return len(self.index)

    @property
    def degree(self) -> int:
        return sum(self.index)

    def __call__(self, point) -> float:
        return basis_eval(self, point)

    def evaluate(self, points) -> np.ndarray:
        """Values at an (N, d) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dimension:
            raise ValueError(
                f"points have dimension {pts.shape[1]}, basis function has {self.dimension}"
            )
        out = np.ones(pts.shape[0])
        for axis, a in enumerate(self.index):
            if a:
                out = out * _univariate(self.family, a, pts[:, axis])
        return out

    def describe(self) -> str:
        return f"{self.family.value}{self.index}".replace(" ", "")


def monomial(*index: int) -> BasisFunction:
    return BasisFunction(Family.MONOMIAL, tuple(index))


def chebyshev(*index: int) -> BasisFunction:
    return BasisFunction(Family.CHEBYSHEV, tuple(index))


def basis_eval(phi: BasisFunction, point) -> float:
    point = np.asarray(point, dtype=float).ravel()
    if point.shape[0] != phi.dimension:
        raise ValueError(
            f"point has dimension {point.shape[0]}, basis function has {phi.dimension}"
        )
    value = 1.0
    for a, x in zip(phi.index, point):
        if a:
            value *= float(_univariate(phi.family, a, x))
    return value


class BasisSequence(Sequence[BasisFunction]):
    """Ordered, duplicate-free sequence of basis functions of a common dimension."""

    def __init__(self, functions: Iterable[BasisFunction], dimension: int | None = None):
        functions = tuple(functions)
        if dimension is None:
            if not functions:
                raise ValueError("dimension is required for an empty basis")
            dimension = functions[0].dimension
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        for phi in functions:
            if phi.dimension != dimension:
                raise ValueError(
                    f"basis function {phi.describe()} does not have dimension {dimension}"
                )
        if len(set(functions)) != len(functions):
            raise ValueError("basis sequence contains duplicate functions")
        self._functions = functions
        self.dimension = dimension

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BasisSequence(self._functions[item], self.dimension)
        return self._functions[item]

    def __len__(self) -> int:
        return len(self._functions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasisSequence):
            return NotImplemented
        return self.dimension == other.dimension and self._functions == other._functions

    def __hash__(self):
        return hash((self.dimension, self._functions))

    def __repr__(self) -> str:
        names = ", ".join(phi.describe() for phi in self._functions[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"BasisSequence(d={self.dimension}, [{names}{more}])"

    def select(self, rows: Iterable[int]) -> "BasisSequence":
        return BasisSequence([self._functions[i] for i in rows], self.dimension)

    def extend(self, phi: BasisFunction) -> "BasisSequence":
        return BasisSequence(self._functions + (phi,), self.dimension)

    def evaluate(self, points) -> np.ndarray:
        """Matrix of shape (len(self), N) with entry (i, j) = phi_i(points[j])."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dimension:
            raise ValueError(
                f"points have dimension {pts.shape[1]}, basis has {self.dimension}"
            )
        if not self._functions:
            return np.zeros((0, pts.shape[0]))
        # Univariate factors are shared across the sequence; tabulate them once.
        cache: dict[tuple[Family, int, int], np.ndarray] = {}
        out = np.ones((len(self), pts.shape[0]))
        for i, phi in enumerate(self._functions):
            for axis, a in enumerate(phi.index):
                if a:
                    key = (phi.family, axis, a)
                    if key not in cache:
                        cache[key] = _univariate(phi.family, a, pts[:, axis])
                    out[i] *= cache[key]
        return out


def basis_eval_vector(basis: BasisSequence, point) -> np.ndarray:
    point = np.asarray(point, dtype=float).ravel()
    if point.shape[0] != basis.dimension:
        raise ValueError(
            f"point has dimension {point.shape[0]}, basis has {basis.dimension}"
        )
    return basis.evaluate(point[None, :])[:, 0]


def monomial_basis(d: int, degree: int) -> BasisSequence:
    return BasisSequence([monomial(*a) for a in total_degree_indices(d, degree)], d)


def chebyshev_basis(d: int, degree: int) -> BasisSequence:
    return BasisSequence([chebyshev(*a) for a in total_degree_indices(d, degree)], d)


def tensor_indices(ranges: Sequence[range]) -> list[MultiIndex]:
    """Row-major product of per-axis ranges (last axis fastest)."""
    return [tuple(t) for t in itertools.product(*ranges)]
