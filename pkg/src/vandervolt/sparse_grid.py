"""Smolyak sparse grids on Clenshaw-Curtis abscissae and the matching sparse
Chebyshev bases, in the fixed node/basis order used for incomplete grids.

Ordering rules
--------------
* Level offsets beta (|beta| = level) are grouped by their number of nonzero
  entries, ascending, and sorted lexicographically descending in each group.
* A grid of order k is built from the tensor blocks X_{beta_1+1} x ... x
  X_{beta_d+1} of level k only, each block in row-major order with every
  axis ascending, keeping the first occurrence of each point.  Orders above
  ``BASE_ORDER`` are built by appending the points new at that order (in
  the same block order) to the grid of the previous order, so that grids
  are nested prefixes from ``BASE_ORDER`` onwards.
* The basis is accumulated level by level 0..k; each beta contributes the
  Chebyshev degrees m(beta_i) .. m(beta_i + 1) - 1 on axis i, row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisSequence, MultiIndex, chebyshev, indices_of_degree, tensor_indices
from .vandermonde import NodeSet

BASE_ORDER = 2
_KEY_SCALE = 1e12


class InvalidLevelError(ValueError):
    pass


def level_count(k: int) -> int:
    """m(k): number of Clenshaw-Curtis points at level k."""
    if k < 0:
        raise InvalidLevelError("level must be nonnegative")
    if k <= 1:
        return k
    return 2 ** (k - 1) + 1


def cc_nodes(k: int) -> np.ndarray:
    """Clenshaw-Curtis abscissae of level k >= 1, ascending."""
    if k < 1:
        raise InvalidLevelError(f"Clenshaw-Curtis level must be >= 1, got {k}")
    m = level_count(k)
    if m == 1:
        return np.zeros(1)
    x = -np.cos(np.arange(m) * np.pi / (m - 1))
    x[0], x[-1] = -1.0, 1.0
    x[(m - 1) // 2] = 0.0
    # exact antisymmetry so that nested levels produce bit-identical points
    half = m // 2
    x[m - half :] = -x[:half][::-1]
    return x


def level_order(level: int, d: int) -> list[MultiIndex]:
    if level < 0:
        raise InvalidLevelError("level must be nonnegative")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    betas = indices_of_degree(d, level)  # already lexicographically descending
    return sorted(betas, key=lambda b: sum(1 for x in b if x))  # stable sort


def _check_dimension(d: int) -> None:
    if d not in (2, 3):
        raise ValueError(f"sparse grids are provided for d in {{2, 3}}, got {d}")


def _top_level_points(d: int, k: int) -> list[tuple[float, ...]]:
    out: list[tuple[float, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for beta in level_order(k, d):
        axes = [cc_nodes(b + 1) for b in beta]
        for idx in tensor_indices([range(len(a)) for a in axes]):
            p = tuple(float(axes[i][j]) for i, j in enumerate(idx))
            key = _key(p)
            if key not in seen:
                seen.add(key)
                out.append(p)
    return out


def _key(p) -> tuple[int, ...]:
    return tuple(int(round(x * _KEY_SCALE)) for x in p)


def _grid_points(d: int, k: int) -> list[tuple[float, ...]]:
    if k <= BASE_ORDER:
        return _top_level_points(d, k)
    prev = _grid_points(d, k - 1)
    seen = {_key(p) for p in prev}
    return prev + [p for p in _top_level_points(d, k) if _key(p) not in seen]


def smolyak_nodes(d: int, k: int) -> NodeSet:
    _check_dimension(d)
    if k < 0:
        raise InvalidLevelError("order must be nonnegative")
    return NodeSet(np.array(_grid_points(d, k)), d)


def smolyak_basis(d: int, k: int) -> BasisSequence:
    _check_dimension(d)
    if k < 0:
        raise InvalidLevelError("order must be nonnegative")
    funcs = []
    for level in range(k + 1):
        for beta in level_order(level, d):
            ranges = [range(level_count(b), level_count(b + 1)) for b in beta]
            funcs.extend(chebyshev(*deg) for deg in tensor_indices(ranges))
    return BasisSequence(funcs, d)


@dataclass(frozen=True)
class SparseGridSequence:
    dimension: int
    order: int
    nodes: NodeSet
    basis: BasisSequence
    level_offsets: tuple[int, ...]  # n_j = #X_{d,j} for j = 0..order


def grid_size(d: int, k: int) -> int:
    """#X_{d,k}, counted from the tensor blocks without building the grid."""
    return len(_top_level_points(d, k))


def smolyak_grid(d: int, k: int) -> SparseGridSequence:
    _check_dimension(d)
    nodes = smolyak_nodes(d, k)
    basis = smolyak_basis(d, k)
    offsets = tuple(grid_size(d, j) for j in range(k + 1))
    return SparseGridSequence(d, k, nodes, basis, offsets)


def incomplete_sequence(d: int, k: int) -> NodeSet:
    """X_{d,k+1} minus X_{d,k}, in the order they are appended to X_{d,k}."""
    _check_dimension(d)
    base = _grid_points(d, k)
    seen = {_key(p) for p in base}
    fresh = [p for p in _top_level_points(d, k + 1) if _key(p) not in seen]
    return NodeSet(np.array(fresh).reshape(-1, d), d)


def incomplete_grid(d: int, k: int, i: int) -> NodeSet:
    """Y_{d,k,i}: X_{d,k} followed by the first i new nodes of X_{d,k+1}."""
    base = smolyak_nodes(d, k)
    extra = incomplete_sequence(d, k)
    if not 0 <= i <= len(extra):
        raise ValueError(f"i must lie in [0, {len(extra)}], got {i}")
    return NodeSet(np.vstack([base.points, extra.points[:i]]), d, check=False)


def basis_count(d: int, k: int) -> int:
    return sum(
        math.prod(level_count(b + 1) - level_count(b) for b in beta)
        for level in range(k + 1)
        for beta in level_order(level, d)
    )
