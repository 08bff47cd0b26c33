"""Generalized and square Vandermonde matrices, and the Newton form obtained
from an LU factorization of the transposed Vandermonde matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .basis import BasisSequence
from .linalg import LUFactorization, SingularMatrixError, lu_factor

DISTINCT_TOL = 1e-14


class InvalidNodeSetError(ValueError):
    pass


class InsufficientTrialBasisError(ValueError):
    pass


class NodeSet:
    """Ordered set of mutually distinct points in R^d, stored as an (n, d) array."""

    def __init__(self, points, dimension: int | None = None, check: bool = True):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            # 1-D input is a list of scalars unless the dimension says otherwise
            pts = pts.reshape(-1, 1) if dimension in (None, 1) else pts.reshape(1, -1)
        if pts.ndim != 2:
            raise InvalidNodeSetError(f"expected an (n, d) array of points, got shape {pts.shape}")
        if dimension is not None and pts.shape[0] and pts.shape[1] != dimension:
            raise InvalidNodeSetError(f"points have dimension {pts.shape[1]}, expected {dimension}")
        if not np.all(np.isfinite(pts)):
            raise InvalidNodeSetError("node coordinates must be finite")
        if check and len(pts) > 1:
            dist = np.max(np.abs(pts[:, None, :] - pts[None, :, :]), axis=2)
            np.fill_diagonal(dist, np.inf)
            i, j = np.unravel_index(np.argmin(dist), dist.shape)
            if dist[i, j] <= DISTINCT_TOL:
                raise InvalidNodeSetError(f"nodes {min(i, j) + 1} and {max(i, j) + 1} coincide")
        self.points = pts
        self.points.setflags(write=False)
        self.dimension = pts.shape[1] if dimension is None else dimension

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        return f"NodeSet(n={len(self)}, d={self.dimension})"

    def take(self, order) -> "NodeSet":
        return NodeSet(self.points[np.asarray(order, dtype=int)], self.dimension, check=False)

    def append(self, point) -> "NodeSet":
        return NodeSet(np.vstack([self.points, np.asarray(point, dtype=float)[None, :]]), self.dimension)


def as_nodes(nodes) -> NodeSet:
    return nodes if isinstance(nodes, NodeSet) else NodeSet(nodes)


def build_generalized(trial: BasisSequence, nodes) -> np.ndarray:
    """m x n matrix with entry (i, j) = phi_i(x_j), for m >= n."""
    nodes = as_nodes(nodes)
    if trial.dimension != nodes.dimension:
        raise ValueError(f"basis dimension {trial.dimension} != node dimension {nodes.dimension}")
    if len(nodes) < 1:
        raise InvalidNodeSetError("at least one node is required")
    if len(trial) < len(nodes):
        raise InsufficientTrialBasisError(
            f"trial basis has {len(trial)} functions but there are {len(nodes)} nodes"
        )
    return trial.evaluate(nodes.points)


def build_square(basis: BasisSequence, nodes) -> np.ndarray:
    nodes = as_nodes(nodes)
    if len(basis) != len(nodes):
        raise ValueError(f"basis has {len(basis)} functions but there are {len(nodes)} nodes")
    return build_generalized(basis, nodes)


@dataclass(frozen=True)
class NewtonForm:
    """LU of the transposed Vandermonde matrix, ``P V^T = L U``.

    ``upper.T`` maps Newton functions to the original basis,
    phi(x) = U^T p(x), and the Newton functions satisfy
    p_i(reordered_nodes[j]) = delta_ij for j <= i.
    """

    basis: BasisSequence
    nodes: NodeSet
    reordered_nodes: NodeSet
    factorization: LUFactorization

    @property
    def permutation(self) -> np.ndarray:
        return self.factorization.permutation

    @property
    def lower_factor(self) -> np.ndarray:
        return self.factorization.lower

    @property
    def change_of_basis(self) -> np.ndarray:
        return self.factorization.upper.T

    def solve(self, values) -> np.ndarray:
        """Coefficients c of V^T c = f via L t = P f, U c = t."""
        f = np.asarray(values, dtype=float)
        if f.shape[0] != len(self.nodes):
            raise ValueError(f"expected {len(self.nodes)} data values, got {f.shape[0]}")
        return self.factorization.solve(f)

    def evaluate(self, points) -> np.ndarray:
        """Newton functions at an (N, d) array of points, shape (n, N)."""
        phi = self.basis.evaluate(points)
        return solve_triangular(self.factorization.upper, phi, trans="T", lower=False)


def newton_factorize(basis: BasisSequence, nodes) -> NewtonForm:
    nodes = as_nodes(nodes)
    v = build_square(basis, nodes)
    try:
        lu = lu_factor(v.T)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "Vandermonde matrix is singular") from exc
    return NewtonForm(basis, nodes, nodes.take(lu.permutation), lu)
