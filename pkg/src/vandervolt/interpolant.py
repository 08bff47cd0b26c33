"""Lagrange interpolants, cardinal functions and single-node updates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisFunction, BasisSequence
from .linalg import SingularMatrixError, determinant, inverse
from .vandermonde import NodeSet, as_nodes, build_square, newton_factorize

DENOMINATOR_RTOL = 1e-12


class EnlargedSystemSingularError(SingularMatrixError):
    def __init__(self, message: str):
        super().__init__(-1, message)


def _points(basis: BasisSequence, point) -> tuple[np.ndarray, bool]:
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != basis.dimension:
        raise ValueError(f"point dimension {pts.shape[1]} != basis dimension {basis.dimension}")
    return pts, single


@dataclass(frozen=True)
class Interpolant:
    basis: BasisSequence
    nodes: NodeSet
    coefficients: np.ndarray

    def __call__(self, point):
        return evaluate(self, point)


def fit(basis: BasisSequence, nodes, values) -> Interpolant:
    """Solve V^T c = f through the Newton (LU) form."""
    nodes = as_nodes(nodes)
    newton = newton_factorize(basis, nodes)
    return Interpolant(basis, nodes, newton.solve(values))


def evaluate(p: Interpolant, point):
    """sum_i c_i phi_i(x) at one point (returns float) or at an (N, d) array."""
    pts, single = _points(p.basis, point)
    values = p.coefficients @ p.basis.evaluate(pts)
    return float(values[0]) if single else values


@dataclass(frozen=True)
class CardinalSet:
    """Cardinal functions l_i(x) = sum_j w_ij phi_j(x) with W = V^{-1}."""

    basis: BasisSequence
    nodes: NodeSet
    weights: np.ndarray
    vandermonde: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def evaluate(self, points) -> np.ndarray:
        """Matrix of l_i(y_j), shape (n, N)."""
        pts, _ = _points(self.basis, points)
        return self.weights @ self.basis.evaluate(pts)

    def __call__(self, point) -> np.ndarray:
        """Vector [l_1(x), ..., l_n(x)] at a single point."""
        return self.evaluate(np.asarray(point, dtype=float)[None, :])[:, 0]

    @property
    def det(self) -> float:
        return determinant(self.vandermonde)


def cardinal_functions(basis: BasisSequence, nodes) -> CardinalSet:
    nodes = as_nodes(nodes)
    v = build_square(basis, nodes)
    try:
        w = inverse(v)
    except SingularMatrixError as exc:
        raise SingularMatrixError(exc.column, "Vandermonde matrix is singular") from exc
    return CardinalSet(basis, nodes, w, v)


def add_node(card: CardinalSet, new_node, new_phi: BasisFunction) -> CardinalSet:
    """Cardinal functions after appending one node and one basis function.

    The new cardinal function is
        l_{n+1}(x) = (phi_{n+1}(x) - sum_i l_i(x) phi_{n+1}(x_i)) / s,
    with s the same expression at x_{n+1}, and the old ones become
        l_i(x) - l_{n+1}(x) l_i(x_{n+1}).
    """
    new_node = np.asarray(new_node, dtype=float).ravel()
    nodes = card.nodes.append(new_node)
    basis = card.basis.extend(new_phi)
    n = len(card)

    g = new_phi.evaluate(card.nodes.points)  # phi_{n+1}(x_i)
    h = card(new_node)  # l_i(x_{n+1})
    phi_new_at_new = new_phi(new_node)
    s = phi_new_at_new - h @ g
    scale = max(1.0, np.max(np.abs(g)), abs(phi_new_at_new))
    if abs(s) <= DENOMINATOR_RTOL * scale:
        raise EnlargedSystemSingularError(
            "enlarged Vandermonde matrix is singular: the new basis function is "
            "dependent on the existing basis at the nodes"
        )

    last = np.zeros(n + 1)
    last[:n] = -(g @ card.weights)
    last[n] = 1.0
    last /= s
    w = np.zeros((n + 1, n + 1))
    w[:n, :n] = card.weights
    w[:n] -= np.outer(h, last)
    w[n] = last

    v = np.zeros((n + 1, n + 1))
    v[:n, :n] = card.vandermonde
    v[:n, n] = card.basis.evaluate(new_node[None, :])[:, 0]
    v[n, :n] = g
    v[n, n] = phi_new_at_new
    return CardinalSet(basis, nodes, w, v)


def schur_border_det(card: CardinalSet, new_node_values, new_phi_at: float, old_basis_at) -> float:
    """Determinant of V_n bordered by [phi(x); phi_{n+1}(x_i)] and phi_{n+1}(x).

    Evaluated through the Schur complement as
    det V_n * (phi_{n+1}(x) - sum_i l_i(x) phi_{n+1}(x_i)).
    """
    g = np.asarray(new_node_values, dtype=float)
    cardinal_at = card.weights @ np.asarray(old_basis_at, dtype=float)
    return card.det * (float(new_phi_at) - float(cardinal_at @ g))
