"""Simplicial meshes of the convex hull of a node set (d = 2 or 3)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

DEFAULT_MAX_CELL_MEASURE = 1e-2
DEGENERATE_MEASURE = 1e-12
DEDUP_TOL = 1e-12


class DegenerateHullError(ValueError):
    pass


class UnsupportedDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class ConvexHullMesh:
    vertices: np.ndarray  # (N, d)
    cells: np.ndarray  # (M, d + 1) vertex indices
    cell_measures: np.ndarray  # (M,)

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @property
    def total_measure(self) -> float:
        return float(np.sum(self.cell_measures))


def monotone_chain(points: np.ndarray) -> np.ndarray:
    """Indices of the 2-D convex hull, counter-clockwise, collinear points dropped."""
    order = sorted(range(len(points)), key=lambda i: (points[i, 0], points[i, 1]))

    def cross(o, a, b):
        return (points[a, 0] - points[o, 0]) * (points[b, 1] - points[o, 1]) - (
            points[a, 1] - points[o, 1]
        ) * (points[b, 0] - points[o, 0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return np.array(lower[:-1] + upper[:-1], dtype=int)


def simplex_measures(vertices: np.ndarray, cells: np.ndarray) -> np.ndarray:
    d = vertices.shape[1]
    corners = vertices[cells]
    edges = corners[:, 1:, :] - corners[:, :1, :]
    return np.abs(np.linalg.det(edges)) / math.factorial(d)


def _fan(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = points.shape[1]
    if d == 2:
        ring = monotone_chain(points)
        if len(ring) < 3:
            raise DegenerateHullError("nodes are collinear; the hull has zero area")
        extreme = points[ring]
        k = len(ring)
        facets = np.array([[i, (i + 1) % k] for i in range(k)])
    else:
        try:
            hull = ConvexHull(points)
        except Exception as exc:  # qhull raises QhullError on flat input
            raise DegenerateHullError(f"cannot build a 3-D hull: {exc}") from exc
        used = np.unique(hull.simplices)
        remap = {int(v): i for i, v in enumerate(used)}
        extreme = points[used]
        facets = np.vectorize(remap.get)(hull.simplices)
    centroid = extreme.mean(axis=0)
    vertices = np.vstack([extreme, centroid])
    c = len(extreme)
    cells = np.hstack([facets, np.full((len(facets), 1), c)])
    return vertices, cells


_TET_CHILDREN = (
    # corners 0..3, edge midpoints: 4=01 5=02 6=03 7=12 8=13 9=23
    (0, 4, 5, 6),
    (4, 1, 7, 8),
    (5, 7, 2, 9),
    (6, 8, 9, 3),
    # inner octahedron split along the 5-8 diagonal
    (4, 5, 6, 8),
    (4, 5, 7, 8),
    (5, 6, 8, 9),
    (5, 7, 8, 9),
)
_TRI_CHILDREN = ((0, 3, 4), (3, 1, 5), (4, 5, 2), (3, 5, 4))


def _refine(vertices: np.ndarray, cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split every simplex at its edge midpoints (4 triangles / 8 tetrahedra)."""
    k = cells.shape[1]
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    edges = np.stack([np.sort(cells[:, [a, b]], axis=1) for a, b in pairs], axis=1)
    flat = edges.reshape(-1, 2)
    unique, inverse = np.unique(flat, axis=0, return_inverse=True)
    mid = 0.5 * (vertices[unique[:, 0]] + vertices[unique[:, 1]])
    mid_index = inverse.reshape(len(cells), len(pairs)) + len(vertices)
    local = np.hstack([cells, mid_index])
    children = _TRI_CHILDREN if k == 3 else _TET_CHILDREN
    new_cells = np.concatenate([local[:, list(ch)] for ch in children])
    return np.vstack([vertices, mid]), new_cells


def _dedup(vertices: np.ndarray, cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    key = np.round(vertices / DEDUP_TOL).astype(np.int64) if np.max(np.abs(vertices)) < 1e6 else None
    if key is None:
        return vertices, cells
    _, first, inverse = np.unique(key, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return vertices[first[order]], rank[inverse.ravel()][cells]


def convex_hull_mesh(nodes, max_cell_measure: float = DEFAULT_MAX_CELL_MEASURE) -> ConvexHullMesh:
    """Mesh conv(nodes) with simplices of measure at most `max_cell_measure`.

    The hull is fanned from the centroid of its extreme points and then
    refined uniformly at edge midpoints until every cell is small enough.
    Refinement keeps all previous vertices.
    """
    points = np.asarray(getattr(nodes, "points", nodes), dtype=float)
    if points.ndim != 2 or points.shape[1] not in (2, 3):
        raise UnsupportedDimensionError("hull meshing supports d = 2 and d = 3 only")
    if max_cell_measure <= 0:
        raise ValueError("max_cell_measure must be positive")
    vertices, cells = _fan(points)
    measures = simplex_measures(vertices, cells)
    if measures.sum() <= DEGENERATE_MEASURE:
        raise DegenerateHullError("the convex hull has (numerically) zero measure")
    while measures.max() > max_cell_measure:
        vertices, cells = _refine(vertices, cells)
        measures = simplex_measures(vertices, cells)
    vertices, cells = _dedup(vertices, cells)
    return ConvexHullMesh(vertices, cells, measures)


def cube_mesh(d: int, max_cell_measure: float = DEFAULT_MAX_CELL_MEASURE) -> ConvexHullMesh:
    """Mesh of [-1, 1]^d."""
    corners = np.array(np.meshgrid(*([[-1.0, 1.0]] * d), indexing="ij")).reshape(d, -1).T
    return convex_hull_mesh(corners, max_cell_measure)
