import numpy as np
import pytest
from scipy.spatial import ConvexHull, Delaunay

from vandervolt.mesh import (
    DegenerateHullError,
    UnsupportedDimensionError,
    convex_hull_mesh,
    cube_mesh,
    monotone_chain,
)

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def test_unit_square_area():
    mesh = convex_hull_mesh(SQUARE, 1e-2)
    assert mesh.total_measure == pytest.approx(1.0, abs=1e-10)
    assert len(mesh.cells) >= 100
    assert mesh.cell_measures.max() <= 1e-2


def test_cube_volume():
    mesh = cube_mesh(3, 1e-2)
    assert mesh.total_measure == pytest.approx(8.0, abs=1e-9)
    assert len(mesh.cells) >= 800
    assert mesh.cell_measures.max() <= 1e-2


def test_square_mesh_size():
    mesh = cube_mesh(2)
    assert (len(mesh.vertices), len(mesh.cells)) == (545, 1024)


def test_extreme_points_are_vertices(rng):
    pts = rng.uniform(0, 1, (5, 2))
    mesh = convex_hull_mesh(pts, 1e-2)
    for i in ConvexHull(pts).vertices:
        assert np.min(np.max(np.abs(mesh.vertices - pts[i]), axis=1)) <= 1e-12


def test_vertices_lie_in_hull(rng):
    for d in (2, 3):
        pts = rng.uniform(0, 1, (8, d))
        mesh = convex_hull_mesh(pts, 1e-2)
        tri = Delaunay(pts)
        # tiny outward nudge toward the centroid absorbs boundary round-off
        c = pts.mean(axis=0)
        inside = tri.find_simplex(mesh.vertices + 1e-9 * (c - mesh.vertices)) >= 0
        assert inside.all()
        assert mesh.total_measure == pytest.approx(ConvexHull(pts).volume, rel=1e-10)


def test_cells_reference_valid_vertices():
    mesh = cube_mesh(3, 0.1)
    assert mesh.cells.shape[1] == 4
    assert mesh.cells.min() >= 0 and mesh.cells.max() < len(mesh.vertices)
    assert np.all(mesh.cell_measures > 0)


def test_no_duplicate_vertices():
    mesh = cube_mesh(2)
    rounded = {tuple(np.round(v, 10)) for v in mesh.vertices}
    assert len(rounded) == len(mesh.vertices)


def test_refinement_keeps_vertices(rng):
    pts = rng.uniform(0, 1, (6, 2))
    coarse = convex_hull_mesh(pts, 2e-2)
    fine = convex_hull_mesh(pts, 1e-2)
    for v in coarse.vertices:
        assert np.min(np.max(np.abs(fine.vertices - v), axis=1)) <= 1e-12


def test_degenerate_and_unsupported():
    with pytest.raises(DegenerateHullError):
        convex_hull_mesh([[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]])
    with pytest.raises(DegenerateHullError):
        convex_hull_mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])
    with pytest.raises(UnsupportedDimensionError):
        convex_hull_mesh(np.eye(4))
    with pytest.raises(ValueError):
        convex_hull_mesh(SQUARE, 0.0)


def test_monotone_chain_drops_interior_and_collinear():
    pts = np.array([[0, 0], [2, 0], [1, 0], [2, 2], [0, 2], [1, 1]], dtype=float)
    hull = monotone_chain(pts)
    assert sorted(hull.tolist()) == [0, 1, 3, 4]
