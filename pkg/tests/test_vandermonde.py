import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandervolt.basis import BasisSequence, chebyshev, monomial, monomial_basis
from vandervolt.linalg import SingularMatrixError, determinant, solve
from vandervolt.sparse_grid import smolyak_basis, smolyak_grid
from vandervolt.vandermonde import (
    InsufficientTrialBasisError,
    InvalidNodeSetError,
    NodeSet,
    build_generalized,
    build_square,
    newton_factorize,
)

LINEAR_1D = BasisSequence([monomial(0), monomial(1)])
QUADRATIC_1D = BasisSequence([monomial(0), monomial(1), monomial(2)])


def test_nodeset_rejects_duplicates():
    with pytest.raises(InvalidNodeSetError):
        NodeSet([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
    NodeSet([[0.0, 0.0], [1e-13, 0.0]])  # distinct above threshold


def test_nodeset_is_read_only():
    nodes = NodeSet([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        nodes.points[0, 0] = 5.0


def test_nodeset_dimension_mismatch():
    with pytest.raises(InvalidNodeSetError):
        NodeSet([[0.0, 1.0]], dimension=3)


def test_generalized_examples(rng):
    np.testing.assert_array_equal(build_generalized(LINEAR_1D, [0.0, 1.0]), [[1, 1], [0, 1]])
    v = build_generalized(monomial_basis(2, 2), rng.uniform(0, 1, (4, 2)))
    assert v.shape == (6, 4)
    np.testing.assert_array_equal(v[0], 1.0)


def test_generalized_sparse_grid_nonsingular():
    grid = smolyak_grid(2, 2)
    v = build_generalized(grid.basis, grid.nodes)
    assert v.shape == (13, 13)
    assert determinant(v) != 0.0


def test_generalized_errors():
    with pytest.raises(InsufficientTrialBasisError):
        build_generalized(LINEAR_1D, [0.0, 0.5, 1.0])
    with pytest.raises(InvalidNodeSetError):
        build_generalized(QUADRATIC_1D, [[0.0], [0.0]])


def test_square_examples():
    v = build_square(LINEAR_1D, [0.0, 1.0])
    assert determinant(v) == pytest.approx(1.0)
    assert determinant(build_square(QUADRATIC_1D, [-1.0, 0.0, 1.0])) == pytest.approx(2.0)
    v = build_square(BasisSequence([monomial(0, 0), monomial(1, 0)]), [[0, 0], [0, 1]])
    np.testing.assert_array_equal(v, [[1, 1], [0, 0]])
    assert determinant(v) == 0.0


def test_square_size_mismatch():
    with pytest.raises(ValueError):
        build_square(QUADRATIC_1D, [0.0, 1.0])


def test_row_restriction_equals_sub_basis(rng):
    trial = monomial_basis(2, 3)
    nodes = NodeSet(rng.uniform(0, 1, (5, 2)))
    v = build_generalized(trial, nodes)
    rows = [0, 2, 3, 7, 9]
    np.testing.assert_array_equal(v[rows], build_square(trial.select(rows), nodes))


def test_newton_univariate_linear():
    newton = newton_factorize(LINEAR_1D, [0.0, 1.0])
    p = newton.evaluate(newton.reordered_nodes.points)
    assert p[0, 0] == pytest.approx(1.0) and p[0, 1] == pytest.approx(1.0)
    assert p[1, 0] == pytest.approx(0.0, abs=1e-15)
    assert p[1, 1] == pytest.approx(1.0)


def test_newton_sparse_grid_triangular():
    grid = smolyak_grid(2, 2)
    newton = newton_factorize(grid.basis, grid.nodes)
    p = newton.evaluate(newton.reordered_nodes.points)  # p[i, j] = p_i(x~_j)
    # p_i vanishes at the first i - 1 reordered nodes and is 1 at the i-th
    assert np.max(np.abs(np.tril(p, -1))) <= 1e-10
    np.testing.assert_allclose(np.diag(p), 1.0, atol=1e-10)


def test_newton_solve_matches_direct(rng):
    basis = monomial_basis(2, 2)
    nodes = rng.uniform(-1, 1, (6, 2))
    f = rng.uniform(-1, 1, 6)
    c = newton_factorize(basis, nodes).solve(f)
    direct = solve(build_square(basis, nodes).T, f)
    np.testing.assert_allclose(c, direct, atol=1e-8)


def test_newton_singular_raises():
    basis = BasisSequence([monomial(0, 0), monomial(1, 0)])
    with pytest.raises(SingularMatrixError):
        newton_factorize(basis, [[0.0, 0.0], [0.0, 1.0]])


def test_newton_change_of_basis_is_upper_transpose(rng):
    newton = newton_factorize(monomial_basis(2, 1), rng.uniform(0, 1, (3, 2)))
    cob = newton.change_of_basis
    np.testing.assert_array_equal(cob, np.tril(cob))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), degree=st.integers(1, 3))
def test_newton_equals_lagrange(seed, degree):
    rng = np.random.default_rng(seed)
    basis = BasisSequence([chebyshev(*a) for a in [phi.index for phi in monomial_basis(2, degree)]])
    nodes = rng.uniform(-1, 1, (len(basis), 2))
    v = build_square(basis, nodes)
    if np.linalg.cond(v) > 1e8:
        return
    f = rng.uniform(-1, 1, len(basis))
    newton = newton_factorize(basis, nodes)
    pts = rng.uniform(-1, 1, (100, 2))
    # Newton path: f expressed in Newton functions, a = L^{-1} P f
    a = np.linalg.solve(newton.lower_factor, f[newton.permutation])
    newton_vals = a @ newton.evaluate(pts)
    lagrange_vals = f @ np.linalg.solve(v, basis.evaluate(pts))
    np.testing.assert_allclose(newton_vals, lagrange_vals, atol=1e-8)
    p = newton.evaluate(newton.reordered_nodes.points)
    np.testing.assert_allclose(p, newton.lower_factor.T, atol=1e-10)


def test_sparse_basis_table_row_count():
    assert len(smolyak_basis(3, 3)) == 69
