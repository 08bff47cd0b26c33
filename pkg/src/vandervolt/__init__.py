"""Maximum-volume polynomial basis selection for multivariate Lagrange
interpolation, with Lebesgue-constant estimates and bounds."""

from .basis import (
    BasisFunction,
    BasisSequence,
    Family,
    basis_eval,
    basis_eval_vector,
    chebyshev,
    chebyshev_basis,
    chebyshev_eval,
    monomial,
    monomial_basis,
    total_degree_indices,
)
from .interpolant import (
    CardinalSet,
    Interpolant,
    add_node,
    cardinal_functions,
    evaluate,
    fit,
    schur_border_det,
)
from .lebesgue import (
    LebesgueReport,
    bound_det,
    bound_incremental,
    bound_sv,
    lebesgue_discrete,
    lebesgue_report,
)
from .linalg import SingularMatrixError, determinant, inverse, lu_factor, singular_values, solve
from .mesh import ConvexHullMesh, convex_hull_mesh, cube_mesh
from .selection import (
    Method,
    SelectedBasis,
    exhaustive_maxminsv,
    exhaustive_maxvol,
    maxvol_rows,
    near_singular,
)
from .sparse_grid import (
    cc_nodes,
    incomplete_grid,
    incomplete_sequence,
    level_order,
    smolyak_basis,
    smolyak_grid,
)
from .vandermonde import NodeSet, build_generalized, build_square, newton_factorize

__version__ = "0.1.0"
