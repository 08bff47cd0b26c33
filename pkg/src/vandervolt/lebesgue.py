"""Discrete Lebesgue constants and the analytic upper bounds that tie them to
the smallest singular value and the volume of the Vandermonde matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .interpolant import CardinalSet
from .linalg import singular_values
from .mesh import ConvexHullMesh
from .selection import near_singular


@dataclass(frozen=True)
class LebesgueReport:
    lambda_discrete: float
    argmax_vertex: np.ndarray
    bound_sv: float = math.nan
    bound_det: float = math.nan
    constants: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "lambda_discrete": self.lambda_discrete,
            "argmax_vertex": [float(x) for x in self.argmax_vertex],
            "bound_sv": self.bound_sv,
            "bound_det": self.bound_det,
        }
        out.update({k: v if isinstance(v, int) else float(v) for k, v in self.constants.items()})
        return out


def lebesgue_function(card: CardinalSet, points) -> np.ndarray:
    """sum_i |l_i(y)| at each of the given points."""
    return np.sum(np.abs(card.evaluate(points)), axis=0)


def lebesgue_discrete(card: CardinalSet, mesh: ConvexHullMesh) -> LebesgueReport:
    values = lebesgue_function(card, mesh.vertices)
    j = int(np.argmax(values))  # ties: lowest vertex index
    return LebesgueReport(float(values[j]), mesh.vertices[j].copy())


def basis_norm_constant(card: CardinalSet, mesh: ConvexHullMesh) -> float:
    """max over mesh vertices of (sum_i phi_i(y)^2)^(1/2)."""
    phi = card.basis.evaluate(mesh.vertices)
    return float(np.sqrt(np.max(np.sum(phi**2, axis=0))))


def bound_sv(card: CardinalSet, mesh: ConvexHullMesh) -> float:
    """C n / sigma_min(V)."""
    spectrum = singular_values(card.vandermonde)
    if near_singular(0.0, spectrum.sigma_min, spectrum.sigma_max):
        return math.inf
    return basis_norm_constant(card, mesh) * len(card) / spectrum.sigma_min


def hong_pan_constant(v: np.ndarray) -> float:
    """The constant D: inverse of the larger of the column- and row-norm ratios
    min_i ||v_i|| / prod_i ||v_i||."""
    v = np.asarray(v, dtype=float)
    # sums of squares over each node (column) and each basis function (row)
    per_node = np.sum(v**2, axis=0)
    per_function = np.sum(v**2, axis=1)
    if np.any(per_node == 0.0) or np.any(per_function == 0.0):
        return math.inf
    ratios = []
    for sums in (per_node, per_function):
        # min / prod in log space; the product under- or overflows for large n
        log_ratio = math.log(sums.min()) - float(np.sum(np.log(sums)))
        ratios.append(math.exp(0.5 * log_ratio))
    return 1.0 / max(ratios)


def bound_det(card: CardinalSet, mesh: ConvexHullMesh) -> float:
    """C D sqrt(e) n / |det V|."""
    det = abs(card.det)
    if det == 0.0:
        return math.inf
    d_const = hong_pan_constant(card.vandermonde)
    return basis_norm_constant(card, mesh) * d_const * math.sqrt(math.e) * len(card) / det


def lebesgue_report(card: CardinalSet, mesh: ConvexHullMesh) -> LebesgueReport:
    base = lebesgue_discrete(card, mesh)
    spectrum = singular_values(card.vandermonde)
    constants = {
        "C": basis_norm_constant(card, mesh),
        "D": hong_pan_constant(card.vandermonde),
        "n": len(card),
        "sigma_min": spectrum.sigma_min,
        "abs_det": abs(card.det),
    }
    return LebesgueReport(
        base.lambda_discrete,
        base.argmax_vertex,
        bound_sv(card, mesh),
        bound_det(card, mesh),
        constants,
    )


def bound_incremental(lambda_n: float, new_cardinal_sup: float) -> float:
    """Upper bound on the Lebesgue constant after adding one node inside the hull."""
    return lambda_n + new_cardinal_sup * (1.0 + lambda_n)


def new_cardinal_sup_bound(det_n: float, det_n1: float, phi_sup: float, lambda_n: float) -> float:
    """Upper bound on sup_K |l_{n+1}| from the ratio of Vandermonde determinants."""
    if det_n1 == 0.0:
        return math.inf
    return abs(det_n / det_n1) * phi_sup * (1.0 + lambda_n)


@dataclass(frozen=True)
class IncrementalCheck:
    lambda_n: float
    lambda_n1: float
    new_cardinal_sup: float
    bound: float
    sup_bound: float
    inside_hull: bool

    @property
    def holds(self) -> bool:
        return self.lambda_n1 <= self.bound


def incremental_check(
    old: CardinalSet, new: CardinalSet, mesh: ConvexHullMesh, inside_hull: bool = True
) -> IncrementalCheck:
    """Compare the recomputed Lebesgue constant of `new` (old plus one node)
    with the incremental bound, all sampled on the old hull's mesh.

    The new node is added to the sample set so that sum_i |l_i(x_{n+1})| is
    covered by the sampled Lebesgue constant of the old system.
    """
    new_node = new.nodes.points[-1]
    samples = np.vstack([mesh.vertices, new_node])
    lam_n = float(np.max(lebesgue_function(old, samples)))
    new_vals = new.evaluate(samples)
    lam_n1 = float(np.max(np.sum(np.abs(new_vals), axis=0)))
    sup_last = float(np.max(np.abs(new_vals[-1])))
    phi_sup = float(np.max(np.abs(new.basis[-1].evaluate(samples))))
    return IncrementalCheck(
        lam_n,
        lam_n1,
        sup_last,
        bound_incremental(lam_n, sup_last),
        new_cardinal_sup_bound(old.det, new.det, phi_sup, lam_n),
        inside_hull,
    )
