"""Experiment drivers: basis selection on random nodes, and Lebesgue constants
of incomplete sparse grids."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from .basis import BasisSequence, monomial_basis
from .interpolant import cardinal_functions
from .lebesgue import lebesgue_discrete
from .linalg import det_batch, lu_factor_batch, lu_solve_batch, singular_values_batch
from .mesh import DEFAULT_MAX_CELL_MEASURE, DegenerateHullError, convex_hull_mesh, cube_mesh
from .rng import trial_stream
from .selection import (
    DEFAULT_TOL,
    MaxVolConvergenceError,
    Method,
    _check_guard,
    iter_subset_chunks,
    maxvol_rows,
    near_singular,
)
from .sparse_grid import incomplete_grid, incomplete_sequence, smolyak_basis, smolyak_grid
from .vandermonde import NodeSet, build_generalized

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 1000
FULL_TRIALS = 10_000
HIST_WIDTH = 0.05
HIST_MAX = 5.0
THREADS_ENV = "VANDERVOLT_THREADS"

# trial bases of the three random-node cases: (d, monomial degree, n values)
RANDOM_NODE_CASES = {
    "i": (2, 2, (4, 5)),
    "ii": (2, 3, (7, 8, 9)),
    "iii": (3, 2, (5, 6, 7, 8, 9)),
}


def fmt(x) -> str:
    """Float formatting shared by CSV and JSON writers (9 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def json_safe(obj):
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.9g}")
    return obj


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Random nodes


@dataclass(frozen=True)
class RandomNodesConfig:
    d: int = 2
    n: int = 4
    degree: int = 2
    trials: int = DEFAULT_TRIALS
    seed: int = 1
    method: Method = Method.MAXVOL_EXHAUSTIVE
    tol: float = DEFAULT_TOL
    mesh_measure: float = DEFAULT_MAX_CELL_MEASURE

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mesh_measure <= 0:
            raise ValueError("mesh_measure must be positive")
        if self.d not in (2, 3):
            raise ValueError("d must be 2 or 3")
        if self.n < self.d + 1:
            raise ValueError(f"need at least d + 1 = {self.d + 1} nodes for a full-dimensional hull")
        object.__setattr__(self, "method", Method(self.method))
        m = math.comb(self.degree + self.d, self.d)
        if m < self.n:
            raise ValueError(f"trial basis of degree {self.degree} has only {m} functions for {self.n} nodes")
        _check_guard(m, self.n)


@dataclass
class TrialRecord:
    trial: int
    lambda_best: float
    lambda_maxvol: float
    lambda_maxminsv: float
    diff_a: float
    diff_b: float
    diff_c: float
    dismissed: bool
    rows_best: tuple = field(default=(), repr=False)
    rows_maxvol: tuple = field(default=(), repr=False)
    rows_maxminsv: tuple = field(default=(), repr=False)

    CSV_FIELDS = (
        "trial", "lambda_best", "lambda_maxvol", "lambda_maxminsv",
        "diff_a", "diff_b", "diff_c", "dismissed",
        "rows_best", "rows_maxvol", "rows_maxminsv",
    )

    def csv_row(self) -> list[str]:
        rows = lambda r: " ".join(str(i + 1) for i in r)  # noqa: E731
        return [
            fmt(self.trial), fmt(self.lambda_best), fmt(self.lambda_maxvol),
            fmt(self.lambda_maxminsv), fmt(self.diff_a), fmt(self.diff_b),
            fmt(self.diff_c), fmt(self.dismissed),
            rows(self.rows_best), rows(self.rows_maxvol), rows(self.rows_maxminsv),
        ]


def trial_nodes(seed: int, trial: int, n: int, d: int) -> np.ndarray:
    stream = trial_stream(seed, trial)
    return np.array(stream.uniform(n * d)).reshape(n, d)


def subset_lebesgue(v: np.ndarray, phi_mesh: np.ndarray, subsets: np.ndarray,
                    usable: np.ndarray) -> np.ndarray:
    """Discrete Lebesgue constant for every row subset (inf where unusable).

    v: (m, n) generalized Vandermonde matrix; phi_mesh: (m, N) trial basis
    at the mesh vertices.
    """
    out = np.full(len(subsets), np.inf)
    idx = np.flatnonzero(usable)
    if len(idx) == 0:
        return out
    sel = subsets[idx]
    lu, perm, _, _ = lu_factor_batch(v[sel])
    cardinal = lu_solve_batch(lu, perm, phi_mesh[sel])
    out[idx] = np.max(np.sum(np.abs(cardinal), axis=1), axis=1)
    return out


def run_trial(config: RandomNodesConfig, trial: int, trial_basis: BasisSequence | None = None) -> TrialRecord:
    trial_basis = trial_basis or monomial_basis(config.d, config.degree)
    nodes = trial_nodes(config.seed, trial, config.n, config.d)
    try:
        mesh = convex_hull_mesh(nodes, config.mesh_measure)
    except DegenerateHullError:
        nan = math.nan
        return TrialRecord(trial, nan, nan, nan, nan, nan, nan, True)
    v = build_generalized(trial_basis, NodeSet(nodes, config.d))
    phi_mesh = trial_basis.evaluate(mesh.vertices)
    m, n = v.shape

    subsets = np.concatenate(list(iter_subset_chunks(m, n)))
    stack = v[subsets]
    volumes = np.abs(det_batch(stack))
    sv = singular_values_batch(stack)
    sigma_min, sigma_max = sv[:, -1], sv[:, 0]
    usable = np.array([not near_singular(0.0, lo, hi) for lo, hi in zip(sigma_min, sigma_max)])
    lam = subset_lebesgue(v, phi_mesh, subsets, usable)

    best = int(np.argmin(lam))
    j_minsv = int(np.argmax(sigma_min))
    if config.method is Method.MAXVOL:
        try:
            sel = maxvol_rows(v, config.tol)
            rows_vol = sel.row_indices
            vol_dismissed = sel.dismissed
        except MaxVolConvergenceError as exc:
            log.warning("trial %d: %s", trial, exc)
            rows_vol, vol_dismissed = tuple(exc.rows), True
        # locate the selected subset in the lexicographic enumeration
        j_vol = int(np.flatnonzero(np.all(subsets == np.array(rows_vol), axis=1))[0])
    else:
        j_vol = int(np.argmax(volumes))
        vol_dismissed = not usable[j_vol]

    dismissed = bool(vol_dismissed or not usable[j_minsv] or not np.isfinite(lam[best]))
    lb, lv, ls = float(lam[best]), float(lam[j_vol]), float(lam[j_minsv])
    if dismissed:
        da = db = dc = math.nan
    else:
        da, db, dc = abs(lb - lv), abs(lb - ls), abs(lv - ls)
    return TrialRecord(
        trial, lb, lv, ls, da, db, dc, dismissed,
        tuple(int(i) for i in subsets[best]),
        tuple(int(i) for i in subsets[j_vol]),
        tuple(int(i) for i in subsets[j_minsv]),
    )


def _run_chunk(args) -> list[TrialRecord]:
    config, trials = args
    basis = monomial_basis(config.d, config.degree)
    return [run_trial(config, t, basis) for t in trials]


def run_random_nodes(config: RandomNodesConfig, workers: int | None = None) -> list[TrialRecord]:
    """All trials of one random-node case, sorted by trial id."""
    workers = worker_count() if workers is None else workers
    trials = list(range(config.trials))
    if workers <= 1 or config.trials < 2 * workers:
        records = _run_chunk((config, trials))
    else:
        chunks = [(config, trials[i::workers]) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for part in pool.map(_run_chunk, chunks) for r in part]
    return sorted(records, key=lambda r: r.trial)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray  # bin lower edges plus HIST_MAX
    counts: dict  # series name -> counts, last entry is the overflow bin


def histograms(records: Iterable[TrialRecord], width: float = HIST_WIDTH, top: float = HIST_MAX) -> Histogram:
    records = [r for r in records if not r.dismissed]
    nbins = int(round(top / width))
    edges = np.arange(nbins + 1) * width
    counts = {}
    for name in ("diff_a", "diff_b", "diff_c"):
        vals = np.array([getattr(r, name) for r in records], dtype=float)
        bins = np.floor(vals / width + 1e-12).astype(int) if len(vals) else np.zeros(0, int)
        bins = np.clip(bins, 0, nbins)  # bin nbins is the overflow bin
        counts[name] = np.bincount(bins, minlength=nbins + 1)
    return Histogram(edges, counts)


def summarize(records: list[TrialRecord], config: RandomNodesConfig) -> dict:
    kept = [r for r in records if not r.dismissed]
    out = {"d": config.d, "n": config.n, "degree": config.degree, "trials": len(records),
           "seed": config.seed, "method": config.method.value,
           "dismissed": len(records) - len(kept)}
    for name in ("diff_a", "diff_b", "diff_c"):
        vals = np.array([getattr(r, name) for r in kept])
        out[f"{name}_lt_0.5"] = float(np.mean(vals < 0.5)) if len(vals) else math.nan
        out[f"{name}_zero"] = float(np.mean(vals == 0.0)) if len(vals) else math.nan
        out[f"{name}_max"] = float(vals.max()) if len(vals) else math.nan
    return out


def records_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(TrialRecord.CSV_FIELDS)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def histogram_csv(hist: Histogram) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["bin_lo", "bin_hi", "count_a", "count_b", "count_c"])
    nbins = len(hist.edges) - 1
    for b in range(nbins + 1):
        lo = hist.edges[b]
        hi = hist.edges[b + 1] if b < nbins else math.inf
        writer.writerow([fmt(lo), fmt(hi)] + [fmt(hist.counts[k][b]) for k in ("diff_a", "diff_b", "diff_c")])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Incomplete sparse grids


@dataclass(frozen=True)
class IncompleteGridConfig:
    d: int = 2
    k: int = 2
    tol: float = DEFAULT_TOL
    mesh_measure: float = DEFAULT_MAX_CELL_MEASURE

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("d must be 2 or 3")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.mesh_measure <= 0:
            raise ValueError("mesh_measure must be positive")


@dataclass(frozen=True)
class CurvePoint:
    cardinality: int
    i: int
    lebesgue: float
    source: str  # "smolyak" for complete grids, "maxvol" otherwise
    swaps: int = 0
    flagged: bool = False
    rows: tuple = field(default=(), repr=False)

    CSV_FIELDS = ("cardinality", "i", "lambda", "basis", "swaps", "flagged")

    def csv_row(self) -> list[str]:
        return [fmt(self.cardinality), fmt(self.i), fmt(self.lebesgue), self.source,
                fmt(self.swaps), fmt(self.flagged)]


def complete_grid_lebesgue(d: int, k: int, mesh_measure: float = DEFAULT_MAX_CELL_MEASURE) -> float:
    grid = smolyak_grid(d, k)
    card = cardinal_functions(grid.basis, grid.nodes)
    return lebesgue_discrete(card, cube_mesh(d, mesh_measure)).lambda_discrete


def run_incomplete_grid(config: IncompleteGridConfig) -> list[CurvePoint]:
    """Lebesgue constants along X_{d,k} = Y_0 < Y_1 < ... < Y_last = X_{d,k+1}.

    Interior sets use the MaxVol rows of the trial basis B_{d,k+1}; the two
    complete grids use their own Smolyak bases.
    """
    d, k = config.d, config.k
    mesh = cube_mesh(d, config.mesh_measure)
    trial = smolyak_basis(d, k + 1)
    phi_mesh = trial.evaluate(mesh.vertices)
    n_new = len(incomplete_sequence(d, k))
    n0 = len(smolyak_grid(d, k).nodes)
    curve = [CurvePoint(n0, 0, complete_grid_lebesgue(d, k, config.mesh_measure), "smolyak")]
    for i in range(1, n_new + 1):
        nodes = incomplete_grid(d, k, i)
        v = build_generalized(trial, nodes)
        flagged = False
        try:
            sel = maxvol_rows(v, config.tol)
            rows, swaps, flagged = sel.row_indices, sel.swaps, sel.dismissed
        except MaxVolConvergenceError as exc:
            log.warning("cardinality %d: %s", n0 + i, exc)
            rows, swaps, flagged = tuple(exc.rows), -1, True
        if i == n_new:
            source = "smolyak"  # square trial matrix: the full Smolyak basis
        else:
            source = "maxvol"
        if flagged:
            lam = math.inf
        else:
            sub = v[list(rows)]
            lu, perm, _, sing = lu_factor_batch(sub[None])
            if sing[0] >= 0:
                lam, flagged = math.inf, True
            else:
                cardinal = lu_solve_batch(lu, perm, phi_mesh[list(rows)][None])[0]
                lam = float(np.max(np.sum(np.abs(cardinal), axis=0)))
        curve.append(CurvePoint(n0 + i, i, lam, source, swaps, flagged, rows))
    return curve


def curve_csv(curve: Iterable[CurvePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CurvePoint.CSV_FIELDS)
    for p in curve:
        writer.writerow(p.csv_row())
    return buf.getvalue()


def local_minima(curve: list[CurvePoint]) -> list[int]:
    """Cardinalities of interior points strictly below both neighbours."""
    out = []
    for a, b, c in zip(curve, curve[1:], curve[2:]):
        if b.lebesgue < a.lebesgue and b.lebesgue < c.lebesgue:
            out.append(b.cardinality)
    return out


def config_dict(config) -> dict:
    out = asdict(config)
    if "method" in out:
        out["method"] = Method(out["method"]).value
    return out
