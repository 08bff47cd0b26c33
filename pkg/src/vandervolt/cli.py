"""Command-line interface.

Exit codes: 0 success, 1 runtime error, 2 usage or input parse error,
3 the selected basis was dismissed as numerically singular.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .basis import BasisSequence, chebyshev_basis, monomial_basis
from .experiments import (
    DEFAULT_TRIALS,
    FULL_TRIALS,
    RANDOM_NODE_CASES,
    IncompleteGridConfig,
    RandomNodesConfig,
    config_dict,
    curve_csv,
    fmt,
    histogram_csv,
    histograms,
    json_safe,
    local_minima,
    records_csv,
    run_incomplete_grid,
    run_random_nodes,
    summarize,
)
from .interpolant import cardinal_functions, fit
from .lebesgue import lebesgue_report
from .mesh import DEFAULT_MAX_CELL_MEASURE, convex_hull_mesh, cube_mesh
from .selection import DEFAULT_TOL, Method, select_rows
from .sparse_grid import smolyak_basis, smolyak_grid
from .vandermonde import NodeSet, build_generalized

EXIT_DISMISSED = 3


class InputError(ValueError):
    pass


def read_table(path: str | Path, width: int | None = None) -> np.ndarray:
    """Numeric CSV rows; '#' starts a comment, a non-numeric first row is a header."""
    rows: list[list[float]] = []
    seen_data = False
    with open(path, newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            try:
                values = [float(f) for f in fields]
            except ValueError:
                if not seen_data and not rows:
                    seen_data = True  # header row
                    continue
                raise InputError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
            seen_data = True
            if width is not None and len(values) != width:
                raise InputError(f"{path}:{lineno}: expected {width} columns, got {len(values)}")
            if rows and len(values) != len(rows[0]):
                raise InputError(
                    f"{path}:{lineno}: expected {len(rows[0])} columns, got {len(values)}"
                )
            if not all(np.isfinite(values)):
                raise InputError(f"{path}:{lineno}: non-finite value")
            rows.append(values)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return np.array(rows)


def parse_basis_spec(spec: str, d: int) -> BasisSequence:
    """'monomial:degree=K', 'chebyshev:degree=K' or 'smolyak:k=K'."""
    family, _, params = spec.partition(":")
    opts = {}
    for item in filter(None, params.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise InputError(f"bad basis option {item!r} in {spec!r}")
        try:
            opts[key.strip()] = int(val)
        except ValueError:
            raise InputError(f"basis option {key!r} must be an integer") from None
    family = family.strip().lower()
    if family in ("monomial", "chebyshev"):
        if set(opts) != {"degree"}:
            raise InputError(f"{family} basis takes exactly one option: degree")
        build = monomial_basis if family == "monomial" else chebyshev_basis
        return build(d, opts["degree"])
    if family == "smolyak":
        if set(opts) != {"k"}:
            raise InputError("smolyak basis takes exactly one option: k")
        return smolyak_basis(d, opts["k"])
    raise InputError(f"unknown basis family {family!r}")


def _emit(obj) -> None:
    print(json.dumps(json_safe(obj), indent=2))


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, newline="")
    else:
        sys.stdout.write(text)


def _select(nodes: NodeSet, trial: BasisSequence, method: str, tol: float):
    return select_rows(build_generalized(trial, nodes), method, tol)


def cmd_select_basis(args) -> int:
    points = read_table(args.nodes)
    nodes = NodeSet(points)
    trial = parse_basis_spec(args.basis, nodes.dimension)
    sel = _select(nodes, trial, args.method, args.tol)
    out = {"n": len(nodes), "m": len(trial)}
    out.update(sel.to_dict())
    out["basis"] = [trial[i].describe() for i in sel.row_indices]
    if args.values and not sel.dismissed:
        values = read_table(args.values, width=1)[:, 0]
        if len(values) != len(nodes):
            raise InputError(f"{args.values}: expected {len(nodes)} values, got {len(values)}")
        interp = fit(trial.select(sel.row_indices), nodes, values)
        out["coefficients"] = [float(c) for c in interp.coefficients]
    _emit(out)
    return EXIT_DISMISSED if sel.dismissed else 0


def cmd_lebesgue(args) -> int:
    if args.nodes:
        nodes = NodeSet(read_table(args.nodes))
        trial = parse_basis_spec(args.basis, nodes.dimension)
        sel = _select(nodes, trial, args.method, args.tol)
        basis = trial.select(sel.row_indices)
        mesh = convex_hull_mesh(nodes, args.mesh_measure)
        out = {"n": len(nodes), "m": len(trial), "selection": sel.to_dict()}
        if sel.dismissed:
            _emit(out)
            return EXIT_DISMISSED
    else:
        if args.d is None or args.k is None:
            raise InputError("give a node file, or --d and --k for a complete sparse grid")
        grid = smolyak_grid(args.d, args.k)
        nodes, basis = grid.nodes, grid.basis
        mesh = cube_mesh(args.d, args.mesh_measure)
        out = {"n": len(nodes), "grid": {"d": args.d, "k": args.k}}
    report = lebesgue_report(cardinal_functions(basis, nodes), mesh)
    out["basis"] = [phi.describe() for phi in basis]
    out["mesh"] = {"vertices": len(mesh.vertices), "cells": len(mesh.cells)}
    out.update(report.to_dict())
    _emit(out)
    return 0


def sparse_grid_tables(d: int, k: int) -> tuple[str, str]:
    grid = smolyak_grid(d, k)
    header = ["i"] + [f"x{j + 1}" for j in range(d)]
    lines = [",".join(header)]
    for i, p in enumerate(grid.nodes.points, start=1):
        lines.append(",".join([str(i)] + [fmt(x + 0.0) for x in p]))
    nodes_csv = "\r\n".join(lines) + "\r\n"
    basis_lines = ["# i family exponents"]
    for i, phi in enumerate(grid.basis, start=1):
        basis_lines.append(f"{i} {phi.family.value} {','.join(map(str, phi.index))}")
    return nodes_csv, "\n".join(basis_lines) + "\n"


def cmd_sparse_grid(args) -> int:
    nodes_csv, basis_txt = sparse_grid_tables(args.d, args.k)
    _write_or_print(nodes_csv, args.out)
    if args.basis_out:
        Path(args.basis_out).write_text(basis_txt)
    elif args.out:
        sys.stdout.write(basis_txt)
    return 0


def cmd_random_nodes(args) -> int:
    trials = FULL_TRIALS if args.full else args.trials
    if args.case:
        d, degree, ns = RANDOM_NODE_CASES[args.case]
        runs = [(d, n, degree) for n in ns]
    else:
        if args.n is None or args.degree is None:
            raise InputError("give --case, or --n and --degree")
        runs = [(args.d, args.n, args.degree)]
    summaries = []
    for d, n, degree in runs:
        config = RandomNodesConfig(d=d, n=n, degree=degree, trials=trials, seed=args.seed,
                                   method=args.method, tol=args.tol, mesh_measure=args.mesh_measure)
        records = run_random_nodes(config)
        if args.out:
            prefix = f"{args.out}_d{d}_n{n}" if len(runs) > 1 else args.out
            Path(f"{prefix}_trials.csv").write_text(records_csv(records), newline="")
            Path(f"{prefix}_hist.csv").write_text(histogram_csv(histograms(records)), newline="")
        summaries.append({"config": config_dict(config), **summarize(records, config)})
    _emit(summaries if len(summaries) > 1 else summaries[0])
    return 0


def cmd_incomplete_grid(args) -> int:
    config = IncompleteGridConfig(d=args.d, k=args.k, tol=args.tol, mesh_measure=args.mesh_measure)
    curve = run_incomplete_grid(config)
    text = curve_csv(curve)
    if args.out:
        Path(args.out).write_text(text, newline="")
        _emit({"config": config_dict(config), "local_minima": local_minima(curve),
               "flagged": [p.cardinality for p in curve if p.flagged]})
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vandervolt",
        description="Maximum-volume polynomial basis selection and Lebesgue constants.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    selection = argparse.ArgumentParser(add_help=False)
    selection.add_argument("--basis", default="monomial:degree=2",
                           help="trial basis: monomial:degree=K, chebyshev:degree=K or smolyak:k=K")
    selection.add_argument("--method", choices=[m.value for m in Method], default=Method.MAXVOL.value)
    selection.add_argument("--tol", type=float, default=DEFAULT_TOL, help="MaxVol tolerance")
    meshing = argparse.ArgumentParser(add_help=False)
    meshing.add_argument("--mesh-measure", type=float, default=DEFAULT_MAX_CELL_MEASURE,
                         help="largest allowed cell area/volume")

    p = sub.add_parser("select-basis", parents=[selection], help="choose a basis for a node file")
    p.add_argument("nodes", help="CSV file, one node per row")
    p.add_argument("--values", help="CSV file of data values; fit and print coefficients")
    p.set_defaults(func=cmd_select_basis)

    p = sub.add_parser("lebesgue", parents=[selection, meshing],
                       help="Lebesgue constant and bounds for a node file or a complete sparse grid")
    p.add_argument("nodes", nargs="?")
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_lebesgue)

    p = sub.add_parser("sparse-grid", help="dump Smolyak nodes (CSV) and basis table")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="write the node CSV here instead of stdout")
    p.add_argument("--basis-out", help="write the basis table here")
    p.set_defaults(func=cmd_sparse_grid)

    p = sub.add_parser("experiment", help="reproduce the numerical experiments")
    exp = p.add_subparsers(dest="experiment", required=True)

    q = exp.add_parser("random-nodes", parents=[meshing],
                       help="best / MaxVol / MaxMinSv Lebesgue constants on random nodes")
    q.add_argument("--case", choices=sorted(RANDOM_NODE_CASES), help="preset d, degree and n values")
    q.add_argument("--d", type=int, default=2)
    q.add_argument("--n", type=int)
    q.add_argument("--degree", type=int, help="total degree of the monomial trial basis")
    q.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    q.add_argument("--full", action="store_true", help=f"run {FULL_TRIALS} trials")
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--method", choices=[Method.MAXVOL_EXHAUSTIVE.value, Method.MAXVOL.value],
                   default=Method.MAXVOL_EXHAUSTIVE.value, help="how the MaxVol basis is found")
    q.add_argument("--tol", type=float, default=DEFAULT_TOL)
    q.add_argument("--out", help="output prefix for <prefix>_trials.csv and <prefix>_hist.csv")
    q.set_defaults(func=cmd_random_nodes)

    q = exp.add_parser("incomplete-grid", parents=[meshing],
                       help="Lebesgue constants between consecutive sparse grids")
    q.add_argument("--d", type=int, default=2)
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--tol", type=float, default=DEFAULT_TOL)
    q.add_argument("--out", help="write the curve CSV here instead of stdout")
    q.set_defaults(func=cmd_incomplete_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"vandervolt: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"vandervolt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
