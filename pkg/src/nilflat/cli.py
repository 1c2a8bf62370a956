"""Command-line front door: validate, peel, extend, curvature, certify.

Exit codes are a stable contract:

  0  success
  1  I/O, JSON-parse, schema, or flag-usage problems
  2  invalid mathematics (Jacobi/class/adapted failures, bad cocycles,
     non-positive-definite metrics, dimension mismatches)
  3  internal bound violation (BoundViolated) or certification budget
     exhaustion (BudgetNotMet)

Data files written by `peel` and `extend` are pure canonical JSON so they
round-trip byte-for-byte; `curvature` and `certify` reports embed the tool
version and the full run configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__, fileio
from .algebra import NilAlgebra, check_adapted, check_class, check_jacobi
from .bch import bch_table
from .coords import lattice_closed
from .certify import certify_almost_flat, certificate_summary
from .errors import (BoundViolated, BudgetNotMet, DimensionMismatch,
                     NilflatError, SchemaError, ValidationReport)
from .metric import LeftInvariantMetric
from .scan import lemma_scan, report_csv, report_summary
from .submersion import build_split
from .tower import NilLattice, extend_by_cocycle, peel_tower

EXIT_OK = 0
EXIT_IO = 1
EXIT_MATH = 2
EXIT_BOUND = 3

_BCH_CLASS_LIMIT = 6


class _UsageError(Exception):
    """Flag values that violate the run-config invariants (exit 1)."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; 2 is reserved for invalid math."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nilflat",
        description=("Peel nilpotent lattices into circle-bundle towers, "
                     "rebuild them from cocycles, and certify almost-flatness "
                     "of the associated nilmanifolds numerically."))
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    p = sub.add_parser(
        "validate",
        help="check a lattice file (Jacobi, nilpotency class, adapted basis, "
             "integer constants; lattice closure reported informationally)")
    p.add_argument("path", help="algebra/lattice JSON file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser(
        "peel", help="peel a lattice into its iterated circle-bundle tower")
    p.add_argument("path", help="algebra/lattice JSON file")
    p.add_argument("--out", help="tower JSON output path (default: stdout)")
    p.set_defaults(func=cmd_peel)

    p = sub.add_parser(
        "extend", help="centrally extend a base lattice by a 2-cocycle")
    p.add_argument("base", help="base algebra/lattice JSON file")
    p.add_argument("cocycle", help="cocycle JSON file")
    p.add_argument("--out",
                   help="extended lattice JSON output path (default: stdout)")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser(
        "curvature",
        help="scan sup|K^t| over a geometric t grid against the "
             "sup|K_base| + C*sqrt(t) bound")
    p.add_argument("path", help="algebra/lattice JSON file")
    p.add_argument("--metric",
                   help="left-invariant metric JSON file (default: identity)")
    p.add_argument("--t-max", type=float, default=1.0,
                   help="largest t in the grid (default: 1.0)")
    p.add_argument("--t-min", type=float, default=1e-6,
                   help="smallest t in the grid (default: 1e-6)")
    p.add_argument("--t-points", type=int, default=7,
                   help="number of log-spaced grid points (default: 7)")
    p.add_argument("--samples", type=int, default=4096,
                   help="plane samples per t value (default: 4096)")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed (default: 0)")
    p.add_argument("--out",
                   help="output path; with csv format a *.summary.json file "
                        "is written beside it (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="primary artifact: CSV table or JSON summary "
                        "(default: csv)")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser(
        "certify",
        help="schedule per-level fiber collapse until sampled sup|K| <= eps")
    p.add_argument("path", help="algebra/lattice JSON file")
    p.add_argument("--metric",
                   help="seed metric JSON file (default: identity)")
    p.add_argument("--eps", type=float, required=True,
                   help="target bound on sampled sup|K|")
    p.add_argument("--samples", type=int, default=4096,
                   help="plane samples per curvature measurement "
                        "(default: 4096)")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed (default: 0)")
    p.add_argument("--out", help="schedule JSON path (default: stdout)")
    p.set_defaults(func=cmd_certify)

    return parser


def _envelope(command: str, config: Dict[str, Any],
              report: Dict[str, Any]) -> Dict[str, Any]:
    """Reproducibility wrapper: every JSON report carries version + config."""
    return {"tool": "nilflat", "version": __version__, "command": command,
            "config": config, "report": report}


def _emit(text: str, out: Optional[str], human_line: str) -> None:
    """Artifact to --out (with a one-line note on stdout) or to stdout."""
    if out is None:
        sys.stdout.write(text)
    else:
        fileio.write_text(out, text)
        print(human_line)


def _load_metric_arg(path: Optional[str], dim: int) -> LeftInvariantMetric:
    if path is None:
        return LeftInvariantMetric.identity(dim)
    matrix = fileio.load_metric(path)
    if matrix.shape[0] != dim:
        raise DimensionMismatch(
            f"metric dim {matrix.shape[0]} does not match algebra dim {dim}")
    return LeftInvariantMetric(matrix=matrix)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _integer_constants_report(algebra: NilAlgebra) -> ValidationReport:
    """Integer structure constants = the lattice-model gate of NilLattice."""
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            for k, coeff in enumerate(algebra.structure[i][j]):
                if coeff.denominator != 1:
                    return ValidationReport(
                        ok=False, check="integer_constants",
                        message=(f"structure constant {coeff} of "
                                 f"[e{i + 1},e{j + 1}] is not an integer"),
                        witness=(i + 1, j + 1, k + 1), defect=coeff)
    return ValidationReport(ok=True, check="integer_constants")


def cmd_validate(args: argparse.Namespace) -> int:
    algebra = fileio.load_algebra(args.path)
    gate = [check_jacobi(algebra), check_class(algebra),
            check_adapted(algebra), _integer_constants_report(algebra)]
    for report in gate:
        if report:
            print(f"{report.check}: ok")
        else:
            print(f"{report.check}: FAIL — {report.message}")
            print(f"invalid: {args.path}", file=sys.stderr)
            return EXIT_MATH

    # Informational: the strict closure certificate for integer second-kind
    # points. It is exact at class <= 2 but honestly fails at class >= 3
    # (collection meets BCH denominators), where the lattice is the group
    # generated by the basis one-parameter integer points; it never gates.
    if algebra.declared_class > _BCH_CLASS_LIMIT:
        print(f"lattice_closed: skipped (class > {_BCH_CLASS_LIMIT} exceeds "
              "the BCH truncation bound)")
    else:
        table = bch_table(max(1, algebra.declared_class))
        closed = lattice_closed(algebra, table)
        if closed:
            print("lattice_closed: ok")
        else:
            print(f"lattice_closed: strict certificate fails "
                  f"({closed.message}) — informational at class >= 3")
    print(f"valid: {args.path} (dim {algebra.dim}, "
          f"class {algebra.declared_class})")
    return EXIT_OK


def cmd_peel(args: argparse.Namespace) -> int:
    lattice = fileio.load_lattice(args.path)
    tower = peel_tower(lattice)
    text = fileio.dump_tower(tower)
    _emit(text, args.out,
          f"peeled {args.path}: {len(tower.steps)} steps -> {args.out}")
    return EXIT_OK


def cmd_extend(args: argparse.Namespace) -> int:
    base = fileio.load_lattice(args.base)
    cocycle = fileio.load_cocycle(args.cocycle)
    extended = extend_by_cocycle(base, cocycle)
    text = fileio.dump_algebra(extended.algebra)
    _emit(text, args.out,
          f"extended {args.base} by {args.cocycle}: "
          f"dim {extended.dim} -> {args.out}")
    return EXIT_OK


def _check_scan_flags(args: argparse.Namespace) -> None:
    if not (args.t_min > 0.0):
        raise _UsageError(f"--t-min must be positive, got {args.t_min}")
    if args.t_max < args.t_min:
        raise _UsageError(
            f"--t-max ({args.t_max}) must be >= --t-min ({args.t_min})")
    if args.t_points < 1:
        raise _UsageError(f"--t-points must be >= 1, got {args.t_points}")
    if args.samples < 1:
        raise _UsageError(f"--samples must be >= 1, got {args.samples}")


def cmd_curvature(args: argparse.Namespace) -> int:
    _check_scan_flags(args)
    lattice = fileio.load_lattice(args.path)
    algebra = lattice.algebra
    n = algebra.dim
    if n < 2:
        raise DimensionMismatch(
            "curvature scan needs dim >= 2 (one horizontal direction)")
    metric = _load_metric_arg(args.metric, n)
    z = np.zeros(n)
    z[n - 1] = 1.0
    split = build_split(metric, z)
    t_grid = np.geomspace(args.t_max, args.t_min, args.t_points)

    report = lemma_scan(algebra, metric, split, t_grid,
                        n_samples=args.samples, seed=args.seed)

    config = {"input": args.path, "metric": args.metric,
              "t_max": args.t_max, "t_min": args.t_min,
              "t_points": args.t_points, "samples": args.samples,
              "seed": args.seed, "format": args.format, "out": args.out}
    summary = fileio.canonical_json(
        _envelope("curvature", config, report_summary(report)))
    csv_text = report_csv(report)

    exponent = report.exponent_fit
    shown = "n/a" if exponent is None else f"{exponent:.4f}"
    note = (f"scanned {args.path}: {args.t_points} t values, "
            f"C = {report.C:.6g}, exponent_fit = {shown}")

    if args.format == "csv":
        if args.out is None:
            sys.stdout.write(csv_text)
        else:
            fileio.write_text(args.out, csv_text)
            summary_path = Path(args.out).with_suffix(".summary.json")
            fileio.write_text(summary_path, summary)
            print(f"{note} -> {args.out}, {summary_path}")
    else:
        _emit(summary, args.out, f"{note} -> {args.out}")
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    if not (args.eps > 0.0):
        raise _UsageError(f"--eps must be positive, got {args.eps}")
    if args.samples < 1:
        raise _UsageError(f"--samples must be >= 1, got {args.samples}")
    lattice = fileio.load_lattice(args.path)
    metric = _load_metric_arg(args.metric, lattice.dim)
    tower = peel_tower(lattice)

    report = certify_almost_flat(tower, metric, args.eps,
                                 seed=args.seed, n_samples=args.samples)

    config = {"input": args.path, "metric": args.metric, "eps": args.eps,
              "samples": args.samples, "seed": args.seed, "out": args.out}
    text = fileio.canonical_json(
        _envelope("certify", config, certificate_summary(report)))
    _emit(text, args.out,
          f"certified {args.path}: sup|K| = {report.sup_abs_K:.6g} <= "
          f"{args.eps:g}, diam <= {report.diam_bound:.6g} -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"nilflat: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SchemaError as exc:
        print(f"nilflat: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"nilflat: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BoundViolated, BudgetNotMet) as exc:
        print(f"nilflat: error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except NilflatError as exc:
        print(f"nilflat: error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
