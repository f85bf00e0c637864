"""Command line interface.

Every command reads the text packing format and prints a deterministic
key: value report.  Exit status 0 means the analysis completed (whatever
its outcome), 1 means the input was invalid, 2 means a numerical failure.
Tolerances can be overridden per invocation with --tol-* flags or globally
through the PACKRIGID_TOLS environment variable, e.g.
PACKRIGID_TOLS="rank=1e-8,lp=1e-6".
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .casebook import build_case, case_names
from .core import AnalysisTolerances, PackingError, validate_packing
from .first_order import Stress, is_infinitesimally_rigid
from .io import parse, serialize
from .layout import ConvergenceError, LayoutProblem, solve_layout
from .linalg import DecompositionError, rank_report
from .lp import NumericalBreakdownError
from .matroid import greedy_min_cost_set
from .rigidity import build_extended_matrix, trivial_dim
from .second_order import second_order_analysis
from .svg import export_svg

_TOL_KEYS = {"tangency": "tol_tangency", "rank": "tol_rank",
             "strict": "tol_strict", "lp": "tol_lp"}


def _env_defaults() -> dict:
    out = {}
    raw = os.environ.get("PACKRIGID_TOLS", "")
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        key, _, value = item.partition("=")
        if key not in _TOL_KEYS:
            raise PackingError(f"unknown tolerance {key!r} in PACKRIGID_TOLS")
        out[_TOL_KEYS[key]] = float(value)
    return out


def _tolerances(args) -> AnalysisTolerances:
    values = _env_defaults()
    for flag, field in (("tol_tangency", "tol_tangency"), ("tol_rank", "tol_rank"),
                        ("tol_strict", "tol_strict"), ("tol_lp", "tol_lp")):
        v = getattr(args, flag, None)
        if v is not None:
            values[field] = v
    return AnalysisTolerances(**values)


def _read(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise PackingError(f"cannot read {path}: {exc}") from None


def _emit(lines, out_path=None):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bool(x) -> str:
    return "true" if x else "false"


def cmd_validate(args) -> int:
    graph, packing, _ = _read(args.file)
    violations = validate_packing(graph, packing, _tolerances(args))
    lines = [f"valid: {_bool(not violations)}", f"violations: {len(violations)}"]
    lines += [f"violation: {v.kind} at {v.where}: {v.detail}" for v in violations]
    _emit(lines)
    return 0


def cmd_analyze(args) -> int:
    graph, packing, partition = _read(args.file)
    tol = _tolerances(args)
    verdict = is_infinitesimally_rigid(graph, packing, partition, tol)
    d = verdict.diagnostics
    Re = build_extended_matrix(graph, packing, partition, tol, check=False)
    rank = rank_report(Re.matrix, tol.tol_rank).rank
    lines = [
        "rigid: " + ("indeterminate" if verdict.rigid is None else _bool(verdict.rigid)),
        f"fixed_radius_ok: {_bool(verdict.fixed_radius_ok)}",
        f"stress_margin: {verdict.stress_margin!r}",
        f"kernel_R: {d.dim_kernel_R}",
        f"kernel_Re: {d.dim_kernel_Re}",
        f"kernel_Rprime: {d.dim_kernel_Rprime}",
        f"cokernel_Re: {Re.matrix.shape[0] - rank}",
        f"center_only_flexes: {d.nontrivial_fixed_radii_flexes}",
        f"free_disk_flexes: {d.free_disk_flexes}",
        f"near_degenerate: {_bool(d.near_degenerate)}",
        f"has_stress: {_bool(verdict.stress is not None)}",
        f"has_counterexample_flex: {_bool(verdict.counterexample_flex is not None)}",
    ]
    if verdict.note:
        lines.append(f"note: {verdict.note}")
    _emit(lines)
    return 0


def cmd_second_order(args) -> int:
    graph, packing, partition = _read(args.file)
    analysis = second_order_analysis(graph, packing, partition, _tolerances(args))
    blocked = bool(analysis.verdicts) and all(
        v.blocking_stress is not None for v in analysis.verdicts)
    lines = [
        f"status: {analysis.status}",
        f"flex_dim: {analysis.flex_cone_dim}",
        f"directions: {len(analysis.verdicts)}",
        f"blocked: {_bool(blocked)}",
        f"prestress_stable: {_bool(analysis.prestress_stable)}",
    ]
    for k, v in enumerate(analysis.verdicts, start=1):
        lines.append(
            f"direction_{k}: extendable={_bool(v.extendable)} "
            f"blocked={_bool(v.blocking_stress is not None)} "
            f"exclusive={_bool(v.exclusive)}")
    _emit(lines)
    return 0


def cmd_matroid(args) -> int:
    graph, packing, _ = _read(args.file)
    cost = None
    if args.cost:
        cost = {}
        with open(args.cost, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise PackingError(f"cost file line {lineno}: expected '<id> <cost>'")
                cost[int(parts[0])] = float(parts[1])
    result = greedy_min_cost_set(graph, packing, cost, _tolerances(args))
    lines = [
        "set: " + " ".join(str(v) for v in result.radius_set.vertices),
        f"size: {len(result.radius_set.vertices)}",
        f"target_size: {3 * graph.n - graph.m - trivial_dim(graph.n)}",
        f"cost: {result.total_cost!r}",
        f"skipped_indeterminate: {len(result.indeterminate_skipped)}",
    ]
    _emit(lines)
    return 0


def cmd_layout(args) -> int:
    graph, packing, partition = _read(args.file)
    boundary_ids = graph.boundary_vertices()
    if args.boundary:
        values = [float(x) for x in args.boundary.split(",")]
        if len(values) != len(boundary_ids):
            raise PackingError(
                f"--boundary needs {len(boundary_ids)} radii for vertices "
                f"{boundary_ids}")
        radii = dict(zip(boundary_ids, values))
    else:
        radii = {v: packing.radius(v) for v in boundary_ids}
    problem = LayoutProblem(graph, radii)
    solved = solve_layout(problem, _tolerances(args))
    _emit([serialize(graph, solved, partition).rstrip("\n")], args.output)
    return 0


def cmd_case(args) -> int:
    record = build_case(args.name)
    if record.packing is not None:
        _emit([serialize(record.graph, record.packing, record.partition).rstrip("\n")],
              args.output)
        return 0
    lines = [f"case: {record.name}", f"description: {record.description}"]
    for key in sorted(record.facts):
        lines.append(f"{key}: {record.facts[key]!r}")
    _emit(lines, args.output)
    return 0


def cmd_export_svg(args) -> int:
    graph, packing, partition = _read(args.file)
    stress = None
    if args.stress:
        values = np.zeros(graph.m)
        with open(args.stress, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 3:
                    raise PackingError(
                        f"stress file line {lineno}: expected '<i> <j> <value>'")
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
                if not graph.has_edge(i, j):
                    raise PackingError(f"stress file line {lineno}: no edge ({i},{j})")
                values[graph.edge_index(i, j)] = w
        stress = Stress.from_values(graph, packing, values)
    _emit([export_svg(graph, packing, partition, stress).rstrip("\n")], args.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    tols = argparse.ArgumentParser(add_help=False)
    tols.add_argument("--tol-tangency", dest="tol_tangency", type=float)
    tols.add_argument("--tol-rank", dest="tol_rank", type=float)
    tols.add_argument("--tol-strict", dest="tol_strict", type=float)
    tols.add_argument("--tol-lp", dest="tol_lp", type=float)

    parser = argparse.ArgumentParser(
        prog="packrigid",
        description="rigidity analysis of tangency circle packings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[tols], help="check a packing file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", parents=[tols], help="first-order rigidity verdict")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("second-order", parents=[tols],
                       help="flex extendability and prestress stability")
    p.add_argument("file")
    p.set_defaults(func=cmd_second_order)

    p = sub.add_parser("matroid", parents=[tols],
                       help="greedy minimum-cost rigidifying radius set")
    p.add_argument("file")
    p.add_argument("--cost", help="file of '<id> <cost>' lines")
    p.set_defaults(func=cmd_matroid)

    p = sub.add_parser("layout", parents=[tols],
                       help="solve interior radii and place centers")
    p.add_argument("file")
    p.add_argument("--boundary",
                   help="comma-separated radii for the boundary vertices in id order")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("case", help="emit a casebook fixture")
    p.add_argument("name", choices=case_names())
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_case)

    p = sub.add_parser("export-svg", parents=[tols], help="render a packing")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--stress", help="file of '<i> <j> <value>' lines for edge labels")
    p.set_defaults(func=cmd_export_svg)
    return parser


def cli_run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (NumericalBreakdownError, DecompositionError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PackingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_run(sys.argv[1:]))


if __name__ == "__main__":
    main()
