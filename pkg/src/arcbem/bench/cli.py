"""Command-line benchmark runner.

Subcommands: solve, table, converge, pade-sweep, field, compare.  Every
report path writes delimited output (CSV/JSON, plus raw binary grids) and,
unless --no-figures is given, matplotlib figures alongside.

Exit codes: 0 success, 2 benchmark assertion failure, 3 sub-module error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ..errors import ArcbemError, BenchAssertionError
from ..io import write_history_csv, write_report_json, write_rows_csv
from . import plots
from .compare import (compare_kinds, graded_study, pade_sensitivity,
                      robustness_study)
from .convergence import convergence_study
from .fields import field_map
from .reference import TABLE_IDS
from .scenario import Scenario, run_scenario
from .tables import HEADER as TABLE_HEADER
from .tables import run_table


def _outdir(args, default: str) -> Path:
    out = Path(args.outdir) if args.outdir else Path("arcbem-out") / default
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_solve(args) -> int:
    sc = Scenario.from_json(args.scenario)
    out = _outdir(args, "solve")
    result = run_scenario(sc, true_history=args.true_history)
    rep = result.report
    write_report_json(out / "report.json",
                      {"scenario": sc.to_dict(), "result": rep.to_dict()})
    write_history_csv(out / "history.csv", rep)
    if args.density:
        t = result.space.mesh.breakpoints
        pts = result.arc.point(t)
        dens = result.density.astype(complex)
        write_rows_csv(out / "density.csv",
                       ["t", "x", "y", "re", "im"],
                       [[t[i], pts[i, 0], pts[i, 1], dens[i].real, dens[i].imag]
                        for i in range(len(t))])
    if not args.no_figures:
        plots.residual_history_plot({sc.label or "run": rep},
                                    out / "history.png")
    print(f"{sc.label or 'scenario'}: {rep.iterations} iterations, "
          f"converged={rep.converged}, true residual {rep.final_true_residual:.2e}")
    print(f"outputs in {out}")
    return 0


def cmd_table(args) -> int:
    out = _outdir(args, f"table-{args.table_id}")
    rows = run_table(args.table_id, outdir=out,
                     rows=[float(r) if "." in r else int(r) for r in args.rows]
                     if args.rows else None)
    if not args.no_figures:
        plots.table_plot(rows, args.table_id, out / f"table_{args.table_id}.png")
    width = max(len(str(r[0])) for r in rows)
    for row in rows:
        print(f"{str(row[0]):>{width}}  {row[2]:<10} measured={row[3]!s:>5} "
              f"reference={row[4]!s:>5}  {row[6]}")
    print(f"outputs in {out}")
    return 0


def cmd_converge(args) -> int:
    out = _outdir(args, f"converge-{args.case}")
    result = convergence_study(args.case, outdir=out)
    if not args.no_figures:
        plots.convergence_plot(result, out / f"convergence_{args.case}.png")
    for name, slope in result["slopes"].items():
        print(f"{args.case}: {name} slope {slope:.3f}")
    print(f"outputs in {out}")
    return 0


def cmd_pade_sweep(args) -> int:
    out = _outdir(args, "pade-sweep")
    result = pade_sensitivity(kl_over_pi=args.kl, np_list=tuple(args.np_list),
                              outdir=out)
    if not args.no_figures:
        plots.pade_sweep_plot(result, out / "pade_sweep.png")
    for n_pade, its in sorted(result["counts"].items()):
        print(f"N_p = {n_pade:3d}: {its} iterations")
    print(f"outputs in {out}")
    return 0


def cmd_field(args) -> int:
    sc = Scenario.from_json(args.scenario)
    out = _outdir(args, "field")
    result = run_scenario(sc)
    bbox = args.grid[:4]
    nx, ny = int(args.grid[4]), int(args.grid[5])
    grid = field_map(result, bbox, nx, ny, path=out / "field.grid")
    write_report_json(out / "report.json",
                      {"scenario": sc.to_dict(), "result": result.report.to_dict(),
                       "grid": {"bbox": list(bbox), "nx": nx, "ny": ny}})
    if not args.no_figures:
        plots.field_plot(grid, out / "field.png")
    print(f"field grid {nx} x {ny} written to {out}")
    return 0


def cmd_compare(args) -> int:
    out = _outdir(args, f"compare-{args.study}")
    if args.study == "robustness":
        result = robustness_study(outdir=out)
        if not args.no_figures:
            plots.robustness_plot(result, out / "robustness.png")
        for kind, counts in result["counts"].items():
            print(f"{kind}: iterations {counts} over kL/pi = {result['kl_over_pi']}")
    elif args.study == "graded":
        result = graded_study(outdir=out)
        for row in result["rows"]:
            print(f"{row[0]:>10}: {row[2]:>4} iterations, error {row[3]:.3e} {row[5]}")
    elif args.study == "kinds":
        if not args.scenario:
            raise ArcbemError("compare kinds needs --scenario")
        sc = Scenario.from_json(args.scenario)
        result = compare_kinds(sc, args.kinds, outdir=out)
        for kind, ndof, its, conv in result["rows"]:
            print(f"{kind:>14}: {its:>4} iterations (N = {ndof}, converged {conv})")
    else:
        raise ArcbemError(f"unknown study {args.study!r}")
    print(f"outputs in {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arcbem",
                                description="Weighted-Galerkin BEM benchmark "
                                            "runner for open-arc scattering")
    p.add_argument("--outdir", help="output directory (default arcbem-out/<cmd>)")
    p.add_argument("--no-figures", action="store_true",
                   help="skip matplotlib figure rendering")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="run one scenario file")
    sp.add_argument("scenario", help="path to a JSON scenario file")
    sp.add_argument("--density", action="store_true",
                    help="also write the solved density as CSV")
    sp.add_argument("--true-history", action="store_true",
                    help="record the plain residual per iteration")
    sp.set_defaults(func=cmd_solve)

    tp = sub.add_parser("table", help="reproduce an iteration table")
    tp.add_argument("table_id", choices=TABLE_IDS)
    tp.add_argument("--rows", nargs="*",
                    help="restrict to these row keys (N or kL/pi values)")
    tp.set_defaults(func=cmd_table)

    cp = sub.add_parser("converge", help="manufactured-solution convergence study")
    cp.add_argument("case", choices=["dir-omega", "dir-omega3", "neu-U2"])
    cp.set_defaults(func=cmd_converge)

    pp = sub.add_parser("pade-sweep", help="iterations vs number of Pade terms")
    pp.add_argument("--kl", type=float, default=200.0,
                    help="k|Gamma| in units of pi (default 200)")
    pp.add_argument("--np-list", type=int, nargs="*",
                    default=[1, 5, 10, 15, 20, 30, 40, 50])
    pp.set_defaults(func=cmd_pade_sweep)

    fp = sub.add_parser("field", help="scattered/total field on a grid")
    fp.add_argument("scenario")
    fp.add_argument("--grid", type=float, nargs=6, required=True,
                    metavar=("XMIN", "XMAX", "YMIN", "YMAX", "NX", "NY"))
    fp.set_defaults(func=cmd_field)

    gp = sub.add_parser("compare", help="preconditioner comparison studies")
    gp.add_argument("study", choices=["robustness", "graded", "kinds"])
    gp.add_argument("--scenario", help="scenario file for the kinds study")
    gp.add_argument("--kinds", nargs="*", default=["none", "sqrt", "calderon"],
                    help="preconditioners to compare in the kinds study")
    gp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BenchAssertionError as exc:
        print(f"benchmark assertion failed: {exc}", file=sys.stderr)
        return 2
    except ArcbemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
