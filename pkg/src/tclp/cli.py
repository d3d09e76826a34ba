"""Command line interface.

    tclp run <file> --query "?- ..." [--mode] [--solver] [--strategy]
                    [--budget N] [--oracle] [--json] [--trace]
    tclp matrix [--budget N] [--json] [--out DIR]
    tclp bench [--strategies ...] [--budget N] [--out DIR]

`bench` writes bench.csv and bench_counts.png into --out (default:
reports/) alongside the table printed to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, reports
from .engine import DEFAULT_BUDGET, Engine, Mode, Strategy
from .errors import TclpError
from .program import parse_program, parse_query
from .semantics import oracle_gate
from .solvers import make_solver, parse_lattice_file, signs_lattice


def _mode(text: str) -> Mode:
    return {"sld": Mode.SLD, "tab": Mode.VARIANT, "tclp": Mode.TCLP}[text]


def _strategy(text: str) -> Strategy:
    return {"none": Strategy.NONE, "discard": Strategy.DISCARD_NEW,
            "remove": Strategy.REMOVE_OLD, "both": Strategy.BOTH}[text]


def _load_lattice(ref: str | None, base: Path):
    if ref in (None, "signs"):
        return signs_lattice()
    path = Path(ref)
    if not path.is_absolute():
        path = base / path
    return parse_lattice_file(path.read_text())


def cmd_run(args) -> int:
    source = Path(args.file).read_text()
    program = parse_program(source)
    solver_name = args.solver or program.solver_name or "none"
    lattice = _load_lattice(program.lattice_ref, Path(args.file).parent)
    solver = make_solver(solver_name, lattice)
    goals, names = parse_query(args.query)
    engine = Engine(program, solver, _mode(args.mode), _strategy(args.strategy),
                    budget=args.budget, trace=args.trace,
                    newest_first=args.newest_first)
    report = engine.solve(goals, names)
    if args.json:
        print(json.dumps(reports.report_json(solver, report), indent=2))
    else:
        print(reports.render_report(solver, report))
        if args.trace:
            print("\ntrace:")
            print(reports.render_trace(report))
    if args.oracle:
        gate = oracle_gate(program, args.query, solver_name,
                           _strategy(args.strategy), budget=args.budget,
                           lattice=lattice)
        verdict = "PASS" if gate["ok"] else "FAIL"
        print(f"\noracle gate: {verdict} "
              f"(engine answers: {gate.get('engine_answers', '?')}, "
              f"fixpoint facts: {gate.get('oracle_facts', '?')})")
        if not gate["ok"]:
            return 1
    return 0


def cmd_matrix(args) -> int:
    cells = corpus.termination_matrix(budget=args.budget)
    if args.json:
        print(json.dumps(reports.matrix_json(cells), indent=2))
    else:
        print(reports.render_matrix(cells))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        reports.write_matrix_csv(cells, out / "matrix.csv")
        print(f"wrote {out / 'matrix.csv'}", file=sys.stderr)
    expected = corpus.MATRIX_EXPECTED
    ok = all(expected[(c.recursion, c.graph)][c.system] == c.terminates
             for c in cells)
    return 0 if ok else 1


def cmd_bench(args) -> int:
    strategies = [_strategy(s) for s in args.strategies] if args.strategies else None
    rows = corpus.run_bench(strategies=strategies, budget=args.budget)
    print(reports.render_bench(rows))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "bench.csv"
    fig_path = out / "bench_counts.png"
    reports.write_bench_csv(rows, csv_path)
    reports.write_bench_figure(rows, fig_path)
    print(f"wrote {csv_path} and {fig_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tclp",
        description="tabled constraint logic programming engine")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a query against a program file")
    run.add_argument("file")
    run.add_argument("--query", required=True)
    run.add_argument("--mode", choices=["sld", "tab", "tclp"], default="tclp")
    run.add_argument("--solver", choices=["q", "d", "lat", "none"])
    run.add_argument("--strategy", choices=["none", "discard", "remove", "both"],
                     default="both")
    run.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    run.add_argument("--oracle", action="store_true",
                     help="cross-check against the bottom-up fixpoint")
    run.add_argument("--json", action="store_true")
    run.add_argument("--trace", action="store_true")
    run.add_argument("--newest-first", action="store_true",
                     help="scan generators newest-first in the call phase")
    run.set_defaults(fn=cmd_run)

    matrix = sub.add_parser("matrix", help="emit the termination table")
    matrix.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    matrix.add_argument("--json", action="store_true")
    matrix.add_argument("--out")
    matrix.set_defaults(fn=cmd_matrix)

    bench = sub.add_parser("bench", help="run the corpus with per-run counts")
    bench.add_argument("--strategies", nargs="*",
                       choices=["none", "discard", "remove", "both"])
    bench.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bench.add_argument("--out", default="reports")
    bench.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TclpError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
