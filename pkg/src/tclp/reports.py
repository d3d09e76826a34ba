"""Report rendering: answer listings, JSON, the termination table, bench
CSV, and the bench figure.

Answers print with constraints in canonical normal form (sorted variables,
lowest-term rationals), so goldens can be textual. The bench runner writes
one delimited file plus a figure summarizing the answer-management counters
next to it.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from .engine import QueryAnswer, RunReport
from .program import render_term
from .solvers.base import ConstraintSolver


def answer_strings(solver: ConstraintSolver, answer: QueryAnswer) -> tuple:
    """(bindings dict, constraint strings) with query variable names."""
    names_by_pos = {pos: name for name, pos in answer.free_vars}
    labels = [names_by_pos.get(i, f"_V{i}") for i in range(answer.proj.var_count)]
    bindings = {name: render_term(t) for name, t in answer.bindings.items()}
    constraints = solver.render_projected(answer.proj, labels)
    return bindings, constraints


def render_report(solver: ConstraintSolver, report: RunReport) -> str:
    lines = []
    for i, answer in enumerate(report.answers, 1):
        bindings, constraints = answer_strings(solver, answer)
        parts = [f"{k} = {v}" for k, v in sorted(bindings.items())] + constraints
        lines.append(f"answer {i}: " + (", ".join(parts) if parts else "true"))
    if not report.answers:
        lines.append("no answers")
    c = report.counters
    lines.append(f"status: {report.status}   steps: {report.steps}   "
                 f"time: {report.elapsed_ms:.1f} ms")
    lines.append(f"answers saved: {c.saved}  discarded: {c.discarded}  "
                 f"removed: {c.removed}  returned: {c.returned}")
    lines.append(f"resolutions: {c.resolutions}  resumptions: {c.resumptions}  "
                 f"entailment checks: {c.entail_checks + c.compare_checks}  "
                 f"generators: {report.n_generators}")
    return "\n".join(lines)


def report_json(solver: ConstraintSolver, report: RunReport) -> dict:
    answers = []
    for answer in report.answers:
        bindings, constraints = answer_strings(solver, answer)
        answers.append({"bindings": bindings, "constraints": constraints})
    c = report.counters
    return {
        "answers": answers,
        "counts": {"saved": c.saved, "discarded": c.discarded,
                   "removed": c.removed, "returned": c.returned},
        "steps": report.steps,
        "status": report.status,
        "mode": report.mode,
        "strategy": report.strategy,
        "solver": report.solver,
        "elapsed_ms": round(report.elapsed_ms, 3),
    }


def render_trace(report: RunReport) -> str:
    lines = []
    for step, info in report.trace:
        detail = "  ".join(f"{k}={v}" for k, v in info.items() if v is not None)
        lines.append(f"[{step:2d}] {detail}")
    return "\n".join(lines)


# -- termination matrix ----------------------------------------------------------


def render_matrix(cells: Sequence) -> str:
    systems = ["LP", "CLP", "TAB", "TCLP"]
    by_row: dict = {}
    for c in cells:
        by_row.setdefault((c.graph, c.recursion), {})[c.system] = c
    lines = []
    header = f"{'graph':9s} {'recursion':10s}" + "".join(f"{s:>7s}" for s in systems)
    lines.append(header)
    lines.append("-" * len(header))
    for graph in ("acyclic", "cyclic"):
        for recursion in ("left", "right"):
            row = by_row.get((graph, recursion), {})
            marks = []
            for s in systems:
                cell = row.get(s)
                marks.append("yes" if cell and cell.terminates else
                             "no" if cell else "-")
            lines.append(f"{graph:9s} {recursion:10s}" +
                         "".join(f"{m:>7s}" for m in marks))
    lines.append("(yes = terminates, no = step budget exhausted)")
    return "\n".join(lines)


def matrix_json(cells: Sequence) -> list:
    return [{"graph": c.graph, "recursion": c.recursion, "system": c.system,
             "terminates": c.terminates, "steps": c.steps,
             "answers": c.answers, "elapsed_ms": round(c.elapsed_ms, 1)}
            for c in cells]


# -- bench output: delimited rows plus a figure ----------------------------------

BENCH_FIELDS = ["benchmark", "mode", "strategy", "status", "answers", "steps",
                "elapsed_ms", "saved", "discarded", "removed", "returned",
                "resolutions", "resumptions", "entail_checks", "compare_checks",
                "constraint_adds", "projections", "applies"]


def render_bench(rows: Sequence) -> str:
    head = (f"{'benchmark':12s} {'strategy':9s} {'status':18s}"
            f"{'saved':>7s}{'disc':>7s}{'rem':>6s}{'ret':>6s}{'steps':>9s}")
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r['benchmark']:12s} {r['strategy']:9s} {r['status']:18s}"
                     f"{r['saved']:>7d}{r['discarded']:>7d}{r['removed']:>6d}"
                     f"{r['returned']:>6d}{r['steps']:>9d}")
    return "\n".join(lines)


def write_bench_csv(rows: Sequence, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)


def write_bench_figure(rows: Sequence, path: Path) -> None:
    """Grouped bars of the answer-management counters per benchmark."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    benchmarks = sorted({r["benchmark"] for r in rows})
    strategies = sorted({r["strategy"] for r in rows})
    fig, axes = plt.subplots(1, len(benchmarks), sharey=False,
                             figsize=(3.2 * max(len(benchmarks), 1), 3.6))
    if len(benchmarks) == 1:
        axes = [axes]
    kinds = ["saved", "discarded", "removed", "returned"]
    width = 0.8 / len(kinds)
    for ax, bench in zip(axes, benchmarks):
        data = {r["strategy"]: r for r in rows if r["benchmark"] == bench}
        xs = range(len(strategies))
        for k, kind in enumerate(kinds):
            vals = [data[s][kind] if s in data else 0 for s in strategies]
            ax.bar([x + k * width for x in xs], vals, width, label=kind)
        ax.set_title(bench, fontsize=9)
        ax.set_xticks([x + 1.5 * width for x in xs])
        ax.set_xticklabels(strategies, rotation=45, fontsize=7)
        ax.set_yscale("symlog")
        ax.tick_params(labelsize=7)
    axes[0].set_ylabel("answers")
    axes[0].legend(fontsize=7)
    fig.suptitle("answer management by strategy")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_matrix_csv(cells: Sequence, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["graph", "recursion", "system", "terminates",
                         "steps", "answers", "elapsed_ms"])
        for c in cells:
            writer.writerow([c.graph, c.recursion, c.system,
                             c.terminates, c.steps, c.answers,
                             round(c.elapsed_ms, 1)])
