"""Report rendering, JSON schema, CSV/figure output, CLI end to end."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from tclp import corpus, reports
from tclp.corpus import run_text
from tclp.engine import Mode

DIST = corpus.TABLE_DIST + corpus.DIST_CLP_LEFT + corpus.GRAPH_CYCLIC_CLP


def test_report_json_schema():
    engine, report = run_text(DIST, corpus.QUERY_CLP, budget=100_000)
    doc = reports.report_json(engine.solver, report)
    assert set(doc) >= {"answers", "counts", "steps", "status", "mode",
                        "strategy", "solver"}
    assert doc["status"] == "complete"
    assert doc["counts"] == {"saved": 3, "discarded": 0, "removed": 0,
                             "returned": 3}
    for answer in doc["answers"]:
        assert set(answer) == {"bindings", "constraints"}
    assert {"Y = b", "Y = a"} <= {f"Y = {a['bindings'].get('Y')}"
                                  for a in doc["answers"]}


def test_render_report_text():
    engine, report = run_text(DIST, corpus.QUERY_CLP, budget=100_000)
    text = reports.render_report(engine.solver, report)
    assert "answer 1:" in text and "status: complete" in text


def test_matrix_rendering_marks():
    cells = [
        corpus.MatrixCell("left", "cyclic", "LP", "budget_exhausted", 10, 0, 1.0),
        corpus.MatrixCell("left", "cyclic", "TCLP", "complete", 10, 3, 1.0),
    ]
    text = reports.render_matrix(cells)
    assert "yes" in text and "no" in text


def test_bench_csv_and_figure(tmp_path):
    rows = corpus.run_bench(strategies=None, budget=50_000)
    csv_path = tmp_path / "bench.csv"
    fig_path = tmp_path / "bench_counts.png"
    reports.write_bench_csv(rows, csv_path)
    reports.write_bench_figure(rows, fig_path)
    assert csv_path.exists() and csv_path.read_text().startswith("benchmark,")
    assert fig_path.exists() and fig_path.stat().st_size > 1000
    header = csv_path.read_text().splitlines()[0].split(",")
    for col in ("saved", "discarded", "removed", "returned"):
        assert col in header


def _run_cli(args, cwd=None):
    return subprocess.run([sys.executable, "-m", "tclp.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def dist_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("programs") / "dist.tclp"
    path.write_text(DIST)
    return path


def test_cli_run_text_output(dist_file):
    out = _run_cli(["run", str(dist_file), "--query", corpus.QUERY_CLP])
    assert out.returncode == 0, out.stderr
    assert "answer 1:" in out.stdout
    assert "status: complete" in out.stdout


def test_cli_run_json(dist_file):
    out = _run_cli(["run", str(dist_file), "--query", corpus.QUERY_CLP, "--json"])
    doc = json.loads(out.stdout)
    assert doc["counts"]["returned"] == 3


def test_cli_run_oracle_gate(dist_file):
    out = _run_cli(["run", str(dist_file), "--query", corpus.QUERY_CLP,
                    "--oracle"])
    assert out.returncode == 0, out.stdout + out.stderr
    assert "oracle gate: PASS" in out.stdout


def test_cli_mode_and_budget_flags(dist_file):
    out = _run_cli(["run", str(dist_file), "--query", corpus.QUERY_CLP,
                    "--budget", "20"])
    assert "budget_exhausted" in out.stdout
    out = _run_cli(["run", str(dist_file), "--query", corpus.QUERY_CLP,
                    "--mode", "tab"])
    assert out.returncode == 0


def test_cli_trace(dist_file):
    out = _run_cli(["run", str(dist_file), "--query", corpus.QUERY_CLP,
                    "--trace"])
    assert "trace:" in out.stdout
    assert "[ 6]" in out.stdout    # at least one suspension


def test_cli_load_error_is_reported(tmp_path):
    bad = tmp_path / "bad.tclp"
    bad.write_text("p(X :- q.\n")
    out = _run_cli(["run", str(bad), "--query", "?- p(X)."])
    assert out.returncode == 2
    assert "error:" in out.stderr


def test_cli_bench_writes_outputs(tmp_path):
    out = _run_cli(["bench", "--strategies", "both", "--budget", "50000",
                    "--out", str(tmp_path)])
    assert out.returncode == 0, out.stderr
    assert (tmp_path / "bench.csv").exists()
    assert (tmp_path / "bench_counts.png").exists()


def test_cli_matrix_small_budget(tmp_path):
    # a tiny budget still classifies the terminating TCLP column correctly
    out = _run_cli(["matrix", "--budget", "30000", "--json", "--out",
                    str(tmp_path)])
    cells = json.loads(out.stdout)
    tclp_cells = [c for c in cells if c["system"] == "TCLP"]
    assert all(c["terminates"] for c in tclp_cells)
    assert (tmp_path / "matrix.csv").exists()
