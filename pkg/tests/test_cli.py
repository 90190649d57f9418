"""Exit codes and output formats of the command-line front door."""

import json
import math
import subprocess
import sys

import pytest

from alphastep import cli
from alphastep.harness import SweepReport

P2_JSON = '{"degree": 2, "roots": [[0.5, 0], [-0.5, 0]]}'
P3_JSON = '{"degree": 3, "roots": [[0, 0], [0.9, 0], [-0.9, 0]]}'


def test_solve_certifies(capsys):
    rc = cli.main(["solve", "--poly", P2_JSON])
    assert rc == 0
    out = capsys.readouterr().out
    assert "certified z" in out and "N = 5" in out


def test_solve_reads_polynomial_from_file(tmp_path, capsys):
    path = tmp_path / "poly.json"
    path.write_text(P2_JSON)
    assert cli.main(["solve", "--poly", str(path)]) == 0


def test_solve_writes_jsonl_trace(tmp_path):
    out = tmp_path / "trace.jsonl"
    assert cli.main(["solve", "--poly", P2_JSON, "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    summary = json.loads(lines[-1])
    assert summary["outcome"] == "Certified"
    # identical invocation produces identical bytes
    out2 = tmp_path / "trace2.jsonl"
    cli.main(["solve", "--poly", P2_JSON, "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


@pytest.mark.parametrize("bad", [
    "not json at all",
    '{"degree": 2, "roots": [[0.5, 0]]}',
    '{"degree": 2, "coeffs": [[1, 0], [0, 0], [3, 0]]}',
])
def test_bad_input_exits_2(bad, capsys):
    assert cli.main(["solve", "--poly", bad]) == 2
    assert "input error" in capsys.readouterr().err


def test_step_cutoff_exits_3(capsys):
    rc = cli.main(["solve", "--poly", P2_JSON, "--max-steps", "1"])
    assert rc == 3
    assert "MaxStepsExceeded" in capsys.readouterr().err


def test_singular_start_exits_4(capsys):
    # roots at +-2 put the degree-2 start circle of C=2 through a root
    poly = '{"degree": 2, "roots": [[2, 0], [-2, 0]]}'
    rc = cli.main(["solve", "--poly", poly, "--C", "2.0", "--t", "0.0"])
    assert rc == 4
    assert "singular" in capsys.readouterr().err


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = cli.main(["sweep", "--poly", P2_JSON, "--M", "16",
                   "--format", "csv", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,N,outcome,beta_plus,wN_ratio"
    assert len(lines) == 17
    assert "mean cost" in capsys.readouterr().err


def test_sweep_json_report(tmp_path):
    out = tmp_path / "sweep.json"
    rc = cli.main(["sweep", "--poly", P2_JSON, "--M", "16",
                   "--format", "json", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["M"] == 16 and rep["mean_cost"] <= rep["bound"]


def test_bound_violation_exits_5(monkeypatch, capsys):
    # the real bound has enormous slack; force a violating report to prove
    # the exit-code plumbing
    doctored = SweepReport(poly_id="x", d=2, r=1.5, M=16, costs=[10_000],
                           mean_cost=10_000.0, bound=900.0, failures=[],
                           beta_plus_mean=math.nan, wN_over_rho_min=1.0)
    monkeypatch.setattr(cli, "sweep_average_cost",
                        lambda *a, **k: doctored)
    assert cli.main(["sweep", "--poly", P2_JSON, "--M", "16"]) == 5


def test_verify_passes(tmp_path):
    out = tmp_path / "verify.txt"
    rc = cli.main(["verify", "--d-max", "3", "--only", "log-integral",
                   "--out", str(out)])
    assert rc == 0
    assert "0 failed" in out.read_text()


def test_verify_failure_exits_6(monkeypatch):
    monkeypatch.setattr(cli, "verify_suite",
                        lambda **k: [("doctored-check", "fail", "boom")])
    assert cli.main(["verify"]) == 6


def test_certify_json(capsys):
    rc = cli.main(["certify", "--poly", P2_JSON, "--t", "0.0"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["certified"] is False      # alpha(1.5) = 2/9


def test_profile_json(capsys):
    rc = cli.main(["profile", "--poly", P2_JSON])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["K_f"] == pytest.approx(16.0, rel=1e-8)
    assert payload["critical"][0]["m"] == 1


def test_plot_trace_svg(tmp_path):
    out = tmp_path / "trace.svg"
    assert cli.main(["plot", "--poly", P2_JSON, "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_plot_voronoi_svg(tmp_path):
    out = tmp_path / "vor.svg"
    rc = cli.main(["plot", "--poly", P3_JSON, "--only", "voronoi",
                   "--out", str(out)])
    assert rc == 0
    assert out.read_text().startswith("<svg")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "alphastep.cli", "solve", "--poly", P2_JSON],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "certified z" in proc.stdout
