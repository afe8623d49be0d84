# tests/test_cli.py

import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pandas as pd
import pytest

from convex_wgon.cli.main import main
from convex_wgon.io.instances import InstanceFile, read_instance, write_instance
from convex_wgon.io.solution_file import read_solution_file, strip_timings
from convex_wgon.observability.run_logger import load_run_log

FIVE_POINTS = [(0, 0), (10, 0), (10, 10), (0, 10), (4, 5)]


def _write(tmp_path: Path, name: str, points) -> Path:
    return write_instance(InstanceFile(name=name, points=list(points)), tmp_path / f"{name}.csv")


def _error_payload(stderr: str) -> dict:
    line = next(l for l in stderr.splitlines() if l.startswith("{"))
    return json.loads(line)


@pytest.fixture
def five_csv(tmp_path: Path) -> Path:
    return _write(tmp_path, "five", FIVE_POINTS)


# -------------------------------------------------------------------
# gen
# -------------------------------------------------------------------

def test_gen_writes_instance(tmp_path: Path) -> None:
    out = tmp_path / "inst" / "u10.json"
    assert main(["gen", "--n", "10", "--seed", "3", "--out", str(out)]) == 0
    inst = read_instance(out)
    assert inst.n == 10
    assert inst.seed == 3


def test_gen_to_stdout(capsys) -> None:
    assert main(["gen", "--n", "5", "--seed", "1", "--shape", "annulus", "--range", "50"]) == 0
    raw = json.loads(capsys.readouterr().out)
    assert raw["generator"]["shape"] == "annulus"
    assert len(raw["points"]) == 5


def test_gen_impossible_grid(capsys) -> None:
    assert main(["gen", "--n", "5", "--range", "2"]) == 9
    assert _error_payload(capsys.readouterr().err)["error"] == "generation_failed"


# -------------------------------------------------------------------
# solve / oracle
# -------------------------------------------------------------------

def test_solve_min_area(five_csv: Path, tmp_path: Path) -> None:
    out = tmp_path / "sol.json"
    assert main(["solve", str(five_csv), "--w", "3", "--out", str(out)]) == 0
    doc = read_solution_file(out)
    assert doc["value_twice_area"] == 10
    assert doc["area"] == 5.0
    assert doc["algorithm"] == "baseline"
    assert doc["valid"] is True


def test_solve_minch_to_stdout(five_csv: Path, capsys) -> None:
    assert main(["solve", str(five_csv), "--objective", "minch", "--w", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["hull_size"] == 3
    assert doc["coverage"] == 4
    assert len(doc["outliers"]) == 1


def test_minch_doubling_needs_flag(five_csv: Path, capsys) -> None:
    args = ["solve", str(five_csv), "--objective", "minch", "--w", "4", "--algorithm", "doubling"]
    assert main(args) == 2
    assert main(args + ["--experimental-doubling"]) == 0


def test_solve_doubling(five_csv: Path, capsys) -> None:
    assert main(["solve", str(five_csv), "--w", "3", "--algorithm", "doubling", "--strict-seam"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["algorithm"] == "doubling-strict"
    assert doc["value"] == 10


def test_oracle_command(five_csv: Path, capsys) -> None:
    assert main(["oracle", str(five_csv), "--w", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["algorithm"] == "oracle"
    assert doc["value"] == 10


@pytest.mark.parametrize("w", ["2", "6"])
def test_bad_w_exits_2(five_csv: Path, w: str, capsys) -> None:
    assert main(["solve", str(five_csv), "--w", w]) == 2
    assert _error_payload(capsys.readouterr().err)["error"] == "invalid_parameter"


def test_missing_w_exits_2(five_csv: Path) -> None:
    assert main(["solve", str(five_csv)]) == 2


def test_collinear_instance_exits_3_unless_perturbed(tmp_path: Path, capsys) -> None:
    path = _write(tmp_path, "line", [(0, 0), (1, 1), (2, 2), (0, 5)])
    assert main(["solve", str(path), "--w", "3"]) == 3
    payload = _error_payload(capsys.readouterr().err)
    assert payload["error"] == "general_position"
    assert payload["violations"] == [{"kind": "collinear", "indices": [0, 1, 2]}]

    assert main(["solve", str(path), "--w", "3", "--perturb"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["perturbation"]["scale"] == 8


def test_infeasible_exits_4(tmp_path: Path, capsys) -> None:
    path = _write(tmp_path, "tri", [(0, 0), (10, 0), (0, 10), (2, 3)])
    assert main(["solve", str(path), "--w", "4"]) == 4
    assert _error_payload(capsys.readouterr().err)["error"] == "infeasible"


def test_missing_instance_exits_6(tmp_path: Path) -> None:
    assert main(["solve", str(tmp_path / "missing.csv"), "--w", "3"]) == 6


def test_oracle_guardrail_exits_8(tmp_path: Path, capsys) -> None:
    path = _write(tmp_path, "parabola", [(k, k * k) for k in range(15)])
    assert main(["oracle", str(path), "--w", "3"]) == 8
    assert _error_payload(capsys.readouterr().err)["error"] == "guardrail"


def test_budget_below_every_polygon(five_csv: Path, capsys) -> None:
    assert main(["solve", str(five_csv), "--objective", "budget", "--budget", "0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["feasible"] is False
    assert doc["polygon"] == []


def test_budget_with_oracle(five_csv: Path, capsys) -> None:
    assert main(["oracle", str(five_csv), "--objective", "budget", "--budget", "40"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["hull_size"] == 3
    assert doc["value_twice_area"] == 10


def test_solve_max_empty_area(five_csv: Path, capsys) -> None:
    assert main(["solve", str(five_csv), "--objective", "max-empty-area", "--w", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value_twice_area"] == 110
    assert doc["weight"] == "AREA2"
    assert doc["empty"] is True
    assert 4 in doc["polygon"]


@pytest.mark.parametrize(
    "extra",
    [
        ["--objective", "budget", "--budget", "40", "--algorithm", "doubling"],
        ["--objective", "minch", "--w", "4", "--strict-seam"],
        ["--objective", "minch", "--w", "4", "--algorithm", "doubling", "--experimental-doubling", "--strict-seam"],
        ["--w", "3", "--strict-seam"],
        ["--w", "3", "--budget", "40"],
    ],
)
def test_conflicting_flags_exit_2(five_csv: Path, extra, capsys) -> None:
    assert main(["solve", str(five_csv)] + extra) == 2
    assert _error_payload(capsys.readouterr().err)["error"] == "invalid_parameter"


def test_parallel_output_matches_sequential(tmp_path: Path) -> None:
    inst = tmp_path / "u12.json"
    assert main(["gen", "--n", "12", "--seed", "5", "--out", str(inst)]) == 0
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["solve", str(inst), "--w", "5", "--out", str(a)]) == 0
    assert main(["solve", str(inst), "--w", "5", "--threads", "2", "--out", str(b)]) == 0
    assert strip_timings(read_solution_file(a)) == strip_timings(read_solution_file(b))


# -------------------------------------------------------------------
# Run log
# -------------------------------------------------------------------

def test_runs_are_logged(five_csv: Path, tmp_path: Path) -> None:
    assert main(["solve", str(five_csv), "--w", "3", "--out", str(tmp_path / "s.json")]) == 0
    bad = _write(tmp_path, "tri", [(0, 0), (10, 0), (0, 10), (2, 3)])
    assert main(["solve", str(bad), "--w", "4"]) == 4
    df = load_run_log()
    assert list(df["status"]) == ["success", "infeasible"]
    assert list(df["command"]) == ["solve", "solve"]
    assert df.loc[0, "value"] == 10.0


def test_no_run_log_flag(five_csv: Path, duckdb_path: Path) -> None:
    assert main(["solve", str(five_csv), "--w", "3", "--no-run-log"]) == 0
    assert not duckdb_path.exists()


def test_unexpected_failure_is_logged(five_csv: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    def explode(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr("convex_wgon.cli.main.solve_exact_wgon", explode)
    assert main(["solve", str(five_csv), "--w", "3"]) == 1
    df = load_run_log()
    assert list(df["status"]) == ["unexpected"]
    assert df["value"].isna().all()


# -------------------------------------------------------------------
# Figures, conformance, bench
# -------------------------------------------------------------------

def test_svg_out_and_render(tmp_path: Path) -> None:
    path = _write(tmp_path, "line", [(0, 0), (1, 1), (2, 2), (0, 5), (5, 0)])
    sol = tmp_path / "sol.json"
    svg = tmp_path / "fig" / "sol.svg"
    args = ["solve", str(path), "--objective", "minch", "--w", "4", "--perturb", "--out", str(sol)]
    assert main(args + ["--svg-out", str(svg)]) == 0
    root = ET.parse(svg).getroot()
    glyphs = [el for el in root.iter() if "pt" in el.get("class", "").split()]
    assert len(glyphs) == 5

    again = tmp_path / "again.svg"
    assert main(["render", str(sol), str(path), "--out", str(again)]) == 0
    assert again.read_text() == svg.read_text()


def test_render_rejects_foreign_instance(five_csv: Path, tmp_path: Path) -> None:
    sol = tmp_path / "sol.json"
    assert main(["solve", str(five_csv), "--w", "3", "--out", str(sol)]) == 0
    other = _write(tmp_path, "other", [(0, 0), (7, 0), (0, 7)])
    assert main(["render", str(sol), str(other), "--out", str(tmp_path / "x.svg")]) == 2


def test_conformance_command(tmp_path: Path) -> None:
    out = tmp_path / "conf.csv"
    args = ["conformance", "--n", "7", "--count", "3", "--seed", "2", "--w", "3", "5", "--both-modes", "--out", str(out)]
    assert main(args) == 0
    df = pd.read_csv(out)
    assert len(df) == 12
    assert set(df["mode"]) == {"default", "strict-seam"}
    assert df[df["w"] == 3]["agreement"].all()


def test_bench_command(tmp_path: Path) -> None:
    out = tmp_path / "bench.csv"
    args = ["bench", "--n", "7", "--w", "3", "4", "--repetitions", "1", "--algorithms", "baseline", "--out", str(out)]
    assert main(args) == 0
    df = pd.read_csv(out)
    assert list(df["kind"]) == ["timing", "timing", "ratio"]
