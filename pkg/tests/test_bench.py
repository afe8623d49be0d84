# tests/test_bench.py

import pandas as pd
import pytest

from convex_wgon.errors import InfeasibleError, ParameterError
from convex_wgon.orchestration.bench import COLUMNS, RUNNERS, run_bench, write_bench_csv


def test_bench_table_shape(tmp_path):
    df = run_bench([8], [3, 4], algorithms=("baseline", "doubling"), repetitions=2)
    assert list(df.columns) == COLUMNS
    timing = df[df["kind"] == "timing"]
    ratio = df[df["kind"] == "ratio"]
    assert len(timing) == 4
    assert len(ratio) == 2
    assert (timing["min_s"] <= timing["median_s"]).all()
    assert (timing["median_s"] <= timing["max_s"]).all()
    assert set(ratio["w_ref"]) == {3}
    assert set(ratio["w"]) == {4}

    path = write_bench_csv(df, tmp_path / "bench" / "out.csv")
    assert len(pd.read_csv(path)) == 6


def test_bench_skips_oversized_w_and_single_w_has_no_ratio():
    df = run_bench([5], [3, 9], algorithms=("oracle",), repetitions=1)
    assert list(df["kind"]) == ["timing"]
    assert list(df["w"]) == [3]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_list": [], "w_list": [3]},
        {"n_list": [6], "w_list": []},
        {"n_list": [6], "w_list": [3], "repetitions": 0},
        {"n_list": [6], "w_list": [3], "algorithms": ("quantum",)},
        {"n_list": [6], "w_list": [3], "objective": "minch"},
    ],
)
def test_bench_parameter_errors(kwargs):
    with pytest.raises(ParameterError):
        run_bench(**kwargs)


def test_infeasible_sizes_are_still_timed(monkeypatch):
    def _never(P, w, wf, jobs):
        raise InfeasibleError(f"no convex {w}-gon")

    monkeypatch.setitem(RUNNERS, "baseline", _never)
    df = run_bench([6], [3, 5], algorithms=("baseline",), repetitions=2)
    timing = df[df["kind"] == "timing"]
    assert list(timing["feasible"]) == [False, False]
    assert (timing["median_s"] >= 0).all()
    assert len(df[df["kind"] == "ratio"]) == 1


@pytest.mark.slow
def test_baseline_grows_faster_in_w_than_doubling():
    df = run_bench([40], [4, 32], algorithms=("baseline", "doubling"), repetitions=5)
    ratio = df[df["kind"] == "ratio"].set_index("algorithm")["ratio"]
    assert ratio["baseline"] >= 4.0
    assert ratio["doubling"] < ratio["baseline"]
