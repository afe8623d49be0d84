"""
Wall-clock scaling harness.

Times every (n, w, algorithm) cell over seeded instances and derives the
growth ratio t(w_max) / t(w_min) per (n, algorithm). The harness only
measures; judging the ratios is left to whoever reads the table.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from convex_wgon.core.geom import PointSet
from convex_wgon.core.weights import WeightFunction, weight_for_objective
from convex_wgon.errors import InfeasibleError, ParameterError
from convex_wgon.io.instances import gen
from convex_wgon.solvers.dp_baseline import solve_exact_wgon
from convex_wgon.solvers.dp_doubling import solve_doubling
from convex_wgon.solvers.oracle import oracle_wgon

logger = logging.getLogger(__name__)

COLUMNS = [
    "kind", "n", "w", "w_ref", "algorithm", "repetitions", "feasible", "median_s", "min_s", "max_s", "ratio",
]

Runner = Callable[[PointSet, int, WeightFunction, Optional[int]], object]

RUNNERS: Dict[str, Runner] = {
    "baseline": lambda P, w, wf, jobs: solve_exact_wgon(P, w, wf, n_jobs=jobs),
    "doubling": lambda P, w, wf, jobs: solve_doubling(P, w, wf, n_jobs=jobs),
    "doubling-strict": lambda P, w, wf, jobs: solve_doubling(P, w, wf, strict_seam=True, n_jobs=jobs),
    "oracle": lambda P, w, wf, jobs: oracle_wgon(P, w, wf, n_jobs=jobs),
}


def _time_runs(run: Callable[[], object], repetitions: int) -> Tuple[List[float], bool]:
    """Wall-times of ``repetitions`` runs; an infeasible size still does the full table work."""
    samples = []
    feasible = True
    for _ in range(repetitions):
        t0 = time.perf_counter()
        try:
            run()
        except InfeasibleError:
            feasible = False
        samples.append(time.perf_counter() - t0)
    return samples, feasible


def run_bench(
    n_list: Sequence[int],
    w_list: Sequence[int],
    objective: str = "min-area",
    algorithms: Sequence[str] = ("baseline", "doubling"),
    repetitions: int = 3,
    seed: int = 7,
    coord_range: int = 100,
    n_jobs: Optional[int] = 1,
) -> pd.DataFrame:
    """
    One timing row per (n, w, algorithm) and one ratio row per (n, algorithm).

    Sizes with w > n are skipped. Ratio rows are present only when at least
    two distinct w values were timed for that n.
    """
    if not n_list:
        raise ParameterError("bench needs at least one n")
    if not w_list:
        raise ParameterError("bench needs at least one w")
    if repetitions < 1:
        raise ParameterError(f"repetitions must be >= 1, got {repetitions}")
    unknown = [a for a in algorithms if a not in RUNNERS]
    if unknown or not algorithms:
        raise ParameterError(f"Unknown bench algorithm(s) {unknown}; expected some of {sorted(RUNNERS)}")
    wf = weight_for_objective(objective)

    rows: List[dict] = []
    for n in n_list:
        coord_range_n = max(coord_range, 4 * n)
        P = gen(n, seed, coord_range=coord_range_n).to_point_set()
        ws = sorted({w for w in w_list if w <= n})
        for algorithm in algorithms:
            medians: Dict[int, float] = {}
            for w in ws:
                samples, feasible = _time_runs(lambda: RUNNERS[algorithm](P, w, wf, n_jobs), repetitions)
                medians[w] = float(np.median(samples))
                rows.append(
                    {
                        "kind": "timing",
                        "n": n,
                        "w": w,
                        "w_ref": None,
                        "algorithm": algorithm,
                        "repetitions": repetitions,
                        "feasible": feasible,
                        "median_s": medians[w],
                        "min_s": float(np.min(samples)),
                        "max_s": float(np.max(samples)),
                        "ratio": None,
                    }
                )
                logger.info("bench n=%d w=%d %s median=%.4fs", n, w, algorithm, medians[w])
            if len(ws) >= 2:
                w_min, w_max = ws[0], ws[-1]
                base = medians[w_min]
                rows.append(
                    {
                        "kind": "ratio",
                        "n": n,
                        "w": w_max,
                        "w_ref": w_min,
                        "algorithm": algorithm,
                        "repetitions": repetitions,
                        "feasible": None,
                        "median_s": None,
                        "min_s": None,
                        "max_s": None,
                        "ratio": medians[w_max] / base if base > 0 else float("inf"),
                    }
                )
    return pd.DataFrame(rows, columns=COLUMNS)


def write_bench_csv(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    return path
