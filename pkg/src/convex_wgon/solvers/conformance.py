"""
Doubling vs baseline conformance.

The report measures agreement; it never asserts it. Rows are produced in
(instance, w) order so two runs on the same corpus give identical reports
once timings are dropped.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd

from convex_wgon.core.geom import PointSet
from convex_wgon.core.weights import WeightFunction, WeightValue
from convex_wgon.errors import InfeasibleError
from convex_wgon.solvers.dp_baseline import solve_exact_wgon
from convex_wgon.solvers.dp_doubling import solve_doubling
from convex_wgon.solvers.minch import solve_minch

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ("baseline_s", "doubling_s")


@dataclass
class ConformanceRow:
    instance: str
    n: int
    w: int
    weight: str
    mode: str
    baseline_value: Optional[WeightValue]
    doubling_value: Optional[WeightValue]
    doubling_valid: bool
    agreement: bool
    baseline_s: float
    doubling_s: float


@dataclass
class ConformanceReport:
    rows: List[ConformanceRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        columns = list(ConformanceRow.__dataclass_fields__)
        return pd.DataFrame([asdict(r) for r in self.rows], columns=columns)

    def agreement_rate(self, w: Optional[int] = None) -> Optional[float]:
        rows = [r for r in self.rows if w is None or r.w == w]
        if not rows:
            return None
        return sum(r.agreement for r in rows) / len(rows)

    def summary(self) -> pd.DataFrame:
        """Agreement and validity rates per (w, mode)."""
        df = self.to_frame()
        if df.empty:
            return pd.DataFrame(columns=["w", "mode", "rows", "agreement_rate", "valid_rate"])
        grouped = df.groupby(["w", "mode"], sort=True)
        return grouped.agg(
            rows=("agreement", "size"),
            agreement_rate=("agreement", "mean"),
            valid_rate=("doubling_valid", "mean"),
        ).reset_index()

    def to_csv(self, path: Union[str, Path], include_timings: bool = True) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        df = self.to_frame()
        if not include_timings:
            df = df.drop(columns=list(TIMING_COLUMNS))
        df.to_csv(path, index=False)
        return path


def _name_of(item: Union[PointSet, Tuple[str, PointSet]], idx: int) -> Tuple[str, PointSet]:
    if isinstance(item, PointSet):
        return f"instance_{idx:04d}", item
    return item[0], item[1]


def run_conformance(
    instances: Sequence[Union[PointSet, Tuple[str, PointSet]]],
    w_values: Sequence[int],
    wf: WeightFunction,
    strict_seam: bool = False,
    n_jobs: Optional[int] = 1,
) -> ConformanceReport:
    """
    Run the baseline and the doubling DP on every (instance, w) pair with w <= n.

    ``instances`` holds PointSets or (name, PointSet) pairs.
    """
    report = ConformanceReport()
    mode = "strict-seam" if strict_seam else "default"
    for idx, item in enumerate(instances):
        name, P = _name_of(item, idx)
        for w in w_values:
            if w > P.n:
                continue
            t0 = time.perf_counter()
            try:
                base = solve_exact_wgon(P, w, wf, n_jobs=n_jobs)
                base_value: Optional[WeightValue] = base.value
            except InfeasibleError:
                base_value = None
            t1 = time.perf_counter()
            try:
                dbl = solve_doubling(P, w, wf, strict_seam=strict_seam, n_jobs=n_jobs)
                dbl_value: Optional[WeightValue] = dbl.value
                dbl_valid = dbl.valid
            except InfeasibleError:
                dbl_value, dbl_valid = None, False
            t2 = time.perf_counter()

            if base_value is None or dbl_value is None:
                agreement = base_value is None and dbl_value is None
            else:
                agreement = dbl_valid and wf.values_equal(base_value, dbl_value)
            report.rows.append(
                ConformanceRow(
                    instance=name,
                    n=P.n,
                    w=w,
                    weight=wf.name,
                    mode=mode,
                    baseline_value=base_value,
                    doubling_value=dbl_value,
                    doubling_valid=dbl_valid,
                    agreement=agreement,
                    baseline_s=t1 - t0,
                    doubling_s=t2 - t1,
                )
            )
    logger.info(
        "Conformance (%s, %s): %d rows, agreement=%s",
        wf.name, mode, len(report), report.agreement_rate(),
    )
    return report


def run_minch_conformance(
    instances: Sequence[Union[PointSet, Tuple[str, PointSet]]],
    w_values: Sequence[int],
    n_jobs: Optional[int] = 1,
) -> ConformanceReport:
    """Same report shape for MinCH: baseline hull sizes vs the experimental doubling sweep."""
    report = ConformanceReport()
    for idx, item in enumerate(instances):
        name, P = _name_of(item, idx)
        for w in w_values:
            if w > P.n:
                continue
            t0 = time.perf_counter()
            base = solve_minch(P, w, algorithm="baseline", n_jobs=n_jobs)
            t1 = time.perf_counter()
            dbl = solve_minch(P, w, algorithm="doubling", n_jobs=n_jobs)
            t2 = time.perf_counter()
            report.rows.append(
                ConformanceRow(
                    instance=name,
                    n=P.n,
                    w=w,
                    weight="MINCH",
                    mode="experimental",
                    baseline_value=base.hull_size,
                    doubling_value=dbl.hull_size,
                    doubling_valid=dbl.feasible,
                    agreement=base.hull_size == dbl.hull_size,
                    baseline_s=t1 - t0,
                    doubling_s=t2 - t1,
                )
            )
    return report
