"""
Min-size convex hull with outliers, and the budget variant.

MinCH is solved through coverage: for every size m the baseline DP with the
COVERAGE weight (maximized) gives the most points any convex m-gon over P can
cover, and the answer is the smallest m whose best coverage reaches w. The
kept points are exactly the covered ones; everything else is an outlier.
"""

from __future__ import annotations

import logging
import math
import time
from typing import Dict, Optional, Sequence, Union

from convex_wgon.core.geom import PointSet, convex_hull, covered_indices
from convex_wgon.core.weights import Direction, WeightFunction, WeightId, make_weight
from convex_wgon.errors import AuditError, InfeasibleError, ParameterError
from convex_wgon.solvers.dp_baseline import solve_all_sizes
from convex_wgon.solvers.dp_doubling import solve_doubling
from convex_wgon.solvers.results import MinchResult, Solution

logger = logging.getLogger(__name__)

COVERAGE_MAX = make_weight(WeightId.COVERAGE, Direction.MAX)


def _result_for_polygon(
    P: PointSet,
    polygon: Sequence[int],
    algorithm: str,
    value=None,
    stats: Optional[dict] = None,
) -> MinchResult:
    covered = set(covered_indices(P, polygon))
    outliers = tuple(k for k in range(P.n) if k not in covered)
    return MinchResult(
        hull_size=len(polygon),
        polygon=tuple(polygon),
        coverage=len(covered),
        outliers=outliers,
        feasible=True,
        algorithm=algorithm,
        value=value,
        stats=dict(stats or {}),
    )


def audit_minch(P: PointSet, result: MinchResult, w: int) -> None:
    """
    Recompute the hull of the kept points and the coverage partition.

    Raises AuditError on any mismatch.
    """
    kept = [k for k in range(P.n) if k not in set(result.outliers)]
    if result.coverage != len(kept) or result.coverage < w:
        raise AuditError(f"Coverage {result.coverage} does not match {len(kept)} kept points (w={w})")
    if len(result.polygon) >= 3:
        hull = convex_hull(P.points, kept)
        if set(hull) != set(result.polygon):
            raise AuditError(f"Hull of kept points {hull} differs from witness {result.polygon}")
        if set(covered_indices(P, result.polygon)) != set(kept):
            raise AuditError("Containment scan disagrees with the reported kept set")


def _trivial(P: PointSet, w: int) -> MinchResult:
    kept = tuple(range(w))
    return MinchResult(
        hull_size=w,
        polygon=kept,
        coverage=w,
        outliers=tuple(range(w, P.n)),
        feasible=True,
        algorithm="trivial",
    )


def solve_minch(
    P: PointSet,
    w: int,
    algorithm: str = "baseline",
    n_jobs: Optional[int] = 1,
) -> MinchResult:
    """
    Fewest hull vertices after discarding at most n - w points.

    ``algorithm="doubling"`` is experimental: it sweeps m upward and accepts
    the first valid doubling witness covering w points.
    """
    if not isinstance(w, int) or w < 1:
        raise ParameterError(f"w must be an integer >= 1, got {w!r}")
    if w > P.n:
        raise ParameterError(f"w={w} exceeds the number of points n={P.n}")
    P.require_general_position()
    if w <= 2:
        return _trivial(P, w)

    started = time.perf_counter()
    hull_size = len(convex_hull(P.points))
    if algorithm == "doubling":
        result = _minch_by_doubling(P, w, hull_size, n_jobs)
    elif algorithm == "baseline":
        sweep = solve_all_sizes(P, hull_size, COVERAGE_MAX, n_jobs=n_jobs)
        result = None
        for m in sorted(sweep):
            if sweep[m].value >= w:
                result = _result_for_polygon(P, sweep[m].polygon, "baseline")
                break
        if result is None:
            raise AuditError("The full hull failed to reach the coverage target")
    else:
        raise ParameterError(f"Unknown MinCH algorithm: {algorithm!r}")

    result.stats["elapsed_s"] = time.perf_counter() - started
    audit_minch(P, result, w)
    logger.info("MinCH n=%d w=%d -> hull_size=%d (%s)", P.n, w, result.hull_size, result.algorithm)
    return result


def _minch_by_doubling(P: PointSet, w: int, hull_size: int, n_jobs: Optional[int]) -> MinchResult:
    for m in range(3, hull_size + 1):
        try:
            sol = solve_doubling(P, m, COVERAGE_MAX, n_jobs=n_jobs)
        except InfeasibleError:
            continue
        if sol.valid and sol.value >= w:
            return _result_for_polygon(P, sol.polygon, "doubling-experimental")
    logger.warning("Experimental doubling MinCH found no witness; falling back to the full hull")
    return _result_for_polygon(P, convex_hull(P.points), "doubling-experimental")


def solve_budget(
    P: PointSet,
    budget: Union[int, float],
    wf: WeightFunction,
    n_jobs: Optional[int] = 1,
) -> MinchResult:
    """
    Smallest m whose optimal m-gon weight is within ``budget``.

    Only AREA2 and PERIMETER (minimized) are accepted. A result with
    feasible=False is returned when no polygon meets the budget.
    """
    if wf.id not in (WeightId.AREA2, WeightId.PERIMETER) or wf.direction != Direction.MIN or wf.empty:
        raise ParameterError(f"Budget mode supports AREA2/PERIMETER minimization, got {wf.name}")
    if isinstance(budget, bool) or not isinstance(budget, (int, float)) or not math.isfinite(budget) or budget < 0:
        raise ParameterError(f"Budget must be a finite non-negative number, got {budget!r}")
    P.require_general_position()

    started = time.perf_counter()
    hull_size = len(convex_hull(P.points))
    sweep: Dict[int, Solution] = solve_all_sizes(P, hull_size, wf, n_jobs=n_jobs)
    stats = {"elapsed_s": time.perf_counter() - started, "budget": budget, "sizes": sorted(sweep)}
    for m in sorted(sweep):
        if wf.within_budget(sweep[m].value, budget):
            return _result_for_polygon(P, sweep[m].polygon, "baseline", value=sweep[m].value, stats=stats)

    logger.info("Budget %s is below every convex polygon weight (%s)", budget, wf.name)
    return MinchResult(
        hull_size=0,
        polygon=(),
        coverage=0,
        outliers=tuple(range(P.n)),
        feasible=False,
        algorithm="baseline",
        stats=stats,
    )
