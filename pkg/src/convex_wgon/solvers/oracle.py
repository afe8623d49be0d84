"""
Brute-force ground truth at desk scale.

Everything here enumerates subsets and evaluates them directly. There is no
pruning; enumeration that would exceed the budget raises ExhaustedError
instead of returning a partial optimum.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from convex_wgon.core.geom import (
    PointSet,
    angular_sort,
    canonical_rotation,
    convex_hull,
    count_strict_interior,
    covered_indices,
    polygon_area2,
)
from convex_wgon.core.weights import WeightFunction, WeightId, WeightValue, polygon_weight
from convex_wgon.errors import ExhaustedError, InfeasibleError, ParameterError
from convex_wgon.solvers.parallel import ordered_map
from convex_wgon.solvers.results import MinchResult, Solution

logger = logging.getLogger(__name__)

ALGORITHM = "oracle"


@dataclass(frozen=True)
class EnumerationBudget:
    max_subsets: int = 1_000_000
    timeout: Optional[float] = None
    max_points: int = 14


class _Clock:
    def __init__(self, budget: EnumerationBudget):
        self.budget = budget
        self.started = time.perf_counter()
        self.count = 0

    def tick(self) -> None:
        self.count += 1
        if self.budget.timeout is not None and self.count % 1024 == 0:
            if time.perf_counter() - self.started > self.budget.timeout:
                raise ExhaustedError(
                    f"Enumeration exceeded {self.budget.timeout}s after {self.count} subsets"
                )

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.started


def _check_subset_budget(total: int, budget: EnumerationBudget) -> None:
    if total > budget.max_subsets:
        raise ExhaustedError(
            f"Enumeration of {total} subsets exceeds the budget of {budget.max_subsets}"
        )


# ==========================
# Optimal w-gon
# ==========================

def _label(wf: WeightFunction) -> str:
    return "empty convex " if wf.empty else "convex "


def _wgon_prefix_worker(
    first: int,
    P: PointSet,
    w: int,
    wf: WeightFunction,
    timeout: Optional[float],
) -> Tuple[Optional[Tuple[WeightValue, Tuple[int, ...]]], int]:
    clock = _Clock(EnumerationBudget(timeout=timeout))
    best: Optional[Tuple[WeightValue, Tuple[int, ...]]] = None
    for rest in itertools.combinations(range(first + 1, P.n), w - 1):
        clock.tick()
        subset = (first,) + rest
        hull = convex_hull(P.points, subset)
        if len(hull) != w:
            continue
        value = polygon_weight(hull, P, wf)
        if value is None:
            continue
        if best is None or wf.better(value, best[0]):
            best = (value, tuple(hull))
    return best, clock.count


def oracle_wgon(
    P: PointSet,
    w: int,
    wf: WeightFunction,
    budget: EnumerationBudget = EnumerationBudget(),
    n_jobs: Optional[int] = 1,
) -> Solution:
    """
    Enumerate every w-subset, keep those in convex position, return the optimum.

    Subsets are partitioned by their smallest index for the parallel mode and
    reduced in that order, so ties resolve to the lexicographically first subset.
    """
    if not isinstance(w, int) or w < 3 or w > P.n:
        raise ParameterError(f"w must satisfy 3 <= w <= n={P.n}, got {w!r}")
    total = math.comb(P.n, w)
    _check_subset_budget(total, budget)

    started = time.perf_counter()
    parts = ordered_map(
        _wgon_prefix_worker, list(range(P.n - w + 1)), P, w, wf, budget.timeout, n_jobs=n_jobs
    )
    best: Optional[Tuple[WeightValue, Tuple[int, ...]]] = None
    enumerated = 0
    for part, count in parts:
        enumerated += count
        if part is not None and (best is None or wf.better(part[0], best[0])):
            best = part
    if best is None:
        raise InfeasibleError(f"No {_label(wf)}{w}-gon over the {P.n} inputs")
    return Solution(
        polygon=best[1],
        value=best[0],
        weight=wf.name,
        algorithm=ALGORITHM,
        valid=True,
        stats={"elapsed_s": time.perf_counter() - started, "enumerated": enumerated, "expected": total},
    )


def _direct_weight(P: PointSet, poly: Sequence[int], wf: WeightFunction) -> WeightValue:
    pts = [P[k] for k in poly]
    if wf.id == WeightId.AREA2:
        return polygon_area2(pts)
    if wf.id == WeightId.PERIMETER:
        return sum(
            math.hypot(pts[k].x - pts[k - 1].x, pts[k].y - pts[k - 1].y) for k in range(len(pts))
        )
    if wf.id == WeightId.VERTEX_COUNT:
        return len(pts)
    # vertices plus strictly interior points, via a fan of interior counts
    inside = sum(
        count_strict_interior(pts[0], pts[k], pts[k + 1], P.points) for k in range(1, len(pts) - 1)
    )
    return len(pts) + inside


def oracle_wgon_by_triples(
    P: PointSet,
    w: int,
    wf: WeightFunction,
    budget: EnumerationBudget = EnumerationBudget(),
) -> Solution:
    """
    Second, independent enumeration: convex position means no subset point lies
    strictly inside a triangle of three others; the polygon order comes from an
    angular sort around the bottommost point and the weight from direct formulas.
    """
    if not isinstance(w, int) or w < 3 or w > P.n:
        raise ParameterError(f"w must satisfy 3 <= w <= n={P.n}, got {w!r}")
    total = math.comb(P.n, w)
    _check_subset_budget(total, budget)
    clock = _Clock(budget)

    best: Optional[Tuple[WeightValue, Tuple[int, ...]]] = None
    for subset in itertools.combinations(range(P.n), w):
        clock.tick()
        convex = True
        for a, b, c in itertools.combinations(subset, 3):
            others = [P[k] for k in subset if k not in (a, b, c)]
            if count_strict_interior(P[a], P[b], P[c], others):
                convex = False
                break
        if not convex:
            continue
        bottom = P.bottommost(subset)
        order = angular_sort(P, bottom, subset).order
        poly = (bottom,) + order
        if wf.empty and len(covered_indices(P, poly)) != w:
            continue
        value = _direct_weight(P, poly, wf)
        if best is None or wf.better(value, best[0]):
            best = (value, poly)
    if best is None:
        raise InfeasibleError(f"No {_label(wf)}{w}-gon over the {P.n} inputs")
    return Solution(
        polygon=canonical_rotation(best[1], P),
        value=best[0],
        weight=wf.name,
        algorithm="oracle-triples",
        stats={"elapsed_s": clock.elapsed, "enumerated": clock.count, "expected": total},
    )


# ==========================
# MinCH
# ==========================

def oracle_minch(
    P: PointSet,
    w: int,
    budget: EnumerationBudget = EnumerationBudget(),
) -> MinchResult:
    """
    Enumerate every outlier set C with |C| <= n - w; minimize |CH(P - C)|.

    Ties go to the smaller |C|, then to the lexicographically first C.
    """
    if not isinstance(w, int) or w < 1 or w > P.n:
        raise ParameterError(f"w must satisfy 1 <= w <= n={P.n}, got {w!r}")
    if P.n > budget.max_points:
        raise ExhaustedError(f"oracle_minch is capped at n={budget.max_points}, got n={P.n}")
    total = sum(math.comb(P.n, k) for k in range(P.n - w + 1))
    _check_subset_budget(total, budget)
    clock = _Clock(budget)

    best: Optional[Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = None
    for k in range(P.n - w + 1):
        for outliers in itertools.combinations(range(P.n), k):
            clock.tick()
            removed = set(outliers)
            kept = [q for q in range(P.n) if q not in removed]
            hull = convex_hull(P.points, kept)
            if best is None or len(hull) < best[0]:
                best = (len(hull), tuple(hull), outliers)

    hull_size, hull, outliers = best  # type: ignore[misc]
    return MinchResult(
        hull_size=hull_size,
        polygon=hull,
        coverage=P.n - len(outliers),
        outliers=tuple(outliers),
        feasible=True,
        algorithm=ALGORITHM,
        stats={"elapsed_s": clock.elapsed, "enumerated": clock.count, "expected": total},
    )


# ==========================
# Budget variant
# ==========================

def _budget_result(
    P: PointSet,
    found: Optional[Tuple[int, WeightValue, Tuple[int, ...]]],
    stats: dict,
) -> MinchResult:
    if found is None:
        return MinchResult(
            hull_size=0, polygon=(), coverage=0, outliers=tuple(range(P.n)),
            feasible=False, algorithm=ALGORITHM, stats=stats,
        )
    m, value, poly = found
    covered = set()
    for k in range(P.n):
        if k in poly:
            covered.add(k)
    pts = [P[k] for k in poly]
    for k in range(P.n):
        if k not in covered and any(
            count_strict_interior(pts[0], pts[t], pts[t + 1], [P[k]]) for t in range(1, m - 1)
        ):
            covered.add(k)
    return MinchResult(
        hull_size=m,
        polygon=poly,
        coverage=len(covered),
        outliers=tuple(k for k in range(P.n) if k not in covered),
        feasible=True,
        algorithm=ALGORITHM,
        value=value,
        stats=stats,
    )


def _check_budget(budget: Union[int, float], wf: WeightFunction) -> None:
    if wf.empty:
        raise ParameterError(f"Budget mode does not take empty-mode weights, got {wf.name}")
    if isinstance(budget, bool) or not isinstance(budget, (int, float)) or not math.isfinite(budget) or budget < 0:
        raise ParameterError(f"Budget must be a finite non-negative number, got {budget!r}")


def oracle_budget(
    P: PointSet,
    budget: Union[int, float],
    wf: WeightFunction,
    limits: EnumerationBudget = EnumerationBudget(),
) -> MinchResult:
    """Smallest m with some convex m-gon within budget, enumerating by increasing m."""
    _check_budget(budget, wf)
    total = sum(math.comb(P.n, m) for m in range(3, P.n + 1))
    _check_subset_budget(total, limits)
    clock = _Clock(limits)

    for m in range(3, P.n + 1):
        best: Optional[Tuple[WeightValue, Tuple[int, ...]]] = None
        for subset in itertools.combinations(range(P.n), m):
            clock.tick()
            hull = convex_hull(P.points, subset)
            if len(hull) != m:
                continue
            value = polygon_weight(hull, P, wf)
            if wf.within_budget(value, budget) and (best is None or wf.better(value, best[0])):
                best = (value, tuple(hull))
        if best is not None:
            return _budget_result(P, (m, best[0], best[1]), {"elapsed_s": clock.elapsed, "enumerated": clock.count})
    return _budget_result(P, None, {"elapsed_s": clock.elapsed, "enumerated": clock.count})


def oracle_budget_by_subsets(
    P: PointSet,
    budget: Union[int, float],
    wf: WeightFunction,
    limits: EnumerationBudget = EnumerationBudget(),
) -> MinchResult:
    """Same answer as oracle_budget from one pass over all subsets, bucketed by size."""
    _check_budget(budget, wf)
    total = sum(math.comb(P.n, m) for m in range(3, P.n + 1))
    _check_subset_budget(total, limits)
    clock = _Clock(limits)

    best_by_size: Dict[int, Tuple[WeightValue, Tuple[int, ...]]] = {}
    for mask in range(1, 1 << P.n):
        subset = [k for k in range(P.n) if mask >> k & 1]
        if len(subset) < 3:
            continue
        clock.tick()
        hull = convex_hull(P.points, subset)
        if len(hull) != len(subset):
            continue
        value = _direct_weight(P, hull, wf)
        m = len(hull)
        if not wf.within_budget(value, budget):
            continue
        current = best_by_size.get(m)
        if current is None or wf.better(value, current[0]) or (
            value == current[0] and tuple(sorted(hull)) < tuple(sorted(current[1]))
        ):
            best_by_size[m] = (value, tuple(hull))

    stats = {"elapsed_s": clock.elapsed, "enumerated": clock.count}
    if not best_by_size:
        return _budget_result(P, None, stats)
    m = min(best_by_size)
    value, poly = best_by_size[m]
    return _budget_result(P, (m, value, poly), stats)


def enumeration_count(n: int, sizes: List[int]) -> int:
    """Closed-form number of subsets enumerated for the given subset sizes."""
    return sum(math.comb(n, m) for m in sizes)
