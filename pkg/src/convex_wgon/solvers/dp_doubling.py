"""
Doubling dynamic program, O(n^3 log w).

Per bottom vertex i, a size-class table holds Cost[j][l]: the best weight of
a convex polygon i, j, ..., l whose outer chain j..l has exactly ``size``
edges, plus End[j], the last vertex of the chain out of j recorded by the
most recent improvement. Two classes a and b merge into class a + b by
relaxing

    Cost_c[j][l] <- M(Cost_a[j][r], Cost_b[r][End_b[r]])    with l = End_b[r]

for every r after j in CCW order around i, visited in the angular order
around j. The relaxation guard only looks at (i, j, r); the seam turn at r is
not constrained, so candidate witnesses are rebuilt and validated before one
is returned. ``strict_seam`` adds the seam-turn check inside the relaxation.

A w-gon with bottom vertex i has an outer chain of w - 2 edges, so the
schedule is built for w - 2 and merged classes never double count the seam
vertex.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from convex_wgon.core.geom import PointSet, canonical_rotation, cross, is_convex_ccw
from convex_wgon.core.weights import WeightFunction, WeightValue, polygon_weight
from convex_wgon.errors import InfeasibleError, NonConvexPolygonError, ParameterError
from convex_wgon.solvers.dp_baseline import restricted_candidates
from convex_wgon.solvers.parallel import ordered_map
from convex_wgon.solvers.results import Solution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MergeStep:
    left: int
    right: int

    @property
    def result(self) -> int:
        return self.left + self.right

    def __str__(self) -> str:
        return f"{self.left}+{self.right}->{self.result}"


def merge_schedule(size: int) -> List[MergeStep]:
    """
    Merges that build the class ``size`` from the class 1.

    Powers of two are built by repeated self-merge; the remaining set bits of
    ``size`` are folded in from the most significant down, so the total is
    O(log size) merges. size=8 gives 1+1, 2+2, 4+4; size=6 gives 1+1, 2+2, 4+2.
    """
    if not isinstance(size, int) or size < 1:
        raise ParameterError(f"merge_schedule needs an integer size >= 1, got {size!r}")
    steps: List[MergeStep] = []
    top = 1
    while top * 2 <= size:
        steps.append(MergeStep(top, top))
        top *= 2
    acc = top
    bit = top // 2
    while bit >= 1:
        if size & bit:
            steps.append(MergeStep(acc, bit))
            acc += bit
        bit //= 2
    return steps


# ==========================
# Size-class tables
# ==========================

@dataclass
class SizeClassTable:
    """Cost/End arrays of one size class for one bottom vertex, indexed by point index."""
    bottom: int
    size: int
    cost: List[List[Optional[WeightValue]]]
    end: List[Optional[int]]
    parent: Dict[Tuple[int, int], Tuple[int, int, int]] = field(default_factory=dict)
    second: Dict[Tuple[int, int], int] = field(default_factory=dict)
    prelast: Dict[Tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def empty(cls, n: int, bottom: int, size: int) -> "SizeClassTable":
        cost: List[List[Optional[WeightValue]]] = [[None] * n for _ in range(n)]
        end: List[Optional[int]] = [None] * n
        cost[bottom] = [0] * n
        end[bottom] = bottom
        return cls(bottom=bottom, size=size, cost=cost, end=end)

    @property
    def t(self) -> Optional[int]:
        """Exponent when the class is a power of two."""
        if self.size & (self.size - 1):
            return None
        return self.size.bit_length() - 1

    def finite_cells(self) -> List[Tuple[int, int]]:
        return sorted(self.parent) if self.size > 1 else sorted(self.second)


def _seed_class(P: PointSet, i: int, cand: Tuple[int, ...], wf: WeightFunction) -> SizeClassTable:
    table = SizeClassTable.empty(P.n, i, 1)
    pi = P[i]
    for a, j in enumerate(cand):
        best: Optional[WeightValue] = None
        for l in cand[a + 1:]:
            if cross(pi, P[j], P[l]) <= 0:
                continue
            value = wf.base(P, i, j, l)
            if value is None:
                continue
            table.cost[j][l] = value
            table.second[(j, l)] = l
            table.prelast[(j, l)] = j
            if wf.better(value, best):
                best = value
                table.end[j] = l
    return table


def _merge_classes(
    P: PointSet,
    i: int,
    cand: Tuple[int, ...],
    left: SizeClassTable,
    right: SizeClassTable,
    wf: WeightFunction,
    strict_seam: bool,
) -> SizeClassTable:
    out = SizeClassTable.empty(P.n, i, left.size + right.size)
    pi = P[i]
    in_cand = set(cand)
    for j in cand:
        pj = P[j]
        for r in P.angular_orders[j].order:
            if r == i or r not in in_cand or cross(pi, pj, P[r]) <= 0:
                continue
            a_value = left.cost[j][r]
            if a_value is None:
                continue
            l = right.end[r]
            if l is None:
                continue
            b_value = right.cost[r][l]
            if b_value is None:
                continue
            if strict_seam and cross(P[left.prelast[(j, r)]], P[r], P[right.second[(r, l)]]) <= 0:
                continue
            value = wf.merge(a_value, b_value, (pi, P[r]))
            if wf.better(value, out.cost[j][l]):
                out.cost[j][l] = value
                out.end[j] = l
                out.parent[(j, l)] = (r, left.size, right.size)
                out.second[(j, l)] = left.second[(j, r)]
                out.prelast[(j, l)] = right.prelast[(r, l)]
    return out


def build_size_classes(
    P: PointSet,
    bottom: int,
    size: int,
    wf: WeightFunction,
    strict_seam: bool = False,
) -> Dict[int, SizeClassTable]:
    """Every size class on the schedule for ``size`` edges, keyed by class size."""
    cand = restricted_candidates(P, bottom)
    classes: Dict[int, SizeClassTable] = {1: _seed_class(P, bottom, cand, wf)}
    for step in merge_schedule(size):
        classes[step.result] = _merge_classes(
            P, bottom, cand, classes[step.left], classes[step.right], wf, strict_seam
        )
    return classes


def reconstruct_chain(classes: Dict[int, SizeClassTable], size: int, j: int, l: int) -> List[int]:
    """Outer chain j..l of the class-``size`` cell, by merge provenance."""
    if size == 1:
        return [j, l]
    r, a, b = classes[size].parent[(j, l)]
    return reconstruct_chain(classes, a, j, r) + reconstruct_chain(classes, b, r, l)[1:]


# ==========================
# Candidate validation
# ==========================

def _witness_is_valid(
    P: PointSet,
    polygon: Tuple[int, ...],
    w: int,
    value: WeightValue,
    wf: WeightFunction,
) -> bool:
    if len(polygon) != w or len(set(polygon)) != w:
        return False
    if not is_convex_ccw([P[k] for k in polygon]):
        return False
    if canonical_rotation(polygon, P)[0] != polygon[0]:
        return False
    try:
        return wf.values_equal(polygon_weight(polygon, P, wf), value)
    except NonConvexPolygonError:
        return False


@dataclass
class _BottomOutcome:
    candidates: int
    checked: int
    best: Optional[Tuple[WeightValue, Tuple[int, ...], bool]]
    best_valid: Optional[Tuple[WeightValue, Tuple[int, ...]]]


def _bottom_worker(
    i: int,
    P: PointSet,
    w: int,
    wf: WeightFunction,
    strict_seam: bool,
) -> _BottomOutcome:
    size = w - 2
    classes = build_size_classes(P, i, size, wf, strict_seam)
    target = classes[size]
    cells = [
        (target.cost[j][l], j, l)
        for j, l in target.finite_cells()
        if target.cost[j][l] is not None
    ]
    cells.sort(key=lambda c: (wf.sort_key(c[0]), c[1], c[2]))

    best = None
    best_valid = None
    checked = 0
    for value, j, l in cells:
        polygon = (i,) + tuple(reconstruct_chain(classes, size, j, l))
        checked += 1
        ok = _witness_is_valid(P, polygon, w, value, wf)
        if best is None:
            best = (value, polygon, ok)
        if ok:
            best_valid = (value, polygon)
            break
    return _BottomOutcome(len(cells), checked, best, best_valid)


def solve_doubling(
    P: PointSet,
    w: int,
    wf: WeightFunction,
    strict_seam: bool = False,
    n_jobs: Optional[int] = 1,
) -> Solution:
    """
    Best valid candidate of the doubling DP, or the best candidate flagged invalid.

    Candidates are ordered by value, then by (i, j, l). Raises InfeasibleError
    when the tables hold no finite candidate at all.
    """
    if not isinstance(w, int) or w < 3:
        raise ParameterError(f"w must be an integer >= 3, got {w!r}")
    if w > P.n:
        raise ParameterError(f"w={w} exceeds the number of points n={P.n}")
    P.require_general_position()

    algorithm = "doubling-strict" if strict_seam else "doubling"
    started = time.perf_counter()
    logger.info("Doubling DP: n=%d w=%d weight=%s strict_seam=%s", P.n, w, wf.name, strict_seam)
    outcomes = ordered_map(_bottom_worker, list(range(P.n)), P, w, wf, strict_seam, n_jobs=n_jobs)
    elapsed = time.perf_counter() - started

    best = None
    best_valid = None
    for outcome in outcomes:
        if outcome.best is not None and (best is None or wf.better(outcome.best[0], best[0])):
            best = outcome.best
        if outcome.best_valid is not None and (
            best_valid is None or wf.better(outcome.best_valid[0], best_valid[0])
        ):
            best_valid = outcome.best_valid

    stats = {
        "elapsed_s": elapsed,
        "candidates": sum(o.candidates for o in outcomes),
        "candidates_checked": sum(o.checked for o in outcomes),
        "schedule": [str(s) for s in merge_schedule(w - 2)],
        "strict_seam": strict_seam,
    }
    if best is None:
        raise InfeasibleError(f"Doubling tables hold no {w}-gon candidate over {P.n} points")

    if best_valid is not None:
        value, polygon = best_valid
        return Solution(polygon=polygon, value=value, weight=wf.name, algorithm=algorithm, valid=True, stats=stats)

    value, polygon, _ = best
    logger.warning("Doubling DP: no candidate %d-gon passed validation; returning best invalid one", w)
    return Solution(polygon=polygon, value=value, weight=wf.name, algorithm=algorithm, valid=False, stats=stats)
