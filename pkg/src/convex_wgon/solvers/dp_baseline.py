"""
Ear-addition dynamic program over convex chains, O(w n^3).

For a bottom vertex i, a state is a directed last edge (u, v) between
candidates that appear in CCW angular order around i. T[m][(u, v)] is the
best weight of a convex polygon i, v1, ..., u, v with m vertices. Appending
the ear (i, v, w) needs the turn (u, v, w) to be CCW; around v every
admissible incoming edge direction u->v sorts strictly before the outgoing
direction v->w, so one merged sweep over both lists with a running best
realizes the pred() prefix minimum in O(1) per transition.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from convex_wgon.core.geom import PointSet, canonical_rotation, cross, is_convex_ccw
from convex_wgon.core.weights import WeightFunction, WeightValue
from convex_wgon.errors import AuditError, InfeasibleError, ParameterError
from convex_wgon.solvers.parallel import ordered_map
from convex_wgon.solvers.results import Solution

logger = logging.getLogger(__name__)

ALGORITHM = "baseline"

Grid = List[List[Optional[WeightValue]]]


@dataclass
class BaselineTable:
    """
    All per-size tables for one bottom vertex.

    ``candidates`` are point indices in CCW order around ``bottom``; table
    cells are indexed by candidate positions. ``first`` is set when the table
    was built for a fixed successor of the bottom vertex.
    """
    bottom: int
    candidates: Tuple[int, ...]
    m_max: int
    values: Dict[int, Grid] = field(default_factory=dict)
    parents: Dict[int, List[List[int]]] = field(default_factory=dict)
    first: Optional[int] = None

    def position(self, point_index: int) -> int:
        try:
            return self.candidates.index(point_index)
        except ValueError as exc:
            raise ParameterError(
                f"Point {point_index} is not a candidate of bottom vertex {self.bottom}"
            ) from exc

    def cell(self, m: int, u: int, v: int) -> Optional[WeightValue]:
        return self.values[m][self.position(u)][self.position(v)]

    def n_cells(self) -> int:
        k = len(self.candidates)
        return k * k * max(0, self.m_max - 2)


# ==========================
# Candidate orders
# ==========================

def restricted_candidates(P: PointSet, i: int) -> Tuple[int, ...]:
    """Points lexicographically above P[i], in CCW order around it."""
    above = set(P.above(i))
    return tuple(k for k in P.angular_orders[i].order if k in above)


def candidates_after(P: PointSet, i: int, first: int) -> Tuple[int, ...]:
    """``first`` followed by every point strictly left of i -> first, in CCW order around i."""
    order = P.angular_orders[i].order
    start = order.index(first)
    rotated = order[start:] + order[:start]
    pi, pf = P[i], P[first]
    return (first,) + tuple(k for k in rotated[1:] if cross(pi, pf, P[k]) > 0)


def _sweep_events(P: PointSet, i: int, cand: Sequence[int], ears: Grid) -> List[List[Tuple[int, int]]]:
    """
    For each candidate position b, incoming edges (0, a) and outgoing edges (1, c)
    in CCW order of edge direction.

    Around v = cand[b] every admissible direction lies left of the ray i -> v.
    Walking the cached angular order of v from i, the tails u of incoming edges
    come first and already sit in the order of their reversed directions v - u;
    the heads of outgoing edges follow past the antipode of i. The two runs are
    merged with one turn test per step. Incoming edges after the last outgoing
    edge can never feed a transition and are dropped, as are outgoing edges
    whose ear has no value.
    """
    k = len(cand)
    slot = {idx: pos for pos, idx in enumerate(cand)}
    events: List[List[Tuple[int, int]]] = []
    for b in range(k):
        v = cand[b]
        pv = P[v]
        order = P.angular_orders[v].order
        start = order.index(i)
        incoming: List[int] = []
        outgoing: List[int] = []
        for idx in order[start + 1:] + order[:start]:
            pos = slot.get(idx)
            if pos is None:
                continue
            if pos < b:
                incoming.append(pos)
            elif ears[b][pos] is not None:
                outgoing.append(pos)

        merged: List[Tuple[int, int]] = []
        t = 0
        for c in outgoing:
            pw = P[cand[c]]
            while t < len(incoming) and cross(P[cand[incoming[t]]], pv, pw) > 0:
                merged.append((0, incoming[t]))
                t += 1
            merged.append((1, c))
        events.append(merged)
    return events


# ==========================
# Table construction
# ==========================

def build_table(
    P: PointSet,
    bottom: int,
    m_max: int,
    wf: WeightFunction,
    first: Optional[int] = None,
) -> BaselineTable:
    """
    Fill T[3..m_max] for one bottom vertex.

    With ``first`` the chain must start with the edge bottom -> first and may
    use any point left of that edge; otherwise candidates are the points
    lexicographically above the bottom vertex.
    """
    i = bottom
    cand = candidates_after(P, i, first) if first is not None else restricted_candidates(P, i)
    k = len(cand)
    table = BaselineTable(bottom=i, candidates=cand, m_max=m_max, first=first)
    pi = P[i]

    # candidates span less than a half-turn around i, so every pair a < b turns CCW
    ears: Grid = [[None] * k for _ in range(k)]
    base = wf.base
    for a in range(k):
        ca = cand[a]
        row = ears[a]
        for b in range(a + 1, k):
            row[b] = base(P, i, ca, cand[b])

    seed: Grid = [[None] * k for _ in range(k)]
    for a in range(1 if first is not None else k):
        for b in range(a + 1, k):
            seed[a][b] = ears[a][b]
    table.values[3] = seed
    table.parents[3] = [[-1] * k for _ in range(k)]

    events = _sweep_events(P, i, cand, ears)
    better = wf.better
    merge = wf.merge
    for m in range(4, m_max + 1):
        prev = table.values[m - 1]
        cur: Grid = [[None] * k for _ in range(k)]
        par = [[-1] * k for _ in range(k)]
        for b in range(k):
            chord = (pi, P[cand[b]])
            best: Optional[WeightValue] = None
            best_a = -1
            for kind, pos in events[b]:
                if kind == 0:
                    value = prev[pos][b]
                    if value is not None and better(value, best):
                        best, best_a = value, pos
                elif best is not None:
                    cur[b][pos] = merge(best, ears[b][pos], chord)
                    par[b][pos] = best_a
        table.values[m] = cur
        table.parents[m] = par
    return table


def reconstruct(table: BaselineTable, closing_edge: Tuple[int, int], m: int) -> Tuple[int, ...]:
    """
    Walk parent pointers back from the last edge (u, v) of an m-gon.

    Returns the CCW vertex indices starting at the table's bottom vertex.
    """
    if m < 3 or m > table.m_max:
        raise ParameterError(f"Size {m} outside table range [3, {table.m_max}]")
    a = table.position(closing_edge[0])
    b = table.position(closing_edge[1])
    if table.values[m][a][b] is None:
        raise InfeasibleError(f"No convex {m}-gon ends with edge {closing_edge}")

    chain = [b, a]
    mm = m
    while mm > 3:
        prev = table.parents[mm][a][b]
        if prev < 0:
            raise AuditError(f"Broken parent chain at size {mm}, edge ({a}, {b})")
        a, b = prev, a
        chain.append(a)
        mm -= 1
    polygon = (table.bottom,) + tuple(table.candidates[p] for p in reversed(chain))
    if len(polygon) != m:
        raise AuditError(f"Reconstructed {len(polygon)} vertices, expected {m}")
    return polygon


# ==========================
# Sweeps over bottom vertices
# ==========================

def _best_per_size(table: BaselineTable, wf: WeightFunction) -> Dict[int, Tuple[WeightValue, Tuple[int, ...]]]:
    out: Dict[int, Tuple[WeightValue, Tuple[int, ...]]] = {}
    k = len(table.candidates)
    for m in range(3, table.m_max + 1):
        grid = table.values[m]
        best: Optional[WeightValue] = None
        edge: Optional[Tuple[int, int]] = None
        for a in range(k):
            row = grid[a]
            for b in range(a + 1, k):
                if row[b] is not None and wf.better(row[b], best):
                    best, edge = row[b], (a, b)
        if edge is not None:
            closing = (table.candidates[edge[0]], table.candidates[edge[1]])
            out[m] = (best, reconstruct(table, closing, m))
    return out


def _bottom_worker(
    i: int,
    P: PointSet,
    m_max: int,
    wf: WeightFunction,
    restrict_candidates: bool,
) -> Tuple[Dict[int, Tuple[WeightValue, Tuple[int, ...]]], int]:
    if restrict_candidates:
        table = build_table(P, i, m_max, wf)
        return _best_per_size(table, wf), table.n_cells()

    merged: Dict[int, Tuple[WeightValue, Tuple[int, ...]]] = {}
    cells = 0
    for first in P.angular_orders[i].order:
        table = build_table(P, i, m_max, wf, first=first)
        cells += table.n_cells()
        for m, (value, poly) in _best_per_size(table, wf).items():
            if m not in merged or wf.better(value, merged[m][0]):
                merged[m] = (value, poly)
    return merged, cells


def _check_size_params(P: PointSet, m: int, label: str) -> None:
    if not isinstance(m, int) or m < 3:
        raise ParameterError(f"{label} must be an integer >= 3, got {m!r}")
    if m > P.n:
        raise ParameterError(f"{label}={m} exceeds the number of points n={P.n}")


def solve_all_sizes(
    P: PointSet,
    m_max: int,
    wf: WeightFunction,
    n_jobs: Optional[int] = 1,
    restrict_candidates: bool = True,
) -> Dict[int, Solution]:
    """
    Optimal convex m-gon for every m in [3, m_max].

    Sizes with no convex m-gon over P are absent from the result. Ties between
    bottom vertices go to the lowest index.
    """
    _check_size_params(P, m_max, "m_max")
    P.require_general_position()

    started = time.perf_counter()
    logger.info("Baseline DP: n=%d m_max=%d weight=%s", P.n, m_max, wf.name)
    per_bottom = ordered_map(
        _bottom_worker, list(range(P.n)), P, m_max, wf, restrict_candidates, n_jobs=n_jobs
    )

    best: Dict[int, Tuple[WeightValue, Tuple[int, ...]]] = {}
    total_cells = 0
    for sizes, cells in per_bottom:
        total_cells += cells
        for m, (value, poly) in sizes.items():
            if m not in best or wf.better(value, best[m][0]):
                best[m] = (value, poly)

    elapsed = time.perf_counter() - started
    logger.info("Baseline DP finished in %.3fs (%d table cells)", elapsed, total_cells)

    out: Dict[int, Solution] = {}
    for m in sorted(best):
        value, poly = best[m]
        polygon = canonical_rotation(poly, P)
        out[m] = Solution(
            polygon=polygon,
            value=value,
            weight=wf.name,
            algorithm=ALGORITHM,
            valid=is_convex_ccw([P[k] for k in polygon]) and len(polygon) == m,
            stats={
                "elapsed_s": elapsed,
                "table_cells": total_cells,
                "m_max": m_max,
                "restrict_candidates": restrict_candidates,
            },
        )
    return out


def best_at_most(sweep: Dict[int, Solution], m: int, wf: WeightFunction) -> Optional[Solution]:
    """Best solution over sizes 3..m (the "at most m-gon" reading)."""
    best: Optional[Solution] = None
    for size in sorted(sweep):
        if size > m:
            break
        if best is None or wf.better(sweep[size].value, best.value):
            best = sweep[size]
    return best


def solve_exact_wgon(
    P: PointSet,
    w: int,
    wf: WeightFunction,
    n_jobs: Optional[int] = 1,
) -> Solution:
    """Optimal convex w-gon; raises InfeasibleError when P has no w points in convex position."""
    _check_size_params(P, w, "w")
    sweep = solve_all_sizes(P, w, wf, n_jobs=n_jobs)
    if w not in sweep:
        raise InfeasibleError(f"No convex {w}-gon exists over the {P.n} input points")
    return sweep[w]
