"""
Convex decomposable weights.

A weight is a base value on fan triangles (i, j, l) plus a constant-time
merge operator M(a, b, chord). Folding M over the fan of a convex polygon
from its bottommost vertex yields the polygon's weight; the dynamic programs
only ever combine values through ``merge``.

An empty-mode weight gives fan triangles holding an input point strictly
inside no value (None), and ``merge`` carries None through, so only polygons
with no input point in their interior keep a finite weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

from convex_wgon.core.geom import (
    Point,
    PointSet,
    canonical_rotation,
    is_convex_ccw,
    triangle_area2,
)
from convex_wgon.errors import AuditError, NonConvexPolygonError, ParameterError

WeightValue = Union[int, float]

REL_TOL = 1e-9


class WeightId(str, Enum):
    AREA2 = "AREA2"
    PERIMETER = "PERIMETER"
    VERTEX_COUNT = "VERTEX_COUNT"
    COVERAGE = "COVERAGE"


class Direction(str, Enum):
    MIN = "MIN"
    MAX = "MAX"


def _distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


EMPTY_WEIGHTS = (WeightId.AREA2, WeightId.PERIMETER)


@dataclass(frozen=True)
class WeightFunction:
    id: WeightId
    direction: Direction
    empty: bool = False

    @property
    def exact(self) -> bool:
        """Integer-valued weights compare exactly; PERIMETER is a double."""
        return self.id != WeightId.PERIMETER

    @property
    def name(self) -> str:
        suffix = "/EMPTY" if self.empty else ""
        return f"{self.id.value}/{self.direction.value}{suffix}"

    def base(self, P: PointSet, i: int, j: int, l: int) -> Optional[WeightValue]:
        if self.empty and P.triangle_counter.count(i, j, l):
            return None
        a, b, c = P[i], P[j], P[l]
        if self.id == WeightId.AREA2:
            return triangle_area2(a, b, c)
        if self.id == WeightId.PERIMETER:
            return _distance(a, b) + _distance(b, c) + _distance(c, a)
        if self.id == WeightId.VERTEX_COUNT:
            return 3
        return 3 + P.triangle_counter.count(i, j, l)

    def merge(
        self,
        a: Optional[WeightValue],
        b: Optional[WeightValue],
        chord: Optional[Tuple[Point, Point]] = None,
    ) -> Optional[WeightValue]:
        if a is None or b is None:
            return None
        if self.id == WeightId.AREA2:
            return a + b
        if self.id == WeightId.PERIMETER:
            if chord is None:
                raise ParameterError("PERIMETER merge needs the chord endpoints")
            return a + b - 2.0 * _distance(chord[0], chord[1])
        # VERTEX_COUNT and COVERAGE share the two chord endpoints
        return a + b - 2

    def better(self, a: Optional[WeightValue], b: Optional[WeightValue]) -> bool:
        """Strictly better; any value beats None."""
        if a is None:
            return False
        if b is None:
            return True
        return a < b if self.direction == Direction.MIN else a > b

    def sort_key(self, value: WeightValue) -> WeightValue:
        return value if self.direction == Direction.MIN else -value

    def within_budget(self, value: WeightValue, budget: WeightValue) -> bool:
        return value <= budget if self.direction == Direction.MIN else value >= budget

    def values_equal(self, a: Optional[WeightValue], b: Optional[WeightValue]) -> bool:
        if a is None or b is None:
            return a is None and b is None
        if self.exact:
            return a == b
        return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=REL_TOL)


def make_weight(
    id: Union[WeightId, str],
    direction: Union[Direction, str, None] = None,
    empty: bool = False,
) -> WeightFunction:
    """
    Build a weight. COVERAGE defaults to MAX, every other weight to MIN.

    ``empty`` restricts AREA2 and PERIMETER to polygons with no input point
    strictly inside.
    """
    try:
        wid = WeightId(str(getattr(id, "value", id)).upper())
    except ValueError as exc:
        raise ParameterError(f"Unknown weight id: {id!r}") from exc
    if direction is None:
        direction = Direction.MAX if wid == WeightId.COVERAGE else Direction.MIN
    try:
        wdir = Direction(str(getattr(direction, "value", direction)).upper())
    except ValueError as exc:
        raise ParameterError(f"Unknown direction: {direction!r}") from exc
    if empty and wid not in EMPTY_WEIGHTS:
        raise ParameterError(f"Empty mode applies to AREA2 and PERIMETER only, got {wid.value}")
    return WeightFunction(id=wid, direction=wdir, empty=bool(empty))


# ==========================
# Direct evaluation
# ==========================

def _fan_fold(poly: Sequence[int], P: PointSet, wf: WeightFunction) -> Optional[WeightValue]:
    """Fold merge over the fan from poly[0]."""
    p0 = poly[0]
    value = wf.base(P, p0, poly[1], poly[2])
    for k in range(2, len(poly) - 1):
        value = wf.merge(value, wf.base(P, p0, poly[k], poly[k + 1]), (P[p0], P[poly[k]]))
    return value


def polygon_weight(poly: Sequence[int], P: PointSet, wf: WeightFunction) -> Optional[WeightValue]:
    """
    Weight of a convex CCW polygon given by vertex indices, by fan decomposition
    from its bottommost vertex.

    PERIMETER is also checked against the plain edge-length sum. Empty-mode
    weights return None for a polygon with an input point strictly inside.
    """
    if len(poly) < 3 or len(set(poly)) != len(poly):
        raise NonConvexPolygonError(f"Polygon needs >= 3 distinct vertices: {list(poly)}")
    if not is_convex_ccw([P[k] for k in poly]):
        raise NonConvexPolygonError(f"Polygon is not convex CCW: {list(poly)}")

    value = _fan_fold(canonical_rotation(poly, P), P, wf)
    if wf.id == WeightId.PERIMETER and value is not None:
        direct = sum(
            _distance(P[poly[k]], P[poly[(k + 1) % len(poly)]]) for k in range(len(poly))
        )
        if not math.isclose(value, direct, rel_tol=REL_TOL, abs_tol=REL_TOL):
            raise AuditError(f"Perimeter fan fold {value} disagrees with edge sum {direct}")
    return value


def check_decomposition(
    poly: Sequence[int],
    chord_vertex: int,
    P: PointSet,
    wf: WeightFunction,
) -> bool:
    """
    W(poly) == M(W(poly[0..k]), W(poly[0], poly[k..]), chord poly[0]-poly[k]).

    ``chord_vertex`` is the position k of the chord's second endpoint; both
    parts must keep at least three vertices (2 <= k <= len(poly) - 2).
    """
    m = len(poly)
    if m < 4:
        raise ParameterError("check_decomposition needs a polygon with at least 4 vertices")
    if not 2 <= chord_vertex <= m - 2:
        raise ParameterError(f"chord_vertex must lie in [2, {m - 2}], got {chord_vertex}")

    left = list(poly[: chord_vertex + 1])
    right = [poly[0]] + list(poly[chord_vertex:])
    whole = polygon_weight(poly, P, wf)
    merged = wf.merge(
        polygon_weight(left, P, wf),
        polygon_weight(right, P, wf),
        (P[poly[0]], P[poly[chord_vertex]]),
    )
    return wf.values_equal(whole, merged)


OBJECTIVES = {
    "min-area": (WeightId.AREA2, Direction.MIN, False),
    "max-area": (WeightId.AREA2, Direction.MAX, False),
    "min-perimeter": (WeightId.PERIMETER, Direction.MIN, False),
    "max-perimeter": (WeightId.PERIMETER, Direction.MAX, False),
    "min-empty-area": (WeightId.AREA2, Direction.MIN, True),
    "max-empty-area": (WeightId.AREA2, Direction.MAX, True),
    "min-empty-perimeter": (WeightId.PERIMETER, Direction.MIN, True),
    "max-empty-perimeter": (WeightId.PERIMETER, Direction.MAX, True),
}


def weight_for_objective(objective: str) -> WeightFunction:
    """Weight behind a polygon objective name such as ``min-area`` or ``max-empty-area``."""
    try:
        wid, wdir, empty = OBJECTIVES[objective]
    except KeyError:
        raise ParameterError(
            f"Unknown polygon objective {objective!r}; expected one of {sorted(OBJECTIVES)}"
        ) from None
    return WeightFunction(id=wid, direction=wdir, empty=empty)
