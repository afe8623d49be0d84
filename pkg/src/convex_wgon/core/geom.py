"""
Exact planar primitives over integer coordinates.

Every predicate here works on Python integers: no floating point enters an
orientation, area or containment decision. Coordinates are bounded by
``COORD_BOUND`` so that all cross products also fit in signed 64-bit
arithmetic (the numpy path in ``TriangleCounter`` relies on that).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import cached_property, cmp_to_key
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from convex_wgon.errors import GeneralPositionError, ParameterError

logger = logging.getLogger(__name__)

COORD_BOUND = 2 ** 20


# ==========================
# Points
# ==========================

class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


@dataclass(frozen=True, order=True)
class Point:
    x: int
    y: int

    def __post_init__(self) -> None:
        if isinstance(self.x, bool) or isinstance(self.y, bool):
            raise ParameterError(f"Point coordinates must be integers, got ({self.x!r}, {self.y!r})")
        if not isinstance(self.x, (int, np.integer)) or not isinstance(self.y, (int, np.integer)):
            raise ParameterError(f"Point coordinates must be integers, got ({self.x!r}, {self.y!r})")
        # normalise numpy integers to plain ints
        object.__setattr__(self, "x", int(self.x))
        object.__setattr__(self, "y", int(self.y))
        if abs(self.x) > COORD_BOUND or abs(self.y) > COORD_BOUND:
            raise ParameterError(
                f"Point ({self.x}, {self.y}) exceeds the coordinate bound |c| <= {COORD_BOUND}"
            )

    def as_tuple(self) -> Tuple[int, int]:
        return (self.x, self.y)


def cross(a: Point, b: Point, c: Point) -> int:
    """(b - a) x (c - a), exactly."""
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def orientation(a: Point, b: Point, c: Point) -> Orientation:
    value = cross(a, b, c)
    if value > 0:
        return Orientation.CCW
    if value < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def triangle_area2(a: Point, b: Point, c: Point) -> int:
    """Twice the Euclidean area of triangle abc."""
    return abs(cross(a, b, c))


def in_right_half_plane(i: Point, j: Point, q: Point) -> bool:
    """
    True iff q lies strictly to the right of the directed line i -> j.

    Points on the line are not in the half-plane.
    """
    if i == j:
        raise ParameterError("in_right_half_plane needs two distinct points")
    return orientation(i, j, q) == Orientation.CW


def polygon_area2(poly: Sequence[Point]) -> int:
    """Signed twice-area (shoelace); positive for CCW polygons."""
    total = 0
    for k, p in enumerate(poly):
        q = poly[(k + 1) % len(poly)]
        total += p.x * q.y - q.x * p.y
    return total


def lex_key(p: Point) -> Tuple[int, int]:
    """Bottommost-first ordering: y, then x."""
    return (p.y, p.x)


def canonical_rotation(poly: Sequence[int], P: "PointSet") -> Tuple[int, ...]:
    """Rotate a cyclic vertex-index sequence to start at its bottommost vertex."""
    start = min(range(len(poly)), key=lambda t: lex_key(P[poly[t]]))
    return tuple(poly[start:]) + tuple(poly[:start])


# ==========================
# Angular order
# ==========================

def _half(dx: int, dy: int) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def compare_directions(d1: Tuple[int, int], d2: Tuple[int, int]) -> int:
    """Compare two nonzero directions by CCW angle measured from the positive x-axis."""
    h1, h2 = _half(*d1), _half(*d2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    c = d1[0] * d2[1] - d1[1] * d2[0]
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


@dataclass(frozen=True)
class AngularOrder:
    center: int
    order: Tuple[int, ...]

    def position(self) -> dict:
        return {idx: pos for pos, idx in enumerate(self.order)}


def angular_sort(P: "PointSet", i: int, subset: Optional[Iterable[int]] = None) -> AngularOrder:
    """
    Indices of P (other than i) sorted by CCW angle around P[i], starting at the positive x-axis.

    When ``subset`` is given, only those indices are sorted.
    """
    if not 0 <= i < P.n:
        raise ParameterError(f"Index {i} out of range for {P.n} points")
    center = P[i]
    pool = range(P.n) if subset is None else subset
    others = [k for k in pool if k != i]

    def _cmp(a: int, b: int) -> int:
        pa, pb = P[a], P[b]
        return compare_directions(
            (pa.x - center.x, pa.y - center.y),
            (pb.x - center.x, pb.y - center.y),
        )

    return AngularOrder(center=i, order=tuple(sorted(others, key=cmp_to_key(_cmp))))


# ==========================
# General position
# ==========================

@dataclass(frozen=True)
class Violation:
    kind: str  # "duplicate" | "collinear"
    indices: Tuple[int, ...]


def validate_general_position(points: Sequence[Point]) -> List[Violation]:
    """
    Exhaustive scan for duplicate points and collinear triples.

    Triples that contain a duplicate pair are reported as the duplicate only.
    An empty list means the input is in general position.
    """
    violations: List[Violation] = []
    n = len(points)
    duplicate_pairs = set()
    for a, b in itertools.combinations(range(n), 2):
        if points[a] == points[b]:
            duplicate_pairs.add((a, b))
            violations.append(Violation("duplicate", (a, b)))
    for a, b, c in itertools.combinations(range(n), 3):
        if (a, b) in duplicate_pairs or (a, c) in duplicate_pairs or (b, c) in duplicate_pairs:
            continue
        if cross(points[a], points[b], points[c]) == 0:
            violations.append(Violation("collinear", (a, b, c)))
    return violations


# ==========================
# Point sets
# ==========================

@dataclass(frozen=True)
class PointSet:
    points: Tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 3:
            raise ParameterError(f"A point set needs at least 3 points, got {len(self.points)}")

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[int]], validate: bool = True) -> "PointSet":
        ps = cls(tuple(Point(int(c[0]), int(c[1])) for c in coords))
        if validate:
            ps.require_general_position()
        return ps

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, idx: int) -> Point:
        return self.points[idx]

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def coords(self) -> List[Tuple[int, int]]:
        return [p.as_tuple() for p in self.points]

    @cached_property
    def violations(self) -> Tuple[Violation, ...]:
        return tuple(validate_general_position(self.points))

    def require_general_position(self) -> None:
        violations = self.violations
        if violations:
            first = violations[0]
            raise GeneralPositionError(
                f"Input is not in general position: {len(violations)} violation(s), "
                f"first is {first.kind} {first.indices}",
                violations,
            )

    def bottommost(self, indices: Iterable[int]) -> int:
        return min(indices, key=lambda k: lex_key(self.points[k]))

    def above(self, i: int) -> List[int]:
        """Indices lexicographically above P[i] in (y, x) order."""
        key = lex_key(self.points[i])
        return [k for k in range(self.n) if lex_key(self.points[k]) > key]

    @cached_property
    def angular_orders(self) -> Tuple[AngularOrder, ...]:
        return tuple(angular_sort(self, i) for i in range(self.n))

    @cached_property
    def triangle_counter(self) -> "TriangleCounter":
        return TriangleCounter(self)

    def scaled(self, k: int) -> "PointSet":
        return PointSet(tuple(Point(p.x * k, p.y * k) for p in self.points))


# ==========================
# Triangle interiors
# ==========================

def _strictly_inside(a: Point, b: Point, c: Point, q: Point) -> bool:
    o1 = cross(a, b, q)
    o2 = cross(b, c, q)
    o3 = cross(c, a, q)
    return (o1 > 0 and o2 > 0 and o3 > 0) or (o1 < 0 and o2 < 0 and o3 < 0)


def count_strict_interior(a: Point, b: Point, c: Point, P: Iterable[Point]) -> int:
    """Number of points of P strictly inside triangle abc (per-point scan)."""
    return sum(1 for q in P if _strictly_inside(a, b, c, q))


class TriangleCounter:
    """
    O(1) strict-interior counts for triangles with vertices in P.

    below[a][b] (a before b in (x, y) order) is the number of points strictly
    between a and b in that order and strictly below the line ab. Sorting by
    (x, y) is a symbolic shear of the x-axis, so equal x-coordinates need no
    special case.
    """

    def __init__(self, P: PointSet):
        order = sorted(range(P.n), key=lambda k: (P[k].x, P[k].y))
        self.rank = [0] * P.n
        for r, k in enumerate(order):
            self.rank[k] = r

        xs = np.array([P[k].x for k in order], dtype=np.int64)
        ys = np.array([P[k].y for k in order], dtype=np.int64)
        n = P.n
        below = np.zeros((n, n), dtype=np.int64)
        idx = np.arange(n)
        for a in range(n):
            dx = xs - xs[a]
            dy = ys - ys[a]
            # crosses[b, p] = (P_b - P_a) x (P_p - P_a)
            crosses = np.outer(dx, dy) - np.outer(dy, dx)
            between = (idx[None, :] > a) & (idx[None, :] < idx[:, None])
            below[a] = np.sum((crosses < 0) & between, axis=1)
        self._below = below
        self._points = P
        logger.debug("TriangleCounter built for %d points", n)

    def count(self, i: int, j: int, l: int) -> int:
        ra, rb, rc = sorted((self.rank[i], self.rank[j], self.rank[l]))
        below = self._below
        # middle vertex above or below the chord of the outer two
        inv = {self.rank[k]: k for k in (i, j, l)}
        side = cross(self._points[inv[ra]], self._points[inv[rc]], self._points[inv[rb]])
        if side > 0:
            return int(below[ra, rb] + below[rb, rc] - below[ra, rc])
        return int(below[ra, rc] - below[ra, rb] - below[rb, rc] - 1)


# ==========================
# Polygons
# ==========================

def is_convex_ccw(poly: Sequence[Point]) -> bool:
    """
    True iff every consecutive triple turns CCW and the boundary winds exactly once.

    With all turns strictly left, the winding number equals the number of times
    the edge direction wraps past the positive x-axis.
    """
    m = len(poly)
    if m < 3:
        return False
    if len(set(poly)) != m:
        return False
    for k in range(m):
        if orientation(poly[k], poly[(k + 1) % m], poly[(k + 2) % m]) != Orientation.CCW:
            return False
    edges = [
        (poly[(k + 1) % m].x - poly[k].x, poly[(k + 1) % m].y - poly[k].y) for k in range(m)
    ]
    wraps = sum(1 for k in range(m) if compare_directions(edges[(k + 1) % m], edges[k]) < 0)
    return wraps == 1


def convex_hull(points: Sequence[Point], indices: Optional[Iterable[int]] = None) -> List[int]:
    """
    Strict convex hull (monotone chain), CCW, starting at the bottommost vertex.

    Returns indices into ``points``. Collinear boundary points are dropped and
    duplicate coordinates keep their first index. Fewer than three distinct
    points are returned as they are, in (y, x) order.
    """
    pool = list(range(len(points))) if indices is None else list(indices)
    seen = {}
    for k in pool:
        seen.setdefault(points[k], k)
    unique = sorted(seen.values(), key=lambda k: (points[k].x, points[k].y))
    if len(unique) < 3:
        return sorted(unique, key=lambda k: lex_key(points[k]))

    def _chain(seq: List[int]) -> List[int]:
        out: List[int] = []
        for k in seq:
            while len(out) > 1 and cross(points[out[-2]], points[out[-1]], points[k]) <= 0:
                out.pop()
            out.append(k)
        return out

    lower = _chain(unique)
    upper = _chain(list(reversed(unique)))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # all points collinear
        return sorted({unique[0], unique[-1]}, key=lambda k: lex_key(points[k]))
    start = min(range(len(hull)), key=lambda t: lex_key(points[hull[t]]))
    return hull[start:] + hull[:start]


class Location(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def locate_in_convex_polygon(q: Point, poly: Sequence[Point]) -> Location:
    """Classify q against a convex CCW polygon."""
    on_line = False
    m = len(poly)
    for k in range(m):
        c = cross(poly[k], poly[(k + 1) % m], q)
        if c < 0:
            return Location.OUTSIDE
        if c == 0:
            on_line = True
    return Location.BOUNDARY if on_line else Location.INSIDE


def covered_indices(P: PointSet, polygon: Sequence[int]) -> List[int]:
    """Indices of P on or inside the convex polygon given by vertex indices."""
    verts = [P[k] for k in polygon]
    if len(verts) < 3:
        return sorted(set(polygon))
    return [
        k for k in range(P.n) if locate_in_convex_polygon(P[k], verts) != Location.OUTSIDE
    ]
