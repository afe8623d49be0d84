# tests/test_geom.py

import itertools

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from convex_wgon.core.geom import (
    COORD_BOUND,
    Location,
    Orientation,
    Point,
    PointSet,
    TriangleCounter,
    Violation,
    angular_sort,
    compare_directions,
    convex_hull,
    count_strict_interior,
    covered_indices,
    in_right_half_plane,
    is_convex_ccw,
    locate_in_convex_polygon,
    orientation,
    triangle_area2,
    validate_general_position,
)
from convex_wgon.errors import GeneralPositionError, ParameterError
from tests.strategies import general_position_sets


def P_(*xy):
    return [Point(x, y) for x, y in xy]


# -------------------------------------------------------------------
# Predicates
# -------------------------------------------------------------------

@pytest.mark.parametrize(
    "pts, expected",
    [
        (((0, 0), (1, 0), (0, 1)), Orientation.CCW),
        (((0, 0), (0, 1), (1, 0)), Orientation.CW),
        (((0, 0), (1, 1), (2, 2)), Orientation.COLLINEAR),
    ],
)
def test_orientation_examples(pts, expected):
    assert orientation(*P_(*pts)) == expected


@pytest.mark.parametrize(
    "pts, expected",
    [
        (((0, 0), (1, 0), (0, 1)), 1),
        (((0, 0), (2, 0), (0, 2)), 4),
        (((0, 0), (1, 1), (2, 2)), 0),
    ],
)
def test_triangle_area2_examples(pts, expected):
    assert triangle_area2(*P_(*pts)) == expected


def test_orientation_exact_at_coordinate_bound():
    a, b, c = P_((-COORD_BOUND, -COORD_BOUND), (COORD_BOUND, -COORD_BOUND), (COORD_BOUND, COORD_BOUND))
    assert orientation(a, b, c) == Orientation.CCW
    assert triangle_area2(a, b, c) == (2 * COORD_BOUND) ** 2


def test_in_right_half_plane():
    i, j = P_((0, 0), (1, 0))
    assert in_right_half_plane(i, j, Point(0, -1))
    assert not in_right_half_plane(i, j, Point(0, 1))
    # points on the line are excluded
    assert not in_right_half_plane(i, j, Point(2, 0))


def test_point_rejects_out_of_bound_and_non_integer():
    with pytest.raises(ParameterError):
        Point(COORD_BOUND + 1, 0)
    with pytest.raises(ParameterError):
        Point(0.5, 1)  # type: ignore[arg-type]


# -------------------------------------------------------------------
# Angular order
# -------------------------------------------------------------------

def test_angular_sort_axis_directions():
    P = PointSet.from_coords([(0, 0), (1, 0), (0, 1), (-1, 0)], validate=False)
    assert angular_sort(P, 0).order == (1, 2, 3)


def test_angular_sort_diagonals():
    P = PointSet.from_coords([(0, 0), (1, 1), (-1, 1)])
    assert angular_sort(P, 0).order == (1, 2)


@given(general_position_sets(min_size=4, max_size=8))
@settings(deadline=None, max_examples=60, suppress_health_check=[HealthCheck.filter_too_much])
def test_angular_sort_agrees_with_pairwise_comparisons(P):
    for i in range(P.n):
        order = angular_sort(P, i).order
        assert sorted(order) == [k for k in range(P.n) if k != i]
        c = P[i]
        for a, b in itertools.combinations(order, 2):
            da = (P[a].x - c.x, P[a].y - c.y)
            db = (P[b].x - c.x, P[b].y - c.y)
            assert compare_directions(da, db) < 0


# -------------------------------------------------------------------
# General position
# -------------------------------------------------------------------

def test_validate_general_position_examples():
    assert validate_general_position(P_((0, 0), (1, 0), (0, 1))) == []
    assert validate_general_position(P_((0, 0), (1, 1), (2, 2), (0, 5))) == [Violation("collinear", (0, 1, 2))]
    assert validate_general_position(P_((0, 0), (0, 0), (1, 2))) == [Violation("duplicate", (0, 1))]


def test_point_set_requires_general_position():
    with pytest.raises(GeneralPositionError) as excinfo:
        PointSet.from_coords([(0, 0), (1, 1), (2, 2), (0, 5)])
    payload = excinfo.value.to_payload()
    assert payload["error"] == "general_position"
    assert payload["violations"] == [{"kind": "collinear", "indices": [0, 1, 2]}]


def test_point_set_needs_three_points():
    with pytest.raises(ParameterError):
        PointSet.from_coords([(0, 0), (1, 0)])


# -------------------------------------------------------------------
# Interior counts
# -------------------------------------------------------------------

def test_count_strict_interior_examples(five_points):
    a, b, c = five_points[0], five_points[1], five_points[3]
    assert count_strict_interior(a, b, c, five_points.points) == 1
    without_center = [p for p in five_points.points if p != Point(4, 5)]
    assert count_strict_interior(a, b, c, without_center) == 0


def test_triangle_counter_on_five_points(five_points):
    counter = five_points.triangle_counter
    assert counter.count(0, 1, 3) == 1
    assert counter.count(0, 2, 3) == 1
    assert counter.count(0, 1, 2) == 0
    assert counter.count(1, 2, 3) == 0


@given(general_position_sets(min_size=3, max_size=9))
@settings(deadline=None, max_examples=80, suppress_health_check=[HealthCheck.filter_too_much])
def test_triangle_counter_matches_scan(P):
    counter = TriangleCounter(P)
    for i, j, l in itertools.combinations(range(P.n), 3):
        expected = count_strict_interior(P[i], P[j], P[l], P.points)
        assert counter.count(i, j, l) == expected
        assert counter.count(l, i, j) == expected


# -------------------------------------------------------------------
# Polygons and hulls
# -------------------------------------------------------------------

@pytest.mark.parametrize(
    "pts, expected",
    [
        (((0, 0), (1, 0), (1, 1), (0, 1)), True),
        (((0, 0), (0, 1), (1, 1), (1, 0)), False),
        (((0, 0), (2, 0), (1, 1), (2, 2), (0, 2)), False),
    ],
)
def test_is_convex_ccw_examples(pts, expected):
    assert is_convex_ccw(P_(*pts)) is expected


def test_is_convex_ccw_rejects_double_winding():
    # a pentagram turns left at every vertex but winds twice
    star = P_((0, 10), (-6, -8), (10, 3), (-10, 3), (6, -8))
    assert not is_convex_ccw(star)


def test_convex_hull_five_points(five_points):
    assert convex_hull(five_points.points) == [0, 1, 2, 3]
    assert convex_hull(five_points.points, [0, 1, 3, 4]) == [0, 1, 3]


@given(general_position_sets(min_size=3, max_size=9))
@settings(deadline=None, max_examples=60, suppress_health_check=[HealthCheck.filter_too_much])
def test_convex_hull_contains_every_point(P):
    hull = convex_hull(P.points)
    verts = [P[k] for k in hull]
    assert is_convex_ccw(verts)
    assert hull[0] == P.bottommost(range(P.n))
    for k in range(P.n):
        loc = locate_in_convex_polygon(P[k], verts)
        assert loc == (Location.BOUNDARY if k in hull else Location.INSIDE)


def test_covered_indices(five_points):
    assert covered_indices(five_points, (0, 1, 3)) == [0, 1, 3, 4]
    assert covered_indices(five_points, (0, 1, 2)) == [0, 1, 2]


# -------------------------------------------------------------------
# Predicate identities
# -------------------------------------------------------------------

@given(general_position_sets(min_size=3, max_size=6))
@settings(deadline=None, max_examples=60, suppress_health_check=[HealthCheck.filter_too_much])
def test_orientation_flips_with_swapped_arguments(P):
    for a, b, c in itertools.permutations(P.points, 3):
        assert orientation(a, b, c) == -orientation(a, c, b)
        assert orientation(a, b, c) != Orientation.COLLINEAR


@given(general_position_sets(min_size=3, max_size=6))
@settings(deadline=None, max_examples=60, suppress_health_check=[HealthCheck.filter_too_much])
def test_triangle_area2_ignores_cyclic_rotation(P):
    for a, b, c in itertools.combinations(P.points, 3):
        area = triangle_area2(a, b, c)
        assert area > 0
        assert triangle_area2(b, c, a) == area
        assert triangle_area2(c, a, b) == area


@given(general_position_sets(min_size=3, max_size=7), st.integers(min_value=2, max_value=16))
@settings(deadline=None, max_examples=60, suppress_health_check=[HealthCheck.filter_too_much])
def test_predicates_survive_integer_scaling(P, k):
    S = P.scaled(k)
    for i, j, l in itertools.permutations(range(P.n), 3):
        assert orientation(S[i], S[j], S[l]) == orientation(P[i], P[j], P[l])
        assert in_right_half_plane(S[i], S[j], S[l]) == in_right_half_plane(P[i], P[j], P[l])
    for i, j, l in itertools.combinations(range(P.n), 3):
        assert count_strict_interior(S[i], S[j], S[l], S.points) == count_strict_interior(
            P[i], P[j], P[l], P.points
        )
    for i in range(P.n):
        assert angular_sort(S, i).order == angular_sort(P, i).order
    hull = convex_hull(P.points)
    assert convex_hull(S.points) == hull
    assert is_convex_ccw([S[k] for k in hull])


@given(general_position_sets(min_size=4, max_size=9))
@settings(deadline=None, max_examples=80, suppress_health_check=[HealthCheck.filter_too_much])
def test_interior_count_splits_into_fan_around_inner_point(P):
    counter = P.triangle_counter
    for a, b, c in itertools.combinations(range(P.n), 3):
        total = count_strict_interior(P[a], P[b], P[c], P.points)
        inner = [
            s for s in range(P.n)
            if s not in (a, b, c) and count_strict_interior(P[a], P[b], P[c], [P[s]]) == 1
        ]
        assert len(inner) == total
        for s in inner:
            parts = counter.count(a, b, s) + counter.count(b, c, s) + counter.count(c, a, s)
            assert total == 1 + parts
