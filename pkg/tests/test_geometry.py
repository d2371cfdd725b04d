import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perimeter_defense.geometry import (
    GeometryError,
    approach_angle,
    arc_distance_ccw,
    build_perimeter,
    circle,
    closest_point,
    is_exterior,
    outward_point,
    perimeter_from_spec,
    piecewise_ellipse,
    segment_entry,
    tangent_points,
)

from conftest import random_convex


def test_build_reorients_cw_square():
    c = build_perimeter([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert c.total_length == pytest.approx(4.0)
    e, f = c.edges, np.roll(c.edges, -1, axis=0)
    cross = e[:, 0] * f[:, 1] - e[:, 1] * f[:, 0]
    assert np.all(cross > 0)


def test_build_drops_interior_point():
    c = build_perimeter([(0, 0), (1, 0), (0.5, 0.5), (1, 1), (0, 1)])
    assert c.n == 4


def test_dense_circle_length():
    c = circle(1.0, 2048)
    assert abs(c.total_length - 2 * math.pi) < 1e-5
    assert c.total_length == pytest.approx(2 * 2048 * math.sin(math.pi / 2048), abs=1e-12)


def test_build_errors():
    with pytest.raises(GeometryError):
        build_perimeter([(0, 0), (1, 1)])
    with pytest.raises(GeometryError):
        build_perimeter([(0, 0), (1, 1), (2, 2), (3, 3)])


def test_build_idempotent(square):
    again = build_perimeter(square.vertices)
    np.testing.assert_array_equal(again.vertices, square.vertices)
    assert again.total_length == square.total_length


def test_point_and_tangent(square):
    np.testing.assert_allclose(square.point_at(1.5), [1.0, 0.5])
    tm, tp = square.tangent_at(1.5)
    np.testing.assert_allclose(tm, [0, 1])
    np.testing.assert_allclose(tp, [0, 1])
    tm, tp = square.tangent_at(1.0)
    np.testing.assert_allclose(tm, [1, 0])
    np.testing.assert_allclose(tp, [0, 1])
    np.testing.assert_allclose(square.point_at(4.0), [0.0, 0.0])
    assert square.vertex_is_corner.all()


def test_arc_distance(square):
    assert arc_distance_ccw(square, 3.5, 0.5) == pytest.approx(1.0)
    assert arc_distance_ccw(square, 0.5, 0.5) == 0.0
    assert arc_distance_ccw(square, 0.5, 3.5) == pytest.approx(3.0)


@given(st.floats(0, 3.999), st.floats(0, 3.999))
def test_arc_distance_complement(a, b):
    c = build_perimeter([(0, 0), (1, 0), (1, 1), (0, 1)])
    if abs(a - b) > 1e-9:
        assert arc_distance_ccw(c, a, b) + arc_distance_ccw(c, b, a) == pytest.approx(4.0, abs=1e-12)


def test_tangent_points_square(square):
    fan = tangent_points(square, (2, 0.5))
    assert fan.s_tan_R == pytest.approx(1.0)
    assert fan.s_tan_L == pytest.approx(2.0)
    assert fan.width(square) == pytest.approx(1.0)


def test_tangent_fan_circle(circ):
    fan = tangent_points(circ, (2.0, 0.0))
    # visible half-angle acos(1/2): arc 2*pi/3 on the unit circle
    assert fan.width(circ) == pytest.approx(2 * math.pi / 3, abs=5e-3)


def test_tangent_points_boundary_error(square):
    with pytest.raises(GeometryError):
        tangent_points(square, (1.0, 0.5))
    with pytest.raises(GeometryError):
        tangent_points(square, (0.5, 0.5))


def test_approach_angle_examples(square):
    x = (2, 0.5)
    pm, pp = approach_angle(square, x, 1.5)
    assert pm == pytest.approx(math.pi / 2) and pp == pytest.approx(math.pi / 2)
    pm, pp = approach_angle(square, x, 2.0)
    assert pm == pytest.approx(1.1071, abs=1e-4)
    assert pp == pytest.approx(0.4636, abs=1e-4)
    with pytest.raises(GeometryError):
        approach_angle(square, x, 3.0)


def test_approach_angle_smooth_limits(circ):
    x = (3.0, 0.0)
    fan = tangent_points(circ, x)
    assert approach_angle(circ, x, fan.s_tan_L)[0] == pytest.approx(0.0, abs=4e-3)
    assert approach_angle(circ, x, fan.s_tan_R)[1] == pytest.approx(math.pi, abs=4e-3)


def _segment_hits_interior(c, x, p):
    # penetration can be confined to a sliver next to p, so sample densely there
    for t in np.concatenate((np.linspace(0.02, 0.98, 49), 1.0 - np.geomspace(1e-2, 1e-7, 30))):
        q = x + t * (p - x)
        if np.min(c.signed_distances(q)) > 1e-9:
            return True
    return False


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_visibility_property(seed):
    rng = np.random.default_rng(seed)
    c = random_convex(rng)
    x = outward_point(c, rng.uniform(0, c.total_length), rng.uniform(0.05, 2.0))
    fan = tangent_points(c, x)
    for s in rng.uniform(0, c.total_length, 40):
        p = c.point_at(s)
        inside = fan.contains(c, s)
        d = min(arc_distance_ccw(c, s, fan.s_tan_R), arc_distance_ccw(c, fan.s_tan_L, s),
                arc_distance_ccw(c, fan.s_tan_R, s), arc_distance_ccw(c, s, fan.s_tan_L))
        if d < 1e-6:
            continue
        assert _segment_hits_interior(c, x, p) == (not inside)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_approach_angle_non_increasing(seed):
    rng = np.random.default_rng(seed)
    c = random_convex(rng)
    x = outward_point(c, rng.uniform(0, c.total_length), rng.uniform(0.05, 2.0))
    fan = tangent_points(c, x)
    seq = []
    for s in fan.s_tan_R + np.linspace(0, fan.width(c), 200):
        seq.extend(approach_angle(c, x, c.reduce(s)))
    # the outer one-sided angles at the two fan ends belong to hidden edges
    assert np.all(np.diff(seq[1:-1]) <= 1e-9)


def test_closest_point(square):
    s, p, d = closest_point(square, (2.0, 0.5))
    assert s == pytest.approx(1.5)
    assert d == pytest.approx(1.0)
    np.testing.assert_allclose(p, [1.0, 0.5])


def test_segment_entry(square):
    assert segment_entry(square, (2.0, 0.5), (3.0, 0.5)) is None
    assert segment_entry(square, (2.0, 0.5), (0.5, 0.5)) == pytest.approx(2 / 3, abs=1e-8)


def test_exterior(square):
    assert is_exterior(square, (2, 0.5))
    assert not is_exterior(square, (1, 0.5))
    assert not is_exterior(square, (0.5, 0.5))


def test_spec_shapes():
    c = perimeter_from_spec({"shape": "piecewise-ellipse", "n": 256})
    assert c.n == 256
    lo, hi = c.vertices.min(axis=0), c.vertices.max(axis=0)
    np.testing.assert_allclose(lo, [-2.0, -3.0], atol=1e-2)
    np.testing.assert_allclose(hi, [5.0, 2.0], atol=1e-2)
    assert perimeter_from_spec({"vertices": [[0, 0], [1, 0], [0, 1]]}).n == 3
    with pytest.raises(GeometryError):
        perimeter_from_spec({"shape": "hexagon"})
    with pytest.raises(GeometryError):
        piecewise_ellipse([[1, 1]])
