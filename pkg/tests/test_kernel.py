"""Kernel primitives: exact formulas, guarded predicates, TLS line fit."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from oracles import brute_tls_line
from simsonlab.errors import CoincidentPoints, CollinearInput, DegenerateCloud, NearParallel
from simsonlab.kernel import (
    Circle,
    Line,
    Point,
    circumcircle,
    collinearity_residual,
    distance,
    foot_of_perpendicular,
    line_intersection,
    line_through,
    local_scale,
    perpendicular_through,
    point_on_circle,
)

UNIT = Circle(Point(0.0, 0.0), 1.0)
X_AXIS = Line(0.0, 1.0, 0.0)

coords = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


def test_point_on_circle_axes():
    assert point_on_circle(UNIT, 0.0) == Point(1.0, 0.0)
    p = point_on_circle(UNIT, math.pi / 2)
    assert abs(p.x) < 1e-15 and abs(p.y - 1.0) < 1e-15
    p = point_on_circle(Circle(Point(2.0, 0.0), 3.0), math.pi)
    assert abs(p.x + 1.0) < 1e-15 and abs(p.y) < 1e-15


def test_point_on_circle_radius_error():
    rng = random.Random(7)
    for _ in range(200):
        circle = Circle(Point(rng.uniform(-50, 50), rng.uniform(-50, 50)), rng.uniform(0.1, 40))
        angle = rng.uniform(-10, 10)
        p = point_on_circle(circle, angle)
        scale = max(1.0, circle.radius, abs(circle.center.x), abs(circle.center.y))
        assert abs(distance(p, circle.center) - circle.radius) <= 4 * math.ulp(scale)


def test_circle_validation():
    with pytest.raises(ValueError):
        Circle(Point(0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        Circle(Point(0.0, 0.0), math.inf)
    with pytest.raises(ValueError):
        Circle(Point(math.nan, 0.0), 1.0)


def test_line_through_x_axis():
    line = line_through(Point(0.0, 0.0), Point(1.0, 0.0))
    assert line == Line(0.0, 1.0, 0.0)


def test_line_through_y_axis():
    line = line_through(Point(0.0, 0.0), Point(0.0, 2.0))
    assert line == Line(-1.0, 0.0, 0.0)


def test_line_through_diagonal_sign_convention():
    # left normal of direction (1, 1)/sqrt(2) is (-1, 1)/sqrt(2)
    line = line_through(Point(0.0, 0.0), Point(1.0, 1.0))
    s = math.sqrt(2.0) / 2.0
    assert abs(line.a + s) < 1e-15
    assert abs(line.b - s) < 1e-15
    assert abs(line.c) < 1e-15


def test_line_through_coincident():
    with pytest.raises(CoincidentPoints):
        line_through(Point(1.0, 1.0), Point(1.0, 1.0))
    with pytest.raises(CoincidentPoints):
        line_through(Point(1e6, 0.0), Point(1e6 + 1e-9, 0.0))


@given(coords, coords, coords, coords)
def test_line_through_normalized_and_incident(px, py, qx, qy):
    p, q = Point(px, py), Point(qx, qy)
    if math.hypot(qx - px, qy - py) <= 1e-6 * local_scale((p, q)):
        return
    line = line_through(p, q)
    scale = local_scale((p, q))
    assert abs(line.a**2 + line.b**2 - 1.0) <= 1e-12
    assert abs(line.signed_distance(p)) <= 1e-12 * scale
    assert abs(line.signed_distance(q)) <= 1e-12 * scale


def test_foot_axis_drop():
    assert foot_of_perpendicular(Point(0.0, 1.0), X_AXIS) == Point(0.0, 0.0)


def test_foot_identity_on_line():
    line = line_through(Point(0.0, 1.0), Point(2.0, 3.0))
    p = Point(1.0, 2.0)
    f = foot_of_perpendicular(p, line)
    assert distance(f, p) <= 4 * math.ulp(2.0)


def test_foot_hand_solved():
    # line x + y = 1, normalized; foot of (2, 2) solved by hand is (1/2, 1/2)
    s = math.sqrt(2.0) / 2.0
    line = Line(s, s, -s)
    f = foot_of_perpendicular(Point(2.0, 2.0), line)
    assert abs(f.x - 0.5) < 1e-15 and abs(f.y - 0.5) < 1e-15


@given(coords, coords, coords, coords, coords, coords)
def test_foot_idempotent_and_orthogonal(px, py, ax, ay, bx, by):
    a, b = Point(ax, ay), Point(bx, by)
    if math.hypot(bx - ax, by - ay) <= 1e-6 * local_scale((a, b)):
        return
    line = line_through(a, b)
    p = Point(px, py)
    f = foot_of_perpendicular(p, line)
    f2 = foot_of_perpendicular(f, line)
    scale = local_scale((p, a, b))
    assert abs(f2.x - f.x) <= 4 * math.ulp(scale)
    assert abs(f2.y - f.y) <= 4 * math.ulp(scale)
    dx, dy = line.direction()
    assert abs((f.x - p.x) * dx + (f.y - p.y) * dy) <= 1e-12 * scale


def test_perpendicular_through():
    perp = perpendicular_through(Point(3.0, 4.0), X_AXIS)
    assert abs(perp.signed_distance(Point(3.0, 4.0))) < 1e-15
    assert abs(perp.a * X_AXIS.a + perp.b * X_AXIS.b) < 1e-15


def test_line_intersection_axes():
    y_axis = line_through(Point(0.0, 0.0), Point(0.0, 1.0))
    p = line_intersection(X_AXIS, y_axis)
    assert abs(p.x) < 1e-15 and abs(p.y) < 1e-15


def test_line_intersection_parallel():
    shifted = Line(0.0, 1.0, -1.0)
    with pytest.raises(NearParallel):
        line_intersection(X_AXIS, shifted)


def test_line_intersection_hand_solved():
    s = math.sqrt(2.0) / 2.0
    l1 = Line(s, s, -s)  # x + y = 1
    l2 = line_through(Point(0.0, 0.0), Point(1.0, 1.0))  # x - y = 0
    p = line_intersection(l1, l2)
    assert abs(p.x - 0.5) < 1e-12 and abs(p.y - 0.5) < 1e-12


def test_collinearity_exact_lines():
    line, report = collinearity_residual([Point(0.0, 0.0), Point(1.0, 0.0), Point(2.0, 0.0)])
    assert report.max_abs == 0.0
    assert abs(abs(line.b) - 1.0) < 1e-15 and abs(line.c) < 1e-15
    pts = [Point(float(i), float(i)) for i in range(4)]
    line, report = collinearity_residual(pts)
    assert report.max_abs <= 1e-15
    assert abs(line.signed_distance(Point(1.5, 1.5))) <= 1e-15


def test_collinearity_sign_convention():
    line, _ = collinearity_residual([Point(0.0, 0.0), Point(1.0, 0.1), Point(2.0, -0.1)])
    assert line.a > 0.0 or (line.a == 0.0 and line.b >= 0.0)


def test_collinearity_small_offset_frozen():
    # frozen from the brute-force TLS oracle for ((0,0),(1,0),(2,h)), h=1e-3
    h = 1e-3
    line, report = collinearity_residual([Point(0.0, 0.0), Point(1.0, 0.0), Point(2.0, h)])
    assert report.max_abs == pytest.approx(0.0003333332916666681, rel=1e-9, abs=0.0)
    assert report.which == 1
    (oa, ob, oc), omax = brute_tls_line([(0.0, 0.0), (1.0, 0.0), (2.0, h)])
    assert report.max_abs == pytest.approx(omax, rel=1e-9)
    assert line.a == pytest.approx(oa, abs=1e-9)
    assert line.b == pytest.approx(ob, abs=1e-9)
    assert line.c == pytest.approx(oc, abs=1e-9)


def test_collinearity_matches_brute_oracle_on_random_clouds():
    rng = random.Random(42)
    for _ in range(25):
        pts = [Point(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(rng.randint(3, 9))]
        try:
            line, report = collinearity_residual(pts)
        except DegenerateCloud:
            continue
        (oa, ob, oc), omax = brute_tls_line([(p.x, p.y) for p in pts])
        assert report.max_abs == pytest.approx(omax, rel=1e-6, abs=1e-12)
        assert line.a == pytest.approx(oa, abs=1e-6)
        assert line.b == pytest.approx(ob, abs=1e-6)
        assert line.c == pytest.approx(oc, abs=1e-6)


def test_collinearity_exact_on_random_lines():
    rng = random.Random(9)
    for _ in range(100):
        a = Point(rng.uniform(-5, 5), rng.uniform(-5, 5))
        b = Point(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if distance(a, b) < 1e-3:
            continue
        ts = sorted(rng.uniform(-2, 2) for _ in range(5))
        pts = [Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)) for t in ts]
        _, report = collinearity_residual(pts)
        assert report.max_abs <= 1e-12 * local_scale(pts)


def test_collinearity_degenerate_cloud():
    with pytest.raises(DegenerateCloud):
        collinearity_residual([Point(1.0, 1.0)] * 5)
    with pytest.raises(ValueError):
        collinearity_residual([Point(0.0, 0.0), Point(1.0, 0.0)])


def test_circumcircle_examples():
    c = circumcircle(Point(1.0, 0.0), Point(0.0, 1.0), Point(-1.0, 0.0))
    assert abs(c.center.x) < 1e-14 and abs(c.center.y) < 1e-14
    assert c.radius == pytest.approx(1.0, abs=1e-14)
    c = circumcircle(Point(0.0, 0.0), Point(2.0, 0.0), Point(0.0, 2.0))
    assert c.center == pytest.approx((1.0, 1.0), abs=1e-14)
    assert c.radius == pytest.approx(math.sqrt(2.0), abs=1e-14)
    with pytest.raises(CollinearInput):
        circumcircle(Point(0.0, 0.0), Point(1.0, 0.0), Point(2.0, 0.0))
    with pytest.raises(CollinearInput):
        circumcircle(Point(0.0, 0.0), Point(0.0, 0.0), Point(2.0, 0.0))


def test_circumcircle_permutation_invariant_and_incident():
    rng = random.Random(5)
    for _ in range(50):
        pts = [Point(rng.uniform(-10, 10), rng.uniform(-10, 10)) for _ in range(3)]
        try:
            base = circumcircle(*pts)
        except CollinearInput:
            continue
        scale = max(1.0, base.radius)
        for p in pts:
            assert abs(distance(base.center, p) - base.radius) <= 1e-10 * scale
        perms = [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
        for i, j, k in perms:
            other = circumcircle(pts[i], pts[j], pts[k])
            assert distance(other.center, base.center) <= 1e-10 * scale
            assert abs(other.radius - base.radius) <= 1e-10 * scale
