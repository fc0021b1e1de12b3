"""Hypocycloid evaluation, cusps, sampling; checked against the classical
deltoid equations and a rolling-contact simulation oracle."""

from __future__ import annotations

import math
import random

import pytest

from oracles import rolling_curve_point
from simsonlab.kernel import TAU, Point, angular_distance, distance
from simsonlab.curves import (
    CurveSample,
    HypocycloidSpec,
    cusp_params,
    hypocycloid_point,
    sample_hypocycloid,
)

ORIGIN = Point(0.0, 0.0)
DELTOID = HypocycloidSpec(ORIGIN, 3.0, 3, 0.0)  # r = 1


def deltoid_eq1(r: float, t: float) -> Point:
    """Literal classical deltoid parametrization."""
    return Point(
        r * (2.0 * math.cos(t) + math.cos(2.0 * t)),
        r * (2.0 * math.sin(t) - math.sin(2.0 * t)),
    )


def test_spec_validation():
    with pytest.raises(ValueError):
        HypocycloidSpec(ORIGIN, 3.0, 2, 0.0)
    with pytest.raises(ValueError):
        HypocycloidSpec(ORIGIN, 3.0, 3.5, 0.0)  # non-integer ratio rejected
    with pytest.raises(ValueError):
        HypocycloidSpec(ORIGIN, -1.0, 3, 0.0)
    assert DELTOID.rolling_radius == 1.0


def test_deltoid_axis_values():
    p = hypocycloid_point(DELTOID, 0.0)
    assert p.x == pytest.approx(3.0, abs=1e-15)
    assert p.y == pytest.approx(0.0, abs=1e-15)
    p = hypocycloid_point(DELTOID, math.pi)
    assert p.x == pytest.approx(-1.0, abs=1e-12)
    assert p.y == pytest.approx(0.0, abs=1e-12)


def test_astroid_point_matches_rolling_oracle():
    # frozen from the rolling-contact simulation (k=4, R=4, t=pi/4);
    # the exact value is (sqrt(2), sqrt(2))
    spec = HypocycloidSpec(ORIGIN, 4.0, 4, 0.0)
    p = hypocycloid_point(spec, math.pi / 4)
    assert p.x == pytest.approx(1.4142135623730951, abs=1e-12)
    assert p.y == pytest.approx(1.4142135623730951, abs=1e-12)
    sim = rolling_curve_point(4.0, 4, math.pi / 4)
    assert p.x == pytest.approx(sim[0], abs=5e-8)
    assert p.y == pytest.approx(sim[1], abs=5e-8)


def test_rolling_oracle_cross_check_general():
    rng = random.Random(3)
    for _ in range(5):
        k = rng.randint(3, 6)
        radius = rng.uniform(0.5, 4.0)
        t = rng.uniform(0.1, TAU)
        spec = HypocycloidSpec(ORIGIN, radius, k, 0.0)
        p = hypocycloid_point(spec, t)
        sim = rolling_curve_point(radius, k, t)
        assert math.hypot(p.x - sim[0], p.y - sim[1]) <= 1e-6 * radius


def test_eq1_equivalence_10000_params():
    # general formula with k = 3 vs the literal classical equations
    r = 1.0
    worst = 0.0
    for j in range(10000):
        t = TAU * j / 10000.0
        p = hypocycloid_point(DELTOID, t)
        q = deltoid_eq1(r, t)
        worst = max(worst, abs(p.x - q.x), abs(p.y - q.y))
    assert worst <= 1e-12 * r


def test_cusp_params_deltoid():
    params = cusp_params(DELTOID)
    assert params == pytest.approx((0.0, TAU / 3.0, 2.0 * TAU / 3.0), abs=1e-15)
    for t in params:
        p = hypocycloid_point(DELTOID, t)
        assert distance(p, ORIGIN) == pytest.approx(3.0, abs=1e-12)
        # the cusp sits at polar angle == parameter
        assert angular_distance(math.atan2(p.y, p.x), t) <= 1e-12


def test_cusp_params_astroid_and_phase():
    spec = HypocycloidSpec(Point(1.0, -2.0), 2.0, 4, 0.3)
    params = cusp_params(spec)
    assert len(params) == 4
    for j, t in enumerate(params):
        assert angular_distance(t, 0.3 + j * math.pi / 2.0) <= 1e-12
        p = hypocycloid_point(spec, t)
        assert distance(p, spec.center) == pytest.approx(2.0, abs=1e-12)


def test_speed_positive_between_cusps():
    for k in (3, 4, 5):
        spec = HypocycloidSpec(ORIGIN, float(k), k, 0.1)
        params = cusp_params(spec)
        h = 1e-6
        for j in range(k):
            mid = params[j] + math.pi / k  # halfway to the next cusp
            a = hypocycloid_point(spec, mid - h)
            b = hypocycloid_point(spec, mid + h)
            speed = distance(a, b) / (2.0 * h)
            assert speed > 0.5  # regular point, far from zero


def test_sample_at_cusp_params():
    sample = sample_hypocycloid(DELTOID, 3)
    cusps = cusp_params(DELTOID)
    assert sample.params == pytest.approx(cusps, abs=1e-15)
    for p, t in zip(sample.points, cusps):
        q = hypocycloid_point(DELTOID, t)
        assert p == pytest.approx(q, abs=1e-15)


def test_sample_grid_properties():
    sample = sample_hypocycloid(DELTOID, 360)
    assert len(sample.params) == 360
    assert sample.params[0] == 0.0
    assert sample.params[-1] < TAU  # closure implied, no repeated endpoint
    dists = [distance(p, ORIGIN) for p in sample.points]
    assert max(dists) <= 3.0 * (1.0 + 1e-12)
    # radius extrema over the grid: [r, 3r] for the deltoid
    assert min(dists) == pytest.approx(1.0, abs=1e-3 * 3.0)
    assert max(dists) == pytest.approx(3.0, abs=1e-3 * 3.0)


def test_closure_and_symmetry():
    rng = random.Random(11)
    for _ in range(5):
        k = rng.randint(3, 7)
        spec = HypocycloidSpec(
            Point(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            rng.uniform(0.5, 3.0),
            k,
            rng.uniform(0.0, TAU),
        )
        for _ in range(20):
            t = rng.uniform(0.0, TAU)
            p = hypocycloid_point(spec, t)
            q = hypocycloid_point(spec, t + TAU)
            assert distance(p, q) <= 1e-12 * spec.fixed_radius
            # reflecting the parameter about the phase mirrors across the phase axis
            u = t - spec.phase
            m = hypocycloid_point(spec, spec.phase - u)
            cp, sp = math.cos(spec.phase), math.sin(spec.phase)
            vx, vy = p.x - spec.center.x, p.y - spec.center.y
            rx = cp * vx + sp * vy
            ry = sp * vx - cp * vy  # reflection across the phase axis
            mirrored = Point(
                spec.center.x + cp * rx - sp * ry,
                spec.center.y + sp * rx + cp * ry,
            )
            assert distance(m, mirrored) <= 1e-12 * max(1.0, spec.fixed_radius)


def test_containment():
    rng = random.Random(13)
    for _ in range(5):
        k = rng.randint(3, 8)
        radius = rng.uniform(0.5, 5.0)
        spec = HypocycloidSpec(ORIGIN, radius, k, rng.uniform(0, TAU))
        r = spec.rolling_radius
        for _ in range(200):
            t = rng.uniform(0.0, TAU)
            d = distance(hypocycloid_point(spec, t), ORIGIN)
            assert r - 1e-12 * radius <= d <= radius + 1e-12 * radius


def test_curve_sample_validation():
    with pytest.raises(ValueError):
        CurveSample((0.0, 0.0), (Point(0, 0), Point(1, 1)))
    with pytest.raises(ValueError):
        CurveSample((0.0,), (Point(0, 0), Point(1, 1)))
