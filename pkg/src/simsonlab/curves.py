"""Parametric hypocycloids: evaluation, sampling and cusp locations.

A hypocycloid is traced by a point on a circle of radius r rolling without
slipping inside a fixed circle of radius R; for R = k*r with integer k the
curve closes with k cusps. The parameter is aligned so that each cusp sits
at polar angle phase + 2*pi*j/k and is reached at that same parameter value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernel import TAU, Point, wrap_angle


@dataclass(frozen=True)
class HypocycloidSpec:
    """Fixed-circle radius R, integer cusp count k >= 3, cusp-pattern phase.

    The rolling radius r = R / k is implied, never stored.
    """

    center: Point
    fixed_radius: float
    cusps: int
    phase: float

    def __post_init__(self) -> None:
        if isinstance(self.cusps, bool) or not isinstance(self.cusps, int):
            raise ValueError(f"cusp count must be an integer, got {self.cusps!r}")
        if self.cusps < 3:
            raise ValueError(f"cusp count must be >= 3, got {self.cusps}")
        if not (math.isfinite(self.fixed_radius) and self.fixed_radius > 0.0):
            raise ValueError(f"fixed radius must be positive and finite, got {self.fixed_radius!r}")
        if not math.isfinite(self.phase):
            raise ValueError("phase must be finite")
        if not (math.isfinite(self.center.x) and math.isfinite(self.center.y)):
            raise ValueError("center must be finite")

    @property
    def rolling_radius(self) -> float:
        return self.fixed_radius / self.cusps


@dataclass(frozen=True)
class CurveSample:
    params: tuple[float, ...]
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.params) != len(self.points):
            raise ValueError("params and points must have equal length")
        for prev, cur in zip(self.params, self.params[1:]):
            if cur <= prev:
                raise ValueError("params must be strictly increasing")


def hypocycloid_point(spec: HypocycloidSpec, t: float) -> Point:
    """Point of the hypocycloid at parameter t.

    With r = R/k the base curve (center at origin, phase 0) is
    ``x = (R-r)*cos t + r*cos(((R-r)/r)*t)``,
    ``y = (R-r)*sin t - r*sin(((R-r)/r)*t)``;
    for k = 3 this is the classical deltoid
    ``x = r*(2 cos t + cos 2t), y = r*(2 sin t - sin 2t)``.
    """
    r = spec.fixed_radius / spec.cusps
    big = spec.fixed_radius - r
    ratio = big / r  # == cusps - 1
    u = t - spec.phase
    bx = big * math.cos(u) + r * math.cos(ratio * u)
    by = big * math.sin(u) - r * math.sin(ratio * u)
    cp = math.cos(spec.phase)
    sp = math.sin(spec.phase)
    return Point(
        spec.center.x + cp * bx - sp * by,
        spec.center.y + sp * bx + cp * by,
    )


def cusp_params(spec: HypocycloidSpec) -> tuple[float, ...]:
    """Parameters (== polar angles about the center) of the k cusps.

    The curve speed vanishes there and each cusp point lies at distance
    ``fixed_radius`` from the center.
    """
    return tuple(wrap_angle(spec.phase + TAU * j / spec.cusps) for j in range(spec.cusps))


def sample_hypocycloid(spec: HypocycloidSpec, n_samples: int) -> CurveSample:
    """Uniform parameter grid over [0, 2*pi), closure implied (no repeat point)."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    params = tuple(TAU * j / n_samples for j in range(n_samples))
    points = tuple(hypocycloid_point(spec, t) for t in params)
    return CurveSample(params, points)
