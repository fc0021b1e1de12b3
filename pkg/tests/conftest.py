"""Shared helpers for the test suite."""

from __future__ import annotations

import math

from simsonlab.kernel import TAU, Circle, Point, angular_distance
from simsonlab.simson import InscribedPolygon


def regular_polygon(n, phase=0.0, radius=1.0, center=(0.0, 0.0)) -> InscribedPolygon:
    circle = Circle(Point(*center), radius)
    angles = sorted((phase + TAU * j / n) % TAU for j in range(n))
    return InscribedPolygon(circle, tuple(angles))


def random_polygon(rng, n, radius=1.0, center=(0.0, 0.0), min_sep=0.1) -> InscribedPolygon:
    """Random inscribed n-gon with a minimum angular gap between vertices."""
    while True:
        angles = sorted(rng.uniform(0.0, TAU) for _ in range(n))
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(angles[0] + TAU - angles[-1])
        if min(gaps) >= min_sep:
            return InscribedPolygon(Circle(Point(*center), radius), tuple(angles))


def random_probe(rng, poly: InscribedPolygon, margin=0.05) -> float:
    """Random probe angle at least ``margin`` radians from every vertex."""
    while True:
        theta = rng.uniform(0.0, TAU)
        if all(angular_distance(theta, a) >= margin for a in poly.vertex_angles):
            return theta


def equilateral_example() -> InscribedPolygon:
    """The worked example triangle: unit circle, vertices at 90/210/330 deg."""
    return regular_polygon(3, phase=math.pi / 2)
