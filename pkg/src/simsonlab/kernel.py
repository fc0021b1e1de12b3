"""Planar primitives and numerically guarded predicates.

Coordinates are plain floats in scene length units. Every tolerance is
relative to a local length scale ``max(1, |coordinates|)``, so predicates
behave identically for scenes of any size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import CoincidentPoints, CollinearInput, DegenerateCloud, NearParallel

TAU = 2.0 * math.pi

# Relative threshold below which configurations count as degenerate.
DEGENERACY_EPS = 1e-9

# Determinant threshold for near-parallel line intersection.
PARALLEL_EPS = 1e-12


class Point(NamedTuple):
    x: float
    y: float


class Line(NamedTuple):
    """Line in implicit form ``a*x + b*y + c = 0`` with ``a**2 + b**2 == 1``."""

    a: float
    b: float
    c: float

    def signed_distance(self, p: Point) -> float:
        return self.a * p.x + self.b * p.y + self.c

    def direction(self) -> tuple[float, float]:
        return (-self.b, self.a)

    def flipped(self) -> Line:
        return Line(-self.a, -self.b, -self.c)


class ResidualReport(NamedTuple):
    max_abs: float
    which: int


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"circle radius must be positive and finite, got {self.radius!r}")
        if not (math.isfinite(self.center.x) and math.isfinite(self.center.y)):
            raise ValueError("circle center must be finite")


def wrap_angle(t: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(t, TAU)
    return t + TAU if t < 0.0 else t


def angular_distance(a: float, b: float) -> float:
    """Shortest angular separation between two angles, in [0, pi]."""
    d = math.fmod(a - b, TAU)
    if d < -math.pi:
        d += TAU
    elif d > math.pi:
        d -= TAU
    return abs(d)


def distance(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def local_scale(points: Sequence[Point]) -> float:
    """Reference length for relative tolerances: max(1, coordinate magnitude)."""
    m = 1.0
    for p in points:
        ax, ay = abs(p.x), abs(p.y)
        if ax > m:
            m = ax
        if ay > m:
            m = ay
    return m


def point_on_circle(circle: Circle, angle: float) -> Point:
    return Point(
        circle.center.x + circle.radius * math.cos(angle),
        circle.center.y + circle.radius * math.sin(angle),
    )


def line_through(p: Point, q: Point) -> Line:
    """Normalized line through two points; (a, b) is the left normal of q - p."""
    dx = q.x - p.x
    dy = q.y - p.y
    norm = math.hypot(dx, dy)
    if norm <= DEGENERACY_EPS * local_scale((p, q)):
        raise CoincidentPoints(f"points too close for a line: {p} and {q}")
    a = -dy / norm
    b = dx / norm
    return Line(a, b, -(a * p.x + b * p.y))


def perpendicular_through(p: Point, line: Line) -> Line:
    """Normalized line through p perpendicular to ``line``."""
    a, b = -line.b, line.a
    return Line(a, b, -(a * p.x + b * p.y))


def foot_of_perpendicular(p: Point, line: Line) -> Point:
    d = line.a * p.x + line.b * p.y + line.c
    return Point(p.x - d * line.a, p.y - d * line.b)


def line_intersection(l1: Line, l2: Line) -> Point:
    det = l1.a * l2.b - l2.a * l1.b
    if abs(det) < PARALLEL_EPS:
        raise NearParallel(f"lines nearly parallel (det={det!r})")
    x = (-l1.c * l2.b + l2.c * l1.b) / det
    y = (-l1.a * l2.c + l2.a * l1.c) / det
    return Point(x, y)


def _smallest_eigvec(sxx: float, sxy: float, syy: float) -> tuple[float, float]:
    """Unit eigenvector of the smallest eigenvalue of [[sxx, sxy], [sxy, syy]]."""
    half_diff = 0.5 * (sxx - syy)
    disc = math.hypot(half_diff, sxy)
    lam = 0.5 * (sxx + syy) - disc
    # Two candidate rows of (S - lam I); pick the better conditioned one.
    v1 = (sxy, lam - sxx)
    v2 = (lam - syy, sxy)
    n1 = v1[0] * v1[0] + v1[1] * v1[1]
    n2 = v2[0] * v2[0] + v2[1] * v2[1]
    vx, vy = v1 if n1 >= n2 else v2
    norm = math.hypot(vx, vy)
    if norm == 0.0:
        return (1.0, 0.0)  # isotropic cloud: any direction fits equally
    return (vx / norm, vy / norm)


def collinearity_residual(points: Sequence[Point]) -> tuple[Line, ResidualReport]:
    """Total-least-squares line through >= 3 points and the worst offset.

    Orthogonal regression (not vertical-offset) so the result is rotation
    invariant; the normal is sign-fixed to a >= 0 (ties: b >= 0).
    """
    n = len(points)
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    scale = local_scale(points)
    mx = math.fsum(p.x for p in points) / n
    my = math.fsum(p.y for p in points) / n
    spread = max(math.hypot(p.x - mx, p.y - my) for p in points)
    if spread <= DEGENERACY_EPS * scale:
        raise DegenerateCloud("all points coincide")
    sxx = math.fsum((p.x - mx) ** 2 for p in points)
    sxy = math.fsum((p.x - mx) * (p.y - my) for p in points)
    syy = math.fsum((p.y - my) ** 2 for p in points)
    a, b = _smallest_eigvec(sxx, sxy, syy)
    if a < 0.0 or (a == 0.0 and b < 0.0):
        a, b = -a, -b
    line = Line(a, b, -(a * mx + b * my))
    max_abs = -1.0
    which = 0
    for i, p in enumerate(points):
        r = abs(line.signed_distance(p))
        if r > max_abs:
            max_abs = r
            which = i
    return line, ResidualReport(max_abs, which)


def circumcircle(pa: Point, pb: Point, pc: Point) -> Circle:
    scale = local_scale((pa, pb, pc))
    try:
        _, report = collinearity_residual((pa, pb, pc))
    except DegenerateCloud as exc:
        raise CollinearInput("coincident input points") from exc
    if report.max_abs <= DEGENERACY_EPS * scale:
        raise CollinearInput(f"collinear input points (residual {report.max_abs!r})")
    d = 2.0 * (pa.x * (pb.y - pc.y) + pb.x * (pc.y - pa.y) + pc.x * (pa.y - pb.y))
    na = pa.x * pa.x + pa.y * pa.y
    nb = pb.x * pb.x + pb.y * pb.y
    nc = pc.x * pc.x + pc.y * pc.y
    ux = (na * (pb.y - pc.y) + nb * (pc.y - pa.y) + nc * (pa.y - pb.y)) / d
    uy = (na * (pc.x - pb.x) + nb * (pa.x - pc.x) + nc * (pb.x - pa.x)) / d
    center = Point(ux, uy)
    radius = (distance(center, pa) + distance(center, pb) + distance(center, pc)) / 3.0
    return Circle(center, radius)
