"""Simson-Wallace lines of inscribed polygons.

For a triangle: the feet of the perpendiculars from a circumcircle point P
onto the three side lines are collinear; the line through them is the
Simson-Wallace line. For an n-gon the construction recurses: omit each
vertex in turn, take the n sub-polygon Simson-Wallace lines, and drop the
perpendiculars from P onto those. The n feet are again collinear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import DegenerateCloud
from .kernel import (
    DEGENERACY_EPS,
    TAU,
    Circle,
    Line,
    Point,
    ResidualReport,
    angular_distance,
    collinearity_residual,
    foot_of_perpendicular,
    line_through,
    perpendicular_through,
    point_on_circle,
)

# Probe angles closer than this (radians) to a vertex flag the result as
# degenerate instead of raising, so the UI can drag P through vertices.
VERTEX_EPS = 1e-6

# Largest polygon accepted; the memoized recursion visits O(2**n) subsets.
MAX_VERTICES = 12

_ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII")


def collinearity_tol(n: int) -> float:
    """Relative collinearity tolerance: 1e-10 for triangles, x100 per
    recursion level, capped at 1e-7."""
    return min(1e-10 * 100.0 ** (n - 3), 1e-7)


@dataclass(frozen=True)
class InscribedPolygon:
    """A circle plus sorted vertex angles; vertices are concyclic by construction."""

    circle: Circle
    vertex_angles: tuple[float, ...]

    def __post_init__(self) -> None:
        angles = tuple(float(a) for a in self.vertex_angles)
        object.__setattr__(self, "vertex_angles", angles)
        n = len(angles)
        if not 3 <= n <= MAX_VERTICES:
            raise ValueError(f"polygon needs 3..{MAX_VERTICES} vertices, got {n}")
        for a in angles:
            if not math.isfinite(a):
                raise ValueError("vertex angles must be finite")
            if not 0.0 <= a < TAU:
                raise ValueError(f"vertex angles must lie in [0, 2*pi), got {a!r}")
        for prev, cur in zip(angles, angles[1:]):
            if cur - prev < DEGENERACY_EPS:
                raise ValueError("vertex angles must be strictly increasing and separated")
        if angles[0] + TAU - angles[-1] < DEGENERACY_EPS:
            raise ValueError("first and last vertex angles too close around the circle")

    @property
    def n(self) -> int:
        return len(self.vertex_angles)

    @property
    def scale(self) -> float:
        """Scene scale: reference length for relative tolerances."""
        return max(1.0, self.circle.radius)

    def vertices(self) -> tuple[Point, ...]:
        return tuple(point_on_circle(self.circle, a) for a in self.vertex_angles)


@dataclass(frozen=True)
class ProbePoint:
    theta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta):
            raise ValueError("probe angle must be finite")


ProbeLike = Union[ProbePoint, float]


def _as_theta(p: ProbeLike) -> float:
    return p.theta if isinstance(p, ProbePoint) else float(p)


@dataclass(frozen=True)
class SimsonResult:
    line: Line
    feet: tuple[Point, ...]
    residual: ResidualReport
    degenerate: bool


@dataclass(frozen=True)
class TraceStep:
    layer: str
    element: Union[Line, Point]
    label: str = ""


@dataclass(frozen=True)
class ConstructionTrace:
    poly: InscribedPolygon
    theta: float
    probe: Point
    steps: tuple[TraceStep, ...]
    result: SimsonResult


def vertex_adjacent(poly: InscribedPolygon, theta: float) -> bool:
    """True when the probe angle is within VERTEX_EPS of some vertex."""
    return any(angular_distance(theta, a) < VERTEX_EPS for a in poly.vertex_angles)


def side_lines(poly: InscribedPolygon) -> tuple[Line, Line, Line]:
    """Side lines of a triangle through vertex pairs (I,II), (I,III), (II,III)."""
    if poly.n != 3:
        raise ValueError(f"side_lines needs a triangle, got {poly.n} vertices")
    va, vb, vc = poly.vertices()
    return (line_through(va, vb), line_through(va, vc), line_through(vb, vc))


def _most_separated_line(feet: tuple[Point, ...]) -> tuple[Line, ResidualReport]:
    """Line through the two most separated feet; residual over all of them."""
    best = -1.0
    bi, bj = 0, 1
    for i in range(len(feet)):
        fi = feet[i]
        for j in range(i + 1, len(feet)):
            fj = feet[j]
            d = (fi.x - fj.x) ** 2 + (fi.y - fj.y) ** 2
            if d > best:
                best = d
                bi, bj = i, j
    line = line_through(feet[bi], feet[bj])
    max_abs = -1.0
    which = 0
    for i, f in enumerate(feet):
        r = abs(line.signed_distance(f))
        if r > max_abs:
            max_abs = r
            which = i
    return line, ResidualReport(max_abs, which)


def _triangle_feet_line(
    va: Point, vb: Point, vc: Point, probe: Point
) -> tuple[tuple[Point, ...], Line, ResidualReport]:
    sides = (line_through(va, vb), line_through(va, vc), line_through(vb, vc))
    feet = tuple(foot_of_perpendicular(probe, s) for s in sides)
    line, report = _most_separated_line(feet)
    return feet, line, report


def simson_line_triangle(poly: InscribedPolygon, p: ProbeLike) -> SimsonResult:
    """Simson-Wallace line of a triangle for probe P on the circumcircle."""
    if poly.n != 3:
        raise ValueError(f"simson_line_triangle needs a triangle, got {poly.n} vertices")
    theta = _as_theta(p)
    probe = point_on_circle(poly.circle, theta)
    va, vb, vc = poly.vertices()
    feet, line, report = _triangle_feet_line(va, vb, vc, probe)
    degenerate = vertex_adjacent(poly, theta) or report.max_abs > collinearity_tol(3) * poly.scale
    return SimsonResult(line, feet, report, degenerate)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


def _fallback_line(feet: tuple[Point, ...], probe: Point) -> Line:
    """Deterministic line when the feet cloud collapses to (almost) one point."""
    f = feet[0]
    if math.hypot(probe.x - f.x, probe.y - f.y) > 0.0:
        return perpendicular_through(f, line_through(f, probe))
    return Line(0.0, 1.0, -f.y)


class _Recursion:
    """One top-level Simson evaluation; memoizes sub-polygon lines by bitmask."""

    def __init__(self, poly: InscribedPolygon, probe: Point):
        self.vertices = poly.vertices()
        self.probe = probe
        self.memo: dict[int, Line] = {}

    def line_for(self, mask: int) -> Line:
        cached = self.memo.get(mask)
        if cached is not None:
            return cached
        idx = list(_iter_bits(mask))
        if len(idx) == 3:
            _, line, _ = _triangle_feet_line(
                self.vertices[idx[0]], self.vertices[idx[1]], self.vertices[idx[2]], self.probe
            )
        else:
            feet = self.feet_for(mask)
            try:
                line, _ = collinearity_residual(feet)
            except DegenerateCloud:
                line = _fallback_line(feet, self.probe)
        self.memo[mask] = line
        return line

    def feet_for(self, mask: int) -> tuple[Point, ...]:
        """Feet of perpendiculars from P onto the omit-one-vertex Simson lines."""
        return tuple(
            foot_of_perpendicular(self.probe, self.line_for(mask & ~(1 << v)))
            for v in _iter_bits(mask)
        )


def simson_line_polygon(poly: InscribedPolygon, p: ProbeLike) -> SimsonResult:
    """Simson-Wallace line of an inscribed n-gon (n >= 3).

    For n = 3 this is exactly ``simson_line_triangle``. For n > 3 the feet
    are the perpendicular feet of P on the n sub-polygon Simson-Wallace
    lines (one sub-polygon per omitted vertex) and the returned line is the
    total-least-squares line through them.
    """
    if poly.n == 3:
        return simson_line_triangle(poly, p)
    theta = _as_theta(p)
    probe = point_on_circle(poly.circle, theta)
    rec = _Recursion(poly, probe)
    full = (1 << poly.n) - 1
    feet = rec.feet_for(full)
    degenerate = vertex_adjacent(poly, theta)
    try:
        line, report = collinearity_residual(feet)
    except DegenerateCloud:
        line = _fallback_line(feet, probe)
        report = ResidualReport(0.0, 0)
        degenerate = True
    if report.max_abs > collinearity_tol(poly.n) * poly.scale:
        degenerate = True
    return SimsonResult(line, feet, report, degenerate)


def construction_trace(poly: InscribedPolygon, p: ProbeLike) -> ConstructionTrace:
    """Every intermediate object of the classical construction, in order.

    Triangle: 3 side lines, 3 perpendiculars, 3 feet, the Simson-Wallace
    line. n-gon: the n sub-polygon Simson-Wallace lines, n perpendiculars
    from P onto them, n feet, the final line.
    """
    theta = _as_theta(p)
    probe = point_on_circle(poly.circle, theta)
    result = simson_line_polygon(poly, p)
    steps: list[TraceStep] = []
    if poly.n == 3:
        names = [f"{_ROMAN[0]}-{_ROMAN[1]}", f"{_ROMAN[0]}-{_ROMAN[2]}", f"{_ROMAN[1]}-{_ROMAN[2]}"]
        targets = list(side_lines(poly))
        for line, label in zip(targets, names):
            steps.append(TraceStep("sides", line, label))
    else:
        rec = _Recursion(poly, probe)
        full = (1 << poly.n) - 1
        targets = []
        for v in range(poly.n):
            sub = rec.line_for(full & ~(1 << v))
            targets.append(sub)
            steps.append(TraceStep("sub_simson_lines", sub, f"omit {_ROMAN[v]}"))
    for i, target in enumerate(targets):
        steps.append(TraceStep("perpendiculars", perpendicular_through(probe, target), f"p{i + 1}"))
    for i, foot in enumerate(result.feet):
        steps.append(TraceStep("feet", foot, f"f{i + 1}"))
    steps.append(TraceStep("simson_line", result.line, "simson"))
    return ConstructionTrace(poly, theta, probe, tuple(steps), result)
