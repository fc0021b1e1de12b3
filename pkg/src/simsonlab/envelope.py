"""Envelope extraction for the Simson-Wallace line family.

As the probe point sweeps the circumcircle the Simson-Wallace lines form a
one-parameter family L(theta) = 0; the envelope point at theta solves
L(theta) = 0, L'(theta) = 0 with the derivative taken by central finite
differences of the sign-aligned implicit coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import median

from .errors import TooFewSamples
from .kernel import TAU, Line, Point
from .simson import VERTEX_EPS, InscribedPolygon, simson_line_polygon, vertex_adjacent

# Determinant threshold for the 2x2 envelope solve; below it the secant
# fallback kicks in, halving delta down to MIN_DELTA before dropping.
DET_EPS = 1e-8
MIN_DELTA = 1e-6


@dataclass(frozen=True)
class LineFamily:
    poly: InscribedPolygon
    thetas: tuple[float, ...]
    lines: tuple[Line, ...]

    def __post_init__(self) -> None:
        if len(self.thetas) != len(self.lines):
            raise ValueError("thetas and lines must have equal length")
        for prev, cur in zip(self.thetas, self.thetas[1:]):
            if cur <= prev:
                raise ValueError("thetas must be strictly increasing")

    def __len__(self) -> int:
        return len(self.thetas)


@dataclass
class EnvelopeTrace:
    thetas: tuple[float, ...]
    points: tuple[Point, ...]
    speeds: tuple[float, ...]
    cusp_indices: tuple[int, ...] = ()
    dropped_thetas: tuple[float, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class Cusp:
    index: int
    theta: float
    point: Point


def build_family(poly: InscribedPolygon, n_samples: int = 100) -> LineFamily:
    """One Simson-Wallace line per theta on a uniform grid over [0, 2*pi).

    Grid angles within VERTEX_EPS of a vertex are nudged forward by
    VERTEX_EPS (repeatedly if needed) so no degenerate theta enters the
    family; residual-degenerate samples are excluded.
    """
    if n_samples < 32:
        raise TooFewSamples(f"need n_samples >= 32, got {n_samples}")
    if TAU / n_samples <= 4.0 * VERTEX_EPS:
        raise ValueError(f"grid too fine for vertex nudging: {n_samples} samples")
    thetas: list[float] = []
    lines: list[Line] = []
    for j in range(n_samples):
        theta = TAU * j / n_samples
        while vertex_adjacent(poly, theta):
            theta += VERTEX_EPS
        result = simson_line_polygon(poly, theta)
        if result.degenerate:
            continue
        thetas.append(theta)
        lines.append(result.line)
    return LineFamily(poly, tuple(thetas), tuple(lines))


def _aligned(reference: Line, other: Line) -> Line:
    """Flip ``other`` so its normal points the same way as ``reference``'s.

    Normalized implicit coefficients are only defined up to global sign;
    finite differences need locally consistent signs.
    """
    if reference.a * other.a + reference.b * other.b < 0.0:
        return other.flipped()
    return other


def _circular_gap(prev: float, nxt: float) -> float:
    gap = math.fmod(nxt - prev, TAU)
    if gap <= 0.0:
        gap += TAU
    return gap


def envelope_points(family: LineFamily) -> EnvelopeTrace:
    """Envelope point for each family line, plus finite-difference speeds.

    Ill-conditioned samples fall back to intersecting L(theta) with
    L(theta + delta), halving delta until the 2x2 system conditions or
    MIN_DELTA is reached; samples that never condition are dropped (and
    reported in ``dropped_thetas``), never fatal.
    """
    n = len(family)
    if n < 32:
        raise TooFewSamples(f"need a family of >= 32 lines, got {n}")
    thetas: list[float] = []
    points: list[Point] = []
    dropped: list[float] = []
    for i in range(n):
        theta = family.thetas[i]
        line = family.lines[i]
        prev = _aligned(line, family.lines[i - 1])
        nxt = _aligned(line, family.lines[(i + 1) % n])
        gap = _circular_gap(family.thetas[i - 1], family.thetas[(i + 1) % n])
        da = (nxt.a - prev.a) / gap
        db = (nxt.b - prev.b) / gap
        dc = (nxt.c - prev.c) / gap
        det = line.a * db - da * line.b
        if abs(det) >= DET_EPS:
            x = (-line.c * db + dc * line.b) / det
            y = (-line.a * dc + da * line.c) / det
            thetas.append(theta)
            points.append(Point(x, y))
            continue
        point = _secant_fallback(family.poly, theta, line, TAU / n)
        if point is None:
            dropped.append(theta)
        else:
            thetas.append(theta)
            points.append(point)
    if len(points) < 32:
        raise TooFewSamples(f"only {len(points)} envelope samples survived")
    speeds = _central_speeds(thetas, points)
    return EnvelopeTrace(tuple(thetas), tuple(points), speeds, (), tuple(dropped))


def _secant_fallback(
    poly: InscribedPolygon, theta: float, line: Line, delta0: float
) -> Point | None:
    delta = delta0
    while delta >= MIN_DELTA:
        other = simson_line_polygon(poly, theta + delta).line
        det = line.a * other.b - other.a * line.b
        if abs(det) >= DET_EPS:
            x = (-line.c * other.b + other.c * line.b) / det
            y = (-line.a * other.c + other.a * line.c) / det
            return Point(x, y)
        delta *= 0.5
    return None


def _central_speeds(thetas: list[float], points: list[Point]) -> tuple[float, ...]:
    n = len(points)
    speeds = []
    for i in range(n):
        p_prev = points[i - 1]
        p_next = points[(i + 1) % n]
        gap = _circular_gap(thetas[i - 1], thetas[(i + 1) % n])
        speeds.append(math.hypot(p_next.x - p_prev.x, p_next.y - p_prev.y) / gap)
    return tuple(speeds)


# Cusps sit where the envelope point's speed dips far below typical; the
# hypocycloid speed vanishes linearly at a cusp, so this loose factor is
# safe for grids of a few hundred samples and up.
CUSP_SPEED_FACTOR = 0.1


def _parabola_vertex(x1: float, y1: float, x2: float, y2: float, x3: float, y3: float) -> float:
    """Abscissa of the vertex of the parabola through three points.

    Returns x2 unchanged when the points are not strictly convex.
    """
    d1 = (y1 - y2) / (x1 - x2)
    d2 = (y2 - y3) / (x2 - x3)
    a = (d1 - d2) / (x1 - x3)
    if a <= 0.0:
        return x2
    b = d1 - a * (x1 + x2)
    return -b / (2.0 * a)


def _quadratic_at(x1: float, y1: float, x2: float, y2: float, x3: float, y3: float, x: float) -> float:
    """Lagrange quadratic through three points, evaluated at x."""
    l1 = (x - x2) * (x - x3) / ((x1 - x2) * (x1 - x3))
    l2 = (x - x1) * (x - x3) / ((x2 - x1) * (x2 - x3))
    l3 = (x - x1) * (x - x2) / ((x3 - x1) * (x3 - x2))
    return y1 * l1 + y2 * l2 + y3 * l3


def detect_cusps(trace: EnvelopeTrace) -> list[Cusp]:
    """Strict local speed minima well below the median speed, refined by
    parabolic interpolation; fills ``trace.cusp_indices``."""
    n = len(trace)
    if n < 64:
        raise TooFewSamples(f"need a trace of >= 64 points, got {n}")
    threshold = CUSP_SPEED_FACTOR * median(trace.speeds)
    cusps: list[Cusp] = []
    for i in range(n):
        s = trace.speeds[i]
        s_prev = trace.speeds[i - 1]
        s_next = trace.speeds[(i + 1) % n]
        if not (s < s_prev and s < s_next and s < threshold):
            continue
        t2 = trace.thetas[i]
        t1 = trace.thetas[i - 1]
        t3 = trace.thetas[(i + 1) % n]
        if t1 > t2:
            t1 -= TAU
        if t3 < t2:
            t3 += TAU
        t_star = _parabola_vertex(t1, s_prev, t2, s, t3, s_next)
        t_star = min(max(t_star, t1), t3)
        p1 = trace.points[i - 1]
        p2 = trace.points[i]
        p3 = trace.points[(i + 1) % n]
        x = _quadratic_at(t1, p1.x, t2, p2.x, t3, p3.x, t_star)
        y = _quadratic_at(t1, p1.y, t2, p2.y, t3, p3.y, t_star)
        cusps.append(Cusp(i, t_star, Point(x, y)))
    trace.cusp_indices = tuple(c.index for c in cusps)
    return cusps


def trace_from_points(thetas: tuple[float, ...], points: tuple[Point, ...]) -> EnvelopeTrace:
    """Build a trace (with central-difference speeds) from raw samples."""
    if len(thetas) != len(points):
        raise ValueError("thetas and points must have equal length")
    speeds = _central_speeds(list(thetas), list(points))
    return EnvelopeTrace(tuple(thetas), tuple(points), speeds)
