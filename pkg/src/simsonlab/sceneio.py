"""Declarative scene format, SVG renderer and canonical JSON reports.

This is the bit-exact boundary shared by the CLI and the UI: scenes are
JSON (schema_version 1), figures are SVG 1.1 with fixed 6-decimal number
formatting, reports are canonical JSON (sorted keys, 12 significant
digits) so goldens regenerate byte-identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Union

from .curves import CurveSample, HypocycloidSpec
from .envelope import EnvelopeTrace, LineFamily
from .errors import InconsistentArtifacts, RangeError, SchemaError
from .fitting import FitReport
from .kernel import TAU, Circle, Line, Point, wrap_angle
from .simson import ConstructionTrace, InscribedPolygon

SCHEMA_VERSION = 1

MIN_SAMPLES = 32
MIN_VERTICES = 3
MAX_VERTICES = 12

DISPLAY_LAYERS = (
    "circle",
    "polygon",
    "sides",
    "perpendiculars",
    "feet",
    "sub_simson_lines",
    "simson_line",
    "envelope",
    "hypocycloid_overlay",
)

DEFAULT_DISPLAY = {
    "circle": True,
    "polygon": True,
    "sides": True,
    "perpendiculars": True,
    "feet": True,
    "sub_simson_lines": True,
    "simson_line": True,
    "envelope": False,
    "hypocycloid_overlay": False,
}


@dataclass(frozen=True)
class LayerStyle:
    stroke: str
    width: float


def default_styles(n: int) -> dict[str, LayerStyle]:
    """Palette per the classical construction script: sides and
    perpendiculars green, sub-construction Simson lines blue, top-level feet
    and final line blue for triangles / orange above, envelope black."""
    green = "#2e8b57"
    blue = "#1f77b4"
    orange = "#e07b00"
    top = blue if n == 3 else orange
    return {
        "circle": LayerStyle("#666666", 1.0),
        "polygon": LayerStyle("#333333", 1.25),
        "sides": LayerStyle(green, 1.0),
        "perpendiculars": LayerStyle(green, 0.75),
        "feet": LayerStyle(top, 1.0),
        "sub_simson_lines": LayerStyle(blue, 1.0),
        "simson_line": LayerStyle(top, 1.5),
        "envelope": LayerStyle("#000000", 2.0),
        "hypocycloid_overlay": LayerStyle("#888888", 1.25),
    }


@dataclass(frozen=True)
class RegularPolygon:
    n: int
    phase: float = 0.0


@dataclass(frozen=True)
class PolygonAngles:
    values: tuple[float, ...]


PolygonSpec = Union[RegularPolygon, PolygonAngles]


@dataclass(frozen=True)
class Scene:
    circle: Circle
    polygon: PolygonSpec
    probe_theta: float = 0.0
    samples: int = 100
    display: dict[str, bool] = field(default_factory=lambda: dict(DEFAULT_DISPLAY))
    styles: dict[str, LayerStyle] = field(default_factory=dict)


def resolve_polygon(scene: Scene) -> InscribedPolygon:
    """Expand the polygon spec into explicit sorted vertex angles."""
    if isinstance(scene.polygon, RegularPolygon):
        n = scene.polygon.n
        phase = scene.polygon.phase
        angles = sorted(wrap_angle(phase + TAU * j / n) for j in range(n))
    else:
        angles = sorted(wrap_angle(v) for v in scene.polygon.values)
    return InscribedPolygon(scene.circle, tuple(angles))


# ---------------------------------------------------------------------------
# Scene parsing


def _expect_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"expected an object, got {type(value).__name__}", path)
    return value


def _expect_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {type(value).__name__}", path)
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError("expected a finite number", path)
    return value


def _expect_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {type(value).__name__}", path)
    return value


def _expect_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"expected a boolean, got {type(value).__name__}", path)
    return value


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"expected a string, got {type(value).__name__}", path)
    return value


def _reject_unknown(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in allowed:
            where = f"{path}.{key}" if path else str(key)
            raise SchemaError("unknown field", where)


def _parse_point(value: Any, path: str) -> Point:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError("expected [x, y]", path)
    return Point(_expect_number(value[0], f"{path}[0]"), _expect_number(value[1], f"{path}[1]"))


def _parse_circle(value: Any, path: str) -> Circle:
    obj = _expect_dict(value, path)
    _reject_unknown(obj, ("center", "radius"), path)
    if "center" not in obj or "radius" not in obj:
        raise SchemaError("circle needs center and radius", path)
    center = _parse_point(obj["center"], f"{path}.center")
    radius = _expect_number(obj["radius"], f"{path}.radius")
    if radius <= 0.0:
        raise RangeError("radius must be positive", f"{path}.radius")
    return Circle(center, radius)


def _parse_polygon(value: Any, path: str) -> PolygonSpec:
    obj = _expect_dict(value, path)
    kind = _expect_str(obj.get("kind"), f"{path}.kind") if "kind" in obj else None
    if kind == "regular":
        _reject_unknown(obj, ("kind", "n", "phase"), path)
        if "n" not in obj:
            raise SchemaError("regular polygon needs n", path)
        n = _expect_int(obj["n"], f"{path}.n")
        if not MIN_VERTICES <= n <= MAX_VERTICES:
            raise RangeError(f"n must be in {MIN_VERTICES}..{MAX_VERTICES}", f"{path}.n")
        phase = _expect_number(obj.get("phase", 0.0), f"{path}.phase")
        return RegularPolygon(n, phase)
    if kind == "angles":
        _reject_unknown(obj, ("kind", "values"), path)
        values = obj.get("values")
        if not isinstance(values, list):
            raise SchemaError("expected a list of angles", f"{path}.values")
        if not MIN_VERTICES <= len(values) <= MAX_VERTICES:
            raise RangeError(
                f"needs {MIN_VERTICES}..{MAX_VERTICES} angles", f"{path}.values"
            )
        angles = tuple(
            _expect_number(v, f"{path}.values[{i}]") for i, v in enumerate(values)
        )
        return PolygonAngles(angles)
    raise SchemaError('kind must be "regular" or "angles"', f"{path}.kind")


def _parse_display(value: Any, path: str) -> dict[str, bool]:
    obj = _expect_dict(value, path)
    _reject_unknown(obj, DISPLAY_LAYERS, path)
    display = dict(DEFAULT_DISPLAY)
    for key, raw in obj.items():
        display[key] = _expect_bool(raw, f"{path}.{key}")
    return display


def _parse_styles(value: Any, path: str) -> dict[str, LayerStyle]:
    obj = _expect_dict(value, path)
    _reject_unknown(obj, DISPLAY_LAYERS, path)
    styles: dict[str, LayerStyle] = {}
    for key, raw in obj.items():
        sub = _expect_dict(raw, f"{path}.{key}")
        _reject_unknown(sub, ("stroke", "width"), f"{path}.{key}")
        if "stroke" not in sub or "width" not in sub:
            raise SchemaError("style needs stroke and width", f"{path}.{key}")
        stroke = _expect_str(sub["stroke"], f"{path}.{key}.stroke")
        width = _expect_number(sub["width"], f"{path}.{key}.width")
        if width <= 0.0:
            raise RangeError("width must be positive", f"{path}.{key}.width")
        styles[key] = LayerStyle(stroke, width)
    return styles


def scene_from_dict(obj: Any, path: str = "") -> Scene:
    root = _expect_dict(obj, path or "scene")
    _reject_unknown(
        root,
        ("schema_version", "circle", "polygon", "probe_theta", "samples", "display", "styles"),
        path,
    )
    prefix = f"{path}." if path else ""
    if "schema_version" in root:
        version = _expect_int(root["schema_version"], f"{prefix}schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaError(f"unsupported schema_version {version}", f"{prefix}schema_version")
    if "circle" not in root:
        raise SchemaError("scene needs a circle", f"{prefix}circle")
    if "polygon" not in root:
        raise SchemaError("scene needs a polygon", f"{prefix}polygon")
    circle = _parse_circle(root["circle"], f"{prefix}circle")
    polygon = _parse_polygon(root["polygon"], f"{prefix}polygon")
    probe_theta = _expect_number(root.get("probe_theta", 0.0), f"{prefix}probe_theta")
    samples = _expect_int(root.get("samples", 100), f"{prefix}samples")
    if samples < MIN_SAMPLES:
        raise RangeError(f"samples must be >= {MIN_SAMPLES}", f"{prefix}samples")
    display = _parse_display(root.get("display", {}), f"{prefix}display")
    styles = _parse_styles(root.get("styles", {}), f"{prefix}styles")
    scene = Scene(circle, polygon, probe_theta, samples, display, styles)
    try:
        resolve_polygon(scene)
    except ValueError as exc:
        raise SchemaError(str(exc), f"{prefix}polygon") from exc
    return scene


def parse_scene(text: str) -> Scene:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return scene_from_dict(obj)


def scene_to_dict(scene: Scene) -> dict:
    if isinstance(scene.polygon, RegularPolygon):
        polygon: dict[str, Any] = {
            "kind": "regular",
            "n": scene.polygon.n,
            "phase": scene.polygon.phase,
        }
    else:
        polygon = {"kind": "angles", "values": list(scene.polygon.values)}
    return {
        "schema_version": SCHEMA_VERSION,
        "circle": {
            "center": [scene.circle.center.x, scene.circle.center.y],
            "radius": scene.circle.radius,
        },
        "polygon": polygon,
        "probe_theta": scene.probe_theta,
        "samples": scene.samples,
        "display": {k: scene.display[k] for k in DISPLAY_LAYERS},
        "styles": {
            k: {"stroke": v.stroke, "width": v.width} for k, v in sorted(scene.styles.items())
        },
    }


def serialize_scene(scene: Scene) -> str:
    """Full-precision scene JSON; parse(serialize(s)) == s."""
    return json.dumps(scene_to_dict(scene), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Canonical JSON (reports, trace dumps)


def _canon(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number in canonical JSON: {value!r}")
        if value == 0.0:
            return 0.0
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {str(k): _canon(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canon(v) for v in value]
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


def canonical_json(obj: Any) -> str:
    """Sorted keys, compact separators, floats at 12 significant digits."""
    return json.dumps(_canon(obj), sort_keys=True, separators=(",", ":")) + "\n"


def report_to_dict(fit: FitReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "passed": fit.passed,
        "n_cusps_detected": fit.n_cusps_detected,
        "rms": fit.rms,
        "max_dev": fit.max_dev,
        "notes": fit.notes,
        "spec": {
            "center": [fit.spec.center.x, fit.spec.center.y],
            "fixed_radius": fit.spec.fixed_radius,
            "cusps": fit.spec.cusps,
            "phase": fit.spec.phase,
        },
    }


def write_report(fit: FitReport) -> str:
    return canonical_json(report_to_dict(fit))


def parse_report(text: str) -> FitReport:
    obj = json.loads(text)
    root = _expect_dict(obj, "report")
    spec_obj = _expect_dict(root["spec"], "report.spec")
    spec = HypocycloidSpec(
        _parse_point(spec_obj["center"], "report.spec.center"),
        _expect_number(spec_obj["fixed_radius"], "report.spec.fixed_radius"),
        _expect_int(spec_obj["cusps"], "report.spec.cusps"),
        _expect_number(spec_obj["phase"], "report.spec.phase"),
    )
    return FitReport(
        spec,
        _expect_number(root["rms"], "report.rms"),
        _expect_number(root["max_dev"], "report.max_dev"),
        _expect_int(root["n_cusps_detected"], "report.n_cusps_detected"),
        _expect_bool(root["passed"], "report.passed"),
        _expect_str(root["notes"], "report.notes"),
    )


# ---------------------------------------------------------------------------
# SVG rendering

CANVAS_WIDTH = 800
CANVAS_HEIGHT = 800
# The circumcircle's diameter fills this fraction of the smaller canvas side.
CIRCLE_FILL_FRACTION = 0.8

_ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII")

Element = tuple


@dataclass
class RenderDoc:
    """Deterministically ordered drawables in pixel coordinates."""

    width: int
    height: int
    scale: float
    scene_center: Point
    groups: list[tuple[str, list[Element]]] = field(default_factory=list)

    def to_svg(self) -> str:
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="#ffffff"/>',
        ]
        for layer, elements in self.groups:
            if not elements:
                continue
            out.append(f'<g id="{layer}">')
            for el in elements:
                out.append(_element_svg(el))
            out.append("</g>")
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _fmt(v: float) -> str:
    text = f"{v:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _element_svg(el: Element) -> str:
    kind = el[0]
    if kind == "circle":
        _, cx, cy, r, stroke, width = el
        return (
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="none" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
        )
    if kind == "segment":
        _, x1, y1, x2, y2, stroke, width = el
        return (
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
        )
    if kind == "polyline":
        _, pts, stroke, width = el
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        return (
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}"/>'
        )
    if kind == "marker":
        _, x, y, r, fill = el
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{fill}"/>'
    if kind == "label":
        _, x, y, text, fill, size = el
        return (
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" fill="{fill}" font-family="sans-serif" '
            f'font-size="{size}" text-anchor="middle">{text}</text>'
        )
    raise ValueError(f"unknown element kind {kind!r}")


def _clip_line_to_rect(
    line: Line, cx: float, cy: float, half_w: float, half_h: float
) -> tuple[Point, Point] | None:
    """Segment of an infinite line inside an axis-aligned rectangle."""
    d = line.signed_distance(Point(cx, cy))
    px, py = cx - d * line.a, cy - d * line.b
    ux, uy = -line.b, line.a
    tmin, tmax = -math.inf, math.inf
    for pos, vel, lo, hi in (
        (px, ux, cx - half_w, cx + half_w),
        (py, uy, cy - half_h, cy + half_h),
    ):
        if abs(vel) < 1e-300:
            if pos < lo or pos > hi:
                return None
            continue
        t1 = (lo - pos) / vel
        t2 = (hi - pos) / vel
        if t1 > t2:
            t1, t2 = t2, t1
        tmin = max(tmin, t1)
        tmax = min(tmax, t2)
    if tmin >= tmax:
        return None
    return (Point(px + tmin * ux, py + tmin * uy), Point(px + tmax * ux, py + tmax * uy))


def _polys_match(a: InscribedPolygon, b: InscribedPolygon) -> bool:
    if a.n != b.n:
        return False
    tol = 1e-12 * max(a.scale, b.scale)
    if (
        abs(a.circle.center.x - b.circle.center.x) > tol
        or abs(a.circle.center.y - b.circle.center.y) > tol
        or abs(a.circle.radius - b.circle.radius) > tol
    ):
        return False
    return all(abs(x - y) <= 1e-12 for x, y in zip(a.vertex_angles, b.vertex_angles))


def render_svg(
    scene: Scene,
    *,
    trace: ConstructionTrace | None = None,
    family: LineFamily | None = None,
    envelope: EnvelopeTrace | None = None,
    curve: CurveSample | None = None,
) -> str:
    """Render the scene plus optional artifacts to an SVG 1.1 document.

    Hidden layers are omitted entirely; infinite lines are clipped to the
    viewbox; all numbers print with 6 decimals for byte-stable goldens.
    """
    poly = resolve_polygon(scene)
    if trace is not None and not _polys_match(trace.poly, poly):
        raise InconsistentArtifacts("construction trace belongs to a different scene")
    if family is not None and not _polys_match(family.poly, poly):
        raise InconsistentArtifacts("line family belongs to a different scene")

    width, height = CANVAS_WIDTH, CANVAS_HEIGHT
    radius = scene.circle.radius
    scale = CIRCLE_FILL_FRACTION * min(width, height) / (2.0 * radius)
    cc = scene.circle.center
    half_w = (width / 2.0) / scale
    half_h = (height / 2.0) / scale

    def to_px(p: Point) -> tuple[float, float]:
        return (width / 2.0 + (p.x - cc.x) * scale, height / 2.0 - (p.y - cc.y) * scale)

    def clipped_segment(line: Line, stroke: str, w: float) -> Element | None:
        seg = _clip_line_to_rect(line, cc.x, cc.y, half_w, half_h)
        if seg is None:
            return None
        (x1, y1), (x2, y2) = to_px(seg[0]), to_px(seg[1])
        return ("segment", x1, y1, x2, y2, stroke, w)

    styles = default_styles(poly.n)
    styles.update(scene.styles)
    show = scene.display

    doc = RenderDoc(width, height, scale, cc)

    if show["circle"]:
        cx, cy = to_px(cc)
        st = styles["circle"]
        doc.groups.append(("circle", [("circle", cx, cy, radius * scale, st.stroke, st.width)]))

    if show["polygon"]:
        st = styles["polygon"]
        elements: list[Element] = []
        vertices = poly.vertices()
        for i, v in enumerate(vertices):
            w = vertices[(i + 1) % len(vertices)]
            (x1, y1), (x2, y2) = to_px(v), to_px(w)
            elements.append(("segment", x1, y1, x2, y2, st.stroke, st.width))
        for i, v in enumerate(vertices):
            x, y = to_px(v)
            elements.append(("marker", x, y, 3.0, st.stroke))
            label_at = Point(
                cc.x + 1.12 * radius * math.cos(poly.vertex_angles[i]),
                cc.y + 1.12 * radius * math.sin(poly.vertex_angles[i]),
            )
            lx, ly = to_px(label_at)
            elements.append(("label", lx, ly + 5.0, _ROMAN[i], st.stroke, 14))
        probe_theta = trace.theta if trace is not None else scene.probe_theta
        probe = Point(
            cc.x + radius * math.cos(probe_theta), cc.y + radius * math.sin(probe_theta)
        )
        px, py = to_px(probe)
        elements.append(("marker", px, py, 4.0, "#c62828"))
        label_at = Point(
            cc.x + 1.12 * radius * math.cos(probe_theta),
            cc.y + 1.12 * radius * math.sin(probe_theta),
        )
        lx, ly = to_px(label_at)
        elements.append(("label", lx, ly + 5.0, "P", "#c62828", 14))
        doc.groups.append(("polygon", elements))

    construction_layers = ("sides", "sub_simson_lines", "perpendiculars", "feet")
    if trace is not None:
        for layer in construction_layers:
            if not show[layer]:
                continue
            st = styles[layer]
            elements = []
            for step in trace.steps:
                if step.layer != layer:
                    continue
                if isinstance(step.element, Line):
                    seg = clipped_segment(step.element, st.stroke, st.width)
                    if seg is not None:
                        elements.append(seg)
                else:
                    x, y = to_px(step.element)
                    elements.append(("marker", x, y, 2.5, st.stroke))
            doc.groups.append((layer, elements))

    if show["simson_line"]:
        st = styles["simson_line"]
        elements = []
        if family is not None:
            for line in family.lines:
                seg = clipped_segment(line, st.stroke, st.width * 0.5)
                if seg is not None:
                    elements.append(seg)
        if trace is not None:
            seg = clipped_segment(trace.result.line, st.stroke, st.width)
            if seg is not None:
                elements.append(seg)
        if elements:
            doc.groups.append(("simson_line", elements))

    if show["hypocycloid_overlay"] and curve is not None:
        st = styles["hypocycloid_overlay"]
        pts = [to_px(p) for p in curve.points]
        if pts:
            pts.append(pts[0])
        doc.groups.append(("hypocycloid_overlay", [("polyline", pts, st.stroke, st.width)]))

    if show["envelope"] and envelope is not None:
        st = styles["envelope"]
        pts = [to_px(p) for p in envelope.points]
        if pts:
            pts.append(pts[0])
        elements = [("polyline", pts, st.stroke, st.width)]
        for idx in envelope.cusp_indices:
            x, y = to_px(envelope.points[idx])
            elements.append(("marker", x, y, 3.0, st.stroke))
        doc.groups.append(("envelope", elements))

    return doc.to_svg()
