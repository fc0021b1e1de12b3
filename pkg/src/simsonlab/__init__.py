"""Simson-Wallace line laboratory.

Constructs Simson-Wallace lines of inscribed polygons, extracts the
envelope of the line family as the probe point sweeps the circumcircle,
verifies numerically that the envelope is an n-cusped hypocycloid, and
renders everything to SVG.
"""

from .curves import CurveSample, HypocycloidSpec, cusp_params, hypocycloid_point, sample_hypocycloid
from .envelope import (
    Cusp,
    EnvelopeTrace,
    LineFamily,
    build_family,
    detect_cusps,
    envelope_points,
    trace_from_points,
)
from .errors import (
    CoincidentPoints,
    CollinearInput,
    DegenerateCloud,
    GeometryError,
    InconsistentArtifacts,
    NearParallel,
    RangeError,
    SchemaError,
    TooFewSamples,
)
from .fitting import FitReport, fit_hypocycloid, scalene_report, verify_claim
from .kernel import (
    Circle,
    Line,
    Point,
    ResidualReport,
    circumcircle,
    collinearity_residual,
    foot_of_perpendicular,
    line_intersection,
    line_through,
    perpendicular_through,
    point_on_circle,
)
from .sceneio import (
    PolygonAngles,
    RegularPolygon,
    Scene,
    parse_scene,
    render_svg,
    resolve_polygon,
    serialize_scene,
    write_report,
)
from .simson import (
    ConstructionTrace,
    InscribedPolygon,
    ProbePoint,
    SimsonResult,
    construction_trace,
    side_lines,
    simson_line_polygon,
    simson_line_triangle,
)

__version__ = "0.1.0"

__all__ = [
    "Circle",
    "CoincidentPoints",
    "CollinearInput",
    "ConstructionTrace",
    "CurveSample",
    "Cusp",
    "DegenerateCloud",
    "EnvelopeTrace",
    "FitReport",
    "GeometryError",
    "HypocycloidSpec",
    "InconsistentArtifacts",
    "InscribedPolygon",
    "Line",
    "LineFamily",
    "NearParallel",
    "Point",
    "PolygonAngles",
    "ProbePoint",
    "RangeError",
    "RegularPolygon",
    "ResidualReport",
    "Scene",
    "SchemaError",
    "SimsonResult",
    "TooFewSamples",
    "build_family",
    "circumcircle",
    "collinearity_residual",
    "construction_trace",
    "cusp_params",
    "detect_cusps",
    "envelope_points",
    "fit_hypocycloid",
    "foot_of_perpendicular",
    "hypocycloid_point",
    "line_intersection",
    "line_through",
    "parse_scene",
    "perpendicular_through",
    "point_on_circle",
    "render_svg",
    "resolve_polygon",
    "sample_hypocycloid",
    "scalene_report",
    "serialize_scene",
    "side_lines",
    "simson_line_polygon",
    "simson_line_triangle",
    "trace_from_points",
    "verify_claim",
    "write_report",
]
