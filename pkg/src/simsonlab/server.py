"""Local HTTP endpoint exposing the kernel protocol for the UI.

Plain request/response JSON over POST, stateless per request:

    POST /v1/simson    {"scene": ..., "theta"?: number}
    POST /v1/envelope  {"scene": ..., "samples"?: int}
    POST /v1/verify    {"scene": ..., "samples"?: int, "expected_cusps"?: int}
    POST /v1/render    {"scene": ...}

Responses are canonical JSON; malformed bodies get HTTP 400 with a
field-path error object.
"""

from __future__ import annotations

import json
import sys
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any

from . import sceneio
from .envelope import build_family, detect_cusps, envelope_points
from .errors import SchemaError, TooFewSamples
from .fitting import verify_claim
from .kernel import Line, Point
from .sceneio import Scene, render_svg, report_to_dict, resolve_polygon, scene_from_dict
from .simson import construction_trace

DEFAULT_PORT = 8765
PORT_ENV_VAR = "SIMSONLAB_PORT"

ROUTES = ("/v1/simson", "/v1/envelope", "/v1/verify", "/v1/render")


class RequestError(Exception):
    def __init__(self, status: int, message: str, path: str = ""):
        super().__init__(message)
        self.status = status
        self.payload = {"error": {"message": message, "path": path or None}}


def _line_coeffs(line: Line) -> list[float]:
    return [line.a, line.b, line.c]


def _xy(p: Point) -> list[float]:
    return [p.x, p.y]


def _get_scene(body: dict) -> Scene:
    if "scene" not in body:
        raise RequestError(400, "missing field", "scene")
    try:
        return scene_from_dict(body["scene"], "scene")
    except SchemaError as exc:
        raise RequestError(400, str(exc), exc.path) from exc


def _get_number(body: dict, key: str, default: float) -> float:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RequestError(400, "expected a number", key)
    return float(value)


def _get_int(body: dict, key: str, default: int) -> int:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise RequestError(400, "expected an integer", key)
    return value


def _simson(body: dict) -> dict:
    scene = _get_scene(body)
    theta = _get_number(body, "theta", scene.probe_theta)
    poly = resolve_polygon(scene)
    trace = construction_trace(poly, theta)
    steps = []
    for step in trace.steps:
        entry: dict[str, Any] = {"layer": step.layer, "label": step.label}
        if isinstance(step.element, Line):
            entry["kind"] = "line"
            entry["line"] = _line_coeffs(step.element)
        else:
            entry["kind"] = "point"
            entry["point"] = _xy(step.element)
        steps.append(entry)
    result = trace.result
    return {
        "schema_version": sceneio.SCHEMA_VERSION,
        "theta": trace.theta,
        "degenerate": result.degenerate,
        "probe": _xy(trace.probe),
        "vertices": [_xy(v) for v in poly.vertices()],
        "line": _line_coeffs(result.line),
        "feet": [_xy(f) for f in result.feet],
        "residual": {"max_abs": result.residual.max_abs, "which": result.residual.which},
        "steps": steps,
    }


def _envelope(body: dict) -> dict:
    scene = _get_scene(body)
    samples = _get_int(body, "samples", scene.samples)
    poly = resolve_polygon(scene)
    try:
        family = build_family(poly, samples)
        trace = envelope_points(family)
        cusps = detect_cusps(trace)
    except TooFewSamples as exc:
        raise RequestError(400, str(exc), "samples") from exc
    return {
        "schema_version": sceneio.SCHEMA_VERSION,
        "family": {
            "thetas": list(family.thetas),
            "lines": [_line_coeffs(line) for line in family.lines],
        },
        "trace": {
            "thetas": list(trace.thetas),
            "points": [_xy(p) for p in trace.points],
            "speeds": list(trace.speeds),
            "cusp_indices": list(trace.cusp_indices),
            "dropped_thetas": list(trace.dropped_thetas),
        },
        "cusps": [{"theta": c.theta, "point": _xy(c.point)} for c in cusps],
    }


def _verify(body: dict) -> dict:
    scene = _get_scene(body)
    poly = resolve_polygon(scene)
    samples = _get_int(body, "samples", 1440)
    expected = _get_int(body, "expected_cusps", poly.n)
    if expected < 3:
        raise RequestError(400, "expected_cusps must be >= 3", "expected_cusps")
    try:
        report = verify_claim(poly, expected, samples)
    except TooFewSamples as exc:
        raise RequestError(400, str(exc), "samples") from exc
    return report_to_dict(report)


def _render(body: dict) -> dict:
    scene = _get_scene(body)
    poly = resolve_polygon(scene)
    trace = construction_trace(poly, scene.probe_theta)
    return {
        "schema_version": sceneio.SCHEMA_VERSION,
        "svg": render_svg(scene, trace=trace),
    }


_HANDLERS = {
    "/v1/simson": _simson,
    "/v1/envelope": _envelope,
    "/v1/verify": _verify,
    "/v1/render": _render,
}


def handle_request(path: str, body_text: bytes | str) -> tuple[int, dict]:
    """Dispatch one kernel-protocol request; returns (status, response object)."""
    handler = _HANDLERS.get(path)
    if handler is None:
        return 404, {"error": {"message": "unknown endpoint", "path": None}}
    try:
        body = json.loads(body_text)
    except json.JSONDecodeError as exc:
        return 400, {"error": {"message": f"invalid JSON: {exc}", "path": None}}
    if not isinstance(body, dict):
        return 400, {"error": {"message": "request body must be an object", "path": None}}
    try:
        return 200, handler(body)
    except RequestError as exc:
        return exc.status, exc.payload
    except (SchemaError, ValueError) as exc:
        path_attr = getattr(exc, "path", "") or None
        return 400, {"error": {"message": str(exc), "path": path_attr}}


class KernelHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "simsonlab-kernel"

    def _respond(self, status: int, payload: dict) -> None:
        data = sceneio.canonical_json(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_OPTIONS(self) -> None:  # noqa: N802 (http.server API)
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self) -> None:  # noqa: N802
        self._respond(405, {"error": {"message": "use POST", "path": None}})

    def do_POST(self) -> None:  # noqa: N802
        started = time.monotonic()
        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length) if length else b""
        status, payload = handle_request(self.path, body)
        self._respond(status, payload)
        elapsed_ms = (time.monotonic() - started) * 1000.0
        self.log_message('"POST %s" %d %.1fms', self.path, status, elapsed_ms)

    def log_message(self, fmt: str, *args: Any) -> None:  # one line per request
        sys.stderr.write(f"{self.address_string()} {fmt % args}\n")


def make_server(port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), KernelHandler)


def serve(port: int, host: str = "127.0.0.1") -> None:
    """Serve the kernel protocol until interrupted."""
    server = make_server(port, host)
    actual_port = server.server_address[1]
    print(f"simsonlab kernel listening on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
