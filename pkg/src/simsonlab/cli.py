"""Command-line front door: render, envelope, verify, animate, serve.

Exit codes: 0 success, 2 usage or scene input error, 1 internal failure,
3 verification ran but failed.
"""

from __future__ import annotations

import math
import os
import re
import sys
from dataclasses import replace
from pathlib import Path

import click

from .curves import HypocycloidSpec, sample_hypocycloid
from .envelope import EnvelopeTrace, LineFamily, build_family, detect_cusps, envelope_points
from .errors import SchemaError, TooFewSamples
from .fitting import fit_hypocycloid
from .kernel import TAU, Circle, Point
from .sceneio import (
    DISPLAY_LAYERS,
    RegularPolygon,
    Scene,
    canonical_json,
    render_svg,
    resolve_polygon,
    scene_from_dict,
    write_report,
)
from .server import DEFAULT_PORT, PORT_ENV_VAR, serve
from .simson import construction_trace

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_VERIFY_FAILED = 3

_REGULAR_RE = re.compile(r"^regular:(\d+)(?::([-+0-9.eE]+))?$")


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _load_scene(
    source: str,
    samples: int | None = None,
    theta: float | None = None,
    show: tuple[str, ...] = (),
    hide: tuple[str, ...] = (),
) -> tuple[Scene, bool]:
    """Scene from a file path or the regular:<n>[:phase] shorthand.

    Returns (scene, from_file); overrides applied on top.
    """
    match = _REGULAR_RE.match(source)
    if match:
        n = int(match.group(1))
        if not 3 <= n <= 12:
            _fail(EXIT_INPUT, f"regular:<n> needs n in 3..12, got {n}")
        phase = float(match.group(2)) if match.group(2) else 0.0
        if not math.isfinite(phase):
            _fail(EXIT_INPUT, f"regular:<n>:<phase> needs a finite phase, got {phase}")
        scene = Scene(Circle(Point(0.0, 0.0), 1.0), RegularPolygon(n, phase))
        from_file = False
    else:
        path = Path(source)
        if not path.is_file():
            _fail(EXIT_INPUT, f"scene file not found: {source}")
        try:
            import json

            scene = scene_from_dict(json.loads(path.read_text(encoding="utf-8")))
        except (SchemaError, ValueError) as exc:
            _fail(EXIT_INPUT, f"invalid scene: {exc}")
        from_file = True
    if samples is not None:
        if samples < 32:
            _fail(EXIT_INPUT, f"samples must be >= 32, got {samples}")
        scene = replace(scene, samples=samples)
    if theta is not None:
        scene = replace(scene, probe_theta=theta)
    if show or hide:
        display = dict(scene.display)
        for layer in show:
            display[layer] = True
        for layer in hide:
            display[layer] = False
        scene = replace(scene, display=display)
    return scene, from_file


def _internal_guard(fn):
    try:
        fn()
    except SystemExit:
        raise
    except Exception as exc:  # anything unplanned is an internal failure
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)


_scene_option = click.option(
    "--scene", "scene_src", required=True, help="Scene file path or regular:<n>[:phase]."
)
_output_option = click.option(
    "-o", "--output", "output", required=True, type=click.Path(path_type=Path)
)
_samples_option = click.option("--samples", type=int, default=None, help="Override sample count.")
_show_option = click.option(
    "--show", multiple=True, type=click.Choice(DISPLAY_LAYERS), help="Force a layer on."
)
_hide_option = click.option(
    "--hide", multiple=True, type=click.Choice(DISPLAY_LAYERS), help="Force a layer off."
)


@click.group()
def main() -> None:
    """Simson-Wallace line laboratory: constructions, envelopes, verification."""


@main.command("render")
@_scene_option
@_output_option
@click.option("--theta", type=float, default=None, help="Probe angle override (radians).")
@_samples_option
@_show_option
@_hide_option
def render_cmd(scene_src, output, theta, samples, show, hide) -> None:
    """Render the Simson-Wallace construction at the probe angle."""
    scene, _ = _load_scene(scene_src, samples, theta, show, hide)

    def run() -> None:
        poly = resolve_polygon(scene)
        trace = construction_trace(poly, scene.probe_theta)
        _atomic_write(output, render_svg(scene, trace=trace))

    _internal_guard(run)


@main.command("envelope")
@_scene_option
@_output_option
@_samples_option
@click.option(
    "--dump-trace",
    type=click.Path(path_type=Path),
    default=None,
    help="Also write the envelope trace as JSON.",
)
@_show_option
@_hide_option
def envelope_cmd(scene_src, output, samples, dump_trace, show, hide) -> None:
    """Render the Simson-Wallace line family and its envelope."""
    scene, _ = _load_scene(scene_src, samples, None, (), ())
    display = dict(scene.display)
    display["envelope"] = True
    for layer in show:
        display[layer] = True
    for layer in hide:
        display[layer] = False
    scene = replace(scene, display=display)

    def run() -> None:
        poly = resolve_polygon(scene)
        family = build_family(poly, scene.samples)
        trace = envelope_points(family)
        detect_cusps(trace)
        _atomic_write(output, render_svg(scene, family=family, envelope=trace))
        if dump_trace is not None:
            doc = {
                "schema_version": 1,
                "thetas": list(trace.thetas),
                "points": [[p.x, p.y] for p in trace.points],
                "speeds": list(trace.speeds),
                "cusp_indices": list(trace.cusp_indices),
                "dropped_thetas": list(trace.dropped_thetas),
            }
            _atomic_write(dump_trace, canonical_json(doc))

    _internal_guard(run)


def _corrupted(trace: EnvelopeTrace, radius: float) -> EnvelopeTrace:
    """Test hook: radially garble the trace so no hypocycloid can fit."""
    points = tuple(
        Point(p.x + 0.2 * radius * math.cos(7.0 * t), p.y + 0.2 * radius * math.sin(5.0 * t))
        for t, p in zip(trace.thetas, trace.points)
    )
    from .envelope import trace_from_points

    return trace_from_points(trace.thetas, points)


@main.command("verify")
@_scene_option
@_output_option
@_samples_option
@click.option("--cusps", type=int, default=None, help="Expected cusp count (default: n).")
@click.option("--corrupt-trace", is_flag=True, hidden=True)
def verify_cmd(scene_src, output, samples, cusps, corrupt_trace) -> None:
    """Verify that the envelope is an n-cusped hypocycloid; exit 3 on failure."""
    scene, from_file = _load_scene(scene_src, samples, None, (), ())
    if samples is None and not from_file:
        scene = replace(scene, samples=1440)
    poly = resolve_polygon(scene)
    expected = cusps if cusps is not None else poly.n
    if expected < 3:
        _fail(EXIT_INPUT, f"--cusps must be >= 3, got {expected}")

    outcome: list[bool] = []

    def run() -> None:
        family = build_family(poly, scene.samples)
        trace = envelope_points(family)
        if corrupt_trace:
            trace = _corrupted(trace, poly.circle.radius)
        report = fit_hypocycloid(trace, expected)
        stats = (
            f"samples={scene.samples} family={len(family)} kept={len(trace)}"
            f" dropped={len(trace.dropped_thetas)}"
        )
        report = replace(report, notes=f"{report.notes}; {stats}")
        _atomic_write(output, write_report(report))
        click.echo(
            f"verify: passed={str(report.passed).lower()} cusps={report.n_cusps_detected}"
            f" max_dev={report.max_dev:.6g} rms={report.rms:.6g}"
        )
        outcome.append(report.passed)

    _internal_guard(run)
    if not outcome[0]:
        sys.exit(EXIT_VERIFY_FAILED)


@main.command("animate")
@_scene_option
@_output_option
@click.option("--frames", type=int, required=True, help="Number of frames (>= 2).")
@_samples_option
@_show_option
@_hide_option
def animate_cmd(scene_src, output, frames, samples, show, hide) -> None:
    """Write an SVG frame sequence with an accumulating Simson-line locus."""
    if frames < 2:
        _fail(EXIT_INPUT, f"--frames must be >= 2, got {frames}")
    scene, _ = _load_scene(scene_src, samples, None, show, hide)

    def run() -> None:
        poly = resolve_polygon(scene)
        output.mkdir(parents=True, exist_ok=True)
        pad = max(4, len(str(frames)))
        thetas: list[float] = []
        lines = []
        for i in range(frames):
            theta = TAU * i / frames
            frame_scene = replace(scene, probe_theta=theta)
            trace = construction_trace(poly, theta)
            family = LineFamily(poly, tuple(thetas), tuple(lines))
            svg = render_svg(frame_scene, trace=trace, family=family)
            _atomic_write(output / f"frame_{i + 1:0{pad}d}.svg", svg)
            thetas.append(theta)
            lines.append(trace.result.line)

    _internal_guard(run)


@main.command("serve")
@click.option(
    "--port",
    type=int,
    default=None,
    help=f"Port to listen on (default: ${PORT_ENV_VAR} or {DEFAULT_PORT}).",
)
def serve_cmd(port) -> None:
    """Serve the kernel protocol over local HTTP until interrupted."""
    if port is None:
        raw = os.environ.get(PORT_ENV_VAR, "")
        try:
            port = int(raw) if raw else DEFAULT_PORT
        except ValueError:
            _fail(EXIT_INPUT, f"invalid {PORT_ENV_VAR}: {raw!r}")
    try:
        serve(port)
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot bind port {port}: {exc}")


def demo_curve(cusps: int = 3, radius: float = 3.0, n_samples: int = 720):
    """Convenience sample of a centered hypocycloid (used by figure scripts)."""
    spec = HypocycloidSpec(Point(0.0, 0.0), radius, cusps, 0.0)
    return sample_hypocycloid(spec, n_samples)


if __name__ == "__main__":
    main()
