"""Exception types shared across the package."""

from __future__ import annotations


class GeometryError(ValueError):
    """A geometric operation received a numerically degenerate configuration."""


class CoincidentPoints(GeometryError):
    """Two points that must be distinct are (nearly) coincident."""


class NearParallel(GeometryError):
    """Two lines are too close to parallel for a stable intersection."""


class DegenerateCloud(GeometryError):
    """All points of a cloud coincide; no line can be fitted."""


class CollinearInput(GeometryError):
    """Three points that must span a circle are (nearly) collinear."""


class TooFewSamples(ValueError):
    """A sampled family or trace is too sparse for the requested operation."""


class SchemaError(ValueError):
    """Scene or request document violates the schema.

    ``path`` names the offending field, e.g. ``"polygon.n"``.
    """

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class RangeError(SchemaError):
    """A schema field is well-typed but outside its allowed range."""


class InconsistentArtifacts(ValueError):
    """Render artifacts were computed for a different scene."""
