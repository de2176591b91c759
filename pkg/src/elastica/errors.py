"""Exception types raised across the package.

Every error raised by this package derives from ElasticaError, so callers
can catch one base class at an API boundary.
"""

from __future__ import annotations


class ElasticaError(Exception):
    """Base class for all errors raised by this package."""


class TooFewPoints(ElasticaError):
    """A closed polygon needs a minimum number of vertices."""


class DegenerateEdge(ElasticaError):
    """Two consecutive vertices coincide (edge length ~ 0)."""

    def __init__(self, index: int, message: str | None = None):
        self.index = int(index)
        super().__init__(message or f"degenerate edge at vertex {index}")


class NonUniform(ElasticaError):
    """Operation requires (near-)uniform edge lengths but got a skewed mesh."""


class LengthMismatch(ElasticaError):
    """Two per-vertex arrays disagree in length."""


class PointOnCurve(ElasticaError):
    """Winding number is undefined for a point lying on the curve."""


class NonPositiveFactor(ElasticaError):
    """Scaling factor must be strictly positive."""


class NonPositiveRadius(ElasticaError):
    """Radius must be strictly positive."""


class MalformedDomain(ElasticaError):
    """Domain construction or deserialization got invalid data."""


class ProjectionFailed(ElasticaError):
    """Newton projection onto the zero level set did not converge."""

    def __init__(self, residual: float, message: str | None = None):
        self.residual = float(residual)
        super().__init__(message or f"projection stalled at residual {residual:.3e}")


class InvalidParameters(ElasticaError):
    """Parameter combination is out of the supported range."""


class Infeasible(ElasticaError):
    """Initial curve cannot be driven into the domain."""


class MultiplicityViolation(ElasticaError):
    """Contact structure has a point shared by more than two strands."""


class NotSimple(ElasticaError):
    """Operation requires an embedded (non-self-intersecting) curve."""
