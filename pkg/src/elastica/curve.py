"""Closed polygonal curves and per-vertex fields.

A curve is an (N, 2) array of vertices understood cyclically: vertex N-1
connects back to vertex 0. Most numerical routines in the package assume
near-uniform edge lengths, which `resample_uniform` establishes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEdge,
    InvalidParameters,
    LengthMismatch,
    NonPositiveFactor,
    NonPositiveRadius,
    NonUniform,
    PointOnCurve,
    TooFewPoints,
)

MIN_VERTICES = 8

# Relative edge-length spread tolerated by curvature estimates.
UNIFORM_SPREAD_TOL = 1e-3


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidParameters(f"expected an (N, 2) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidParameters("points contain NaN or infinity")
    return pts


def _bbox_diag(pts: np.ndarray) -> float:
    span = pts.max(axis=0) - pts.min(axis=0)
    return float(np.hypot(span[0], span[1]))


@dataclass(frozen=True)
class ClosedCurve:
    """Immutable closed polygon with at least MIN_VERTICES distinct vertices."""

    points: np.ndarray

    def __post_init__(self):
        pts = _as_points(self.points)
        if pts.shape[0] < MIN_VERTICES:
            raise TooFewPoints(
                f"closed curve needs at least {MIN_VERTICES} vertices, got {pts.shape[0]}"
            )
        diag = _bbox_diag(pts)
        gaps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        tiny = gaps <= 1e-12 * max(diag, 1e-300)
        if np.any(tiny):
            raise DegenerateEdge(int(np.argmax(tiny)))
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def bbox_diag(self) -> float:
        return _bbox_diag(self.points)


@dataclass(frozen=True)
class VertexField:
    """A scalar or vector quantity sampled at each vertex of a curve."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim not in (1, 2):
            raise LengthMismatch(f"vertex field must be 1-D or 2-D, got ndim={vals.ndim}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def matching(self, curve: ClosedCurve) -> np.ndarray:
        if self.values.shape[0] != curve.n:
            raise LengthMismatch(
                f"field has {self.values.shape[0]} entries for a {curve.n}-vertex curve"
            )
        return self.values


def from_points(points) -> ClosedCurve:
    """Build a ClosedCurve from any (N, 2) array-like."""
    return ClosedCurve(_as_points(points))


def circle(center, radius: float, n: int = 256) -> ClosedCurve:
    """Regular n-gon inscribed in the circle of given center and radius."""
    if radius <= 0:
        raise NonPositiveRadius(f"radius must be positive, got {radius}")
    if n < MIN_VERTICES:
        raise TooFewPoints(f"need at least {MIN_VERTICES} vertices, got {n}")
    c = np.asarray(center, dtype=float)
    t = 2.0 * np.pi * np.arange(n) / n
    return ClosedCurve(c + radius * np.stack([np.cos(t), np.sin(t)], axis=1))


def edge_lengths(curve: ClosedCurve) -> np.ndarray:
    """Length of edge i = |p_{i+1} - p_i|, cyclic."""
    pts = curve.points
    return np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)


def length(curve: ClosedCurve) -> float:
    """Total perimeter."""
    return float(edge_lengths(curve).sum())


def edge_spread(curve: ClosedCurve) -> float:
    """max/min edge-length ratio minus one; zero for a perfectly uniform mesh."""
    ell = edge_lengths(curve)
    return float(ell.max() / ell.min() - 1.0)


def resample_uniform(curve: ClosedCurve, n: int | None = None) -> ClosedCurve:
    """Resample to n vertices equally spaced in arc length along the polygon.

    Vertex 0 stays anchored. Repeated passes tighten the partition until
    cumulative lengths match the uniform grid to 1e-12 of the perimeter
    (chord lengths change slightly after each pass, so one pass is not
    exact in general).
    """
    if n is None:
        n = curve.n
    if n < MIN_VERTICES:
        raise TooFewPoints(f"need at least {MIN_VERTICES} vertices, got {n}")
    pts = curve.points
    for _ in range(64):
        seg = np.roll(pts, -1, axis=0) - pts
        seg_len = np.linalg.norm(seg, axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg_len)])
        total = cum[-1]
        targets = np.arange(n) * (total / n)
        idx = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, len(seg_len) - 1)
        frac = (targets - cum[idx]) / seg_len[idx]
        pts = pts[idx] + frac[:, None] * seg[idx]
        new_len = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        new_cum = np.cumsum(new_len)
        new_total = new_cum[-1]
        err = np.abs(new_cum - np.arange(1, n + 1) * (new_total / n)).max()
        if err <= 1e-12 * new_total:
            break
    return ClosedCurve(pts)


def tangent_field(curve: ClosedCurve) -> VertexField:
    """Unit tangents by central differences, (p_{i+1} - p_{i-1}) normalized."""
    pts = curve.points
    chord = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    norms = np.linalg.norm(chord, axis=1)
    tiny = norms <= 1e-12 * max(curve.bbox_diag(), 1e-300)
    if np.any(tiny):
        raise DegenerateEdge(int(np.argmax(tiny)), "central difference collapsed")
    return VertexField(chord / norms[:, None])


def turning_angles(curve: ClosedCurve) -> np.ndarray:
    """Signed exterior angle at each vertex (between incoming and outgoing edge)."""
    pts = curve.points
    e_out = np.roll(pts, -1, axis=0) - pts
    e_in = pts - np.roll(pts, 1, axis=0)
    cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
    dot = (e_in * e_out).sum(axis=1)
    return np.arctan2(cross, dot)


def curvature_field(curve: ClosedCurve) -> VertexField:
    """Signed curvature at each vertex: turning angle over mean adjacent edge length.

    Requires a near-uniform mesh; raises NonUniform when edge lengths spread
    beyond UNIFORM_SPREAD_TOL.
    """
    if edge_spread(curve) > UNIFORM_SPREAD_TOL:
        raise NonUniform(
            f"edge spread {edge_spread(curve):.2e} exceeds {UNIFORM_SPREAD_TOL:.0e}; "
            "resample_uniform first"
        )
    ell = edge_lengths(curve)
    dual = 0.5 * (ell + np.roll(ell, 1))
    return VertexField(turning_angles(curve) / dual)


def signed_area(curve: ClosedCurve) -> float:
    """Shoelace area; positive for counter-clockwise orientation."""
    pts = curve.points
    nxt = np.roll(pts, -1, axis=0)
    return float(0.5 * np.sum(pts[:, 0] * nxt[:, 1] - nxt[:, 0] * pts[:, 1]))


def winding_number(curve: ClosedCurve, point) -> int:
    """Winding of the curve around a point, by summing subtended angles.

    Raises PointOnCurve when the point sits on (or within 1e-12 of a
    bounding-box diagonal of) the polygon itself.
    """
    p = np.asarray(point, dtype=float)
    pts = curve.points
    a = pts - p
    b = np.roll(a, -1, axis=0)
    seg = b - a
    seg_len2 = (seg * seg).sum(axis=1)
    t = np.clip(-(a * seg).sum(axis=1) / seg_len2, 0.0, 1.0)
    closest = a + t[:, None] * seg
    dist = np.linalg.norm(closest, axis=1)
    if dist.min() <= 1e-12 * max(curve.bbox_diag(), 1e-300):
        raise PointOnCurve(f"point {p.tolist()} lies on the curve")
    ang = np.arctan2(
        a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0],
        (a * b).sum(axis=1),
    )
    return int(round(ang.sum() / (2.0 * np.pi)))


def scale_about(curve: ClosedCurve, factor: float, center=(0.0, 0.0)) -> ClosedCurve:
    """Dilate the curve about a center point by a positive factor."""
    if factor <= 0:
        raise NonPositiveFactor(f"scale factor must be positive, got {factor}")
    c = np.asarray(center, dtype=float)
    return ClosedCurve(c + factor * (curve.points - c))


def curve_to_json(curve: ClosedCurve) -> str:
    """Serialize to a JSON object {"points": [[x, y], ...]} with full precision."""
    pts = [[repr(float(x)), repr(float(y))] for x, y in curve.points]
    # repr round-trips float64; emit as raw numbers, not strings
    body = ",".join(f"[{x},{y}]" for x, y in pts)
    return f'{{"points":[{body}]}}'


def curve_from_json(text: str) -> ClosedCurve:
    """Inverse of curve_to_json."""
    data = json.loads(text)
    if not isinstance(data, dict) or "points" not in data:
        raise TooFewPoints("JSON curve must be an object with a 'points' key")
    return from_points(data["points"])
