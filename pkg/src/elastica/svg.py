"""Minimal SVG rendering of curves, domain walls, and contact markers.

Everything is mapped into a fixed 1000-unit viewBox with a 5% margin; the
domain wall is traced by sampling its distance field on a grid and running
the contour extractor, then drawn dashed behind the curve.
"""

from __future__ import annotations

import numpy as np

from .contour import zero_contours
from .curve import ClosedCurve
from .domain import DomainSpec
from .errors import InvalidParameters

VIEW = 1000.0
MARGIN = 0.05 * VIEW
GRID = 256


class _Frame:
    """Uniform world-to-viewBox transform (y flipped for SVG)."""

    def __init__(self, lo, hi):
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
        self.scale = (VIEW - 2.0 * MARGIN) / span
        self.cx = 0.5 * (lo[0] + hi[0])
        self.cy = 0.5 * (lo[1] + hi[1])

    def map(self, pts: np.ndarray) -> np.ndarray:
        out = np.empty_like(pts, dtype=float)
        out[:, 0] = VIEW / 2.0 + (pts[:, 0] - self.cx) * self.scale
        out[:, 1] = VIEW / 2.0 - (pts[:, 1] - self.cy) * self.scale
        return out


def _path_data(pts: np.ndarray, close: bool) -> str:
    coords = " L ".join(f"{x:.2f} {y:.2f}" for x, y in pts)
    return f"M {coords} Z" if close else f"M {coords}"


def _world_box(curve: ClosedCurve | None, domain: DomainSpec | None):
    lo = hi = None
    if curve is not None:
        lo = curve.points.min(axis=0).astype(float)
        hi = curve.points.max(axis=0).astype(float)
    if domain is not None and domain.bounds() is not None:
        dlo, dhi = domain.bounds()
        lo = dlo if lo is None else np.minimum(lo, dlo)
        hi = dhi if hi is None else np.maximum(hi, dhi)
    if lo is None:
        raise InvalidParameters("nothing to render: no curve and no bounded domain")
    pad = 0.05 * max(float((hi - lo).max()), 1e-9)
    return lo - pad, hi + pad


def _domain_paths(domain: DomainSpec, lo, hi):
    xs = np.linspace(lo[0], hi[0], GRID)
    ys = np.linspace(lo[1], hi[1], GRID)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    vals = np.empty(pts.shape[0])
    chunk = 8192
    for k in range(0, pts.shape[0], chunk):
        vals[k : k + chunk] = domain.values(pts[k : k + chunk])
    return zero_contours(xs, ys, vals.reshape(GRID, GRID))


def render_svg(
    curve: ClosedCurve | None,
    domain: DomainSpec | None = None,
    boundary_points: list | None = None,
    couple_indices: list | None = None,
) -> str:
    """Render to an SVG document string.

    Either curve or a bounded domain must be present. boundary_points are
    world coordinates to mark on the wall; couple_indices are (i, j) vertex
    index pairs to mark on the curve.
    """
    lo, hi = _world_box(curve, domain)
    frame = _Frame(lo, hi)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW:.0f} {VIEW:.0f}">',
        f'<rect width="{VIEW:.0f}" height="{VIEW:.0f}" fill="white"/>',
    ]
    if domain is not None:
        for path, closed in _domain_paths(domain, lo, hi):
            if len(path) < 2:
                continue
            d = _path_data(frame.map(np.asarray(path)), closed)
            parts.append(
                f'<path d="{d}" fill="none" stroke="#555555" '
                'stroke-width="1.5" stroke-dasharray="6 4"/>'
            )
    if curve is not None:
        d = _path_data(frame.map(curve.points), True)
        parts.append(f'<path d="{d}" fill="none" stroke="#1f77b4" stroke-width="2"/>')
    for px, py in boundary_points or []:
        x, y = frame.map(np.array([[px, py]]))[0]
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="#d62728"/>')
    if curve is not None:
        for i, j in couple_indices or []:
            for k in (i, j):
                x, y = frame.map(curve.points[int(k) % curve.n][None, :])[0]
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#9467bd"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_svg(path: str, curve: ClosedCurve | None, domain: DomainSpec | None = None,
             boundary_points: list | None = None, couple_indices: list | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(curve, domain, boundary_points, couple_indices))
