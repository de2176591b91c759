"""Discrete bending energy of closed curves and its exact first variation.

The energy of an N-gon with vertices p_i (cyclic) and perimeter L is

    W = N^3 * sum_i |p_{i+1} - 2 p_i + p_{i-1}|^2 / L^3.

This is the integral of squared curvature of the underlying smooth curve,
up to O(1/N^2) discretization error, and it scales exactly as W(c*gamma)
= W(gamma)/c under dilation. The gradient returned by `first_variation`
is the exact derivative of this discrete functional, not a discretization
of the smooth one, so finite differences of `bending_energy` match it to
roundoff.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .curve import (
    UNIFORM_SPREAD_TOL,
    ClosedCurve,
    VertexField,
    curvature_field,
    edge_lengths,
    edge_spread,
    turning_angles,
)
from .errors import LengthMismatch, NonUniform

# Product W * L is at least 4 pi^2 for any closed curve; flag anything
# clearly below as a symptom of a corrupted mesh.
_WL_FLOOR = 4.0 * np.pi**2 * 0.95


def _require_uniform(curve: ClosedCurve, what: str):
    spread = edge_spread(curve)
    if spread > UNIFORM_SPREAD_TOL:
        raise NonUniform(
            f"{what} needs near-uniform edges (spread {spread:.2e} > "
            f"{UNIFORM_SPREAD_TOL:.0e}); resample_uniform first"
        )


def _second_difference(pts: np.ndarray) -> np.ndarray:
    return np.roll(pts, -1, axis=0) - 2.0 * pts + np.roll(pts, 1, axis=0)


def _bending_energy_of(pts: np.ndarray) -> float:
    n = pts.shape[0]
    seg = np.roll(pts, -1, axis=0) - pts
    total = np.linalg.norm(seg, axis=1).sum()
    d = _second_difference(pts)
    return float(n**3 * np.einsum("ij,ij->", d, d) / total**3)


def bending_energy(curve: ClosedCurve) -> float:
    """Discrete bending energy W of a near-uniform closed curve."""
    _require_uniform(curve, "bending_energy")
    return _bending_energy_of(curve.points)


def first_variation(curve: ClosedCurve) -> VertexField:
    """Exact gradient of bending_energy with respect to vertex positions.

    Returns an (N, 2) field g with g[j] = dW/dp_j. Translation invariance
    makes the rows sum to zero exactly; dilation homogeneity makes
    sum_j g[j] . p_j = -W when the curve is centered at the origin.
    """
    _require_uniform(curve, "first_variation")
    pts = curve.points
    n = pts.shape[0]
    seg = np.roll(pts, -1, axis=0) - pts
    ell = np.linalg.norm(seg, axis=1)
    total = ell.sum()
    unit = seg / ell[:, None]
    d = _second_difference(pts)
    w = n**3 * np.einsum("ij,ij->", d, d) / total**3
    g = (2.0 * n**3 / total**3) * _second_difference(d)
    g -= (3.0 * w / total) * (np.roll(unit, 1, axis=0) - unit)
    return VertexField(g)


def directional_derivative(curve: ClosedCurve, direction) -> float:
    """Exact derivative of bending_energy along a vertex displacement field."""
    delta = np.asarray(direction, dtype=float)
    if delta.shape != curve.points.shape:
        raise LengthMismatch(
            f"direction shape {delta.shape} does not match curve {curve.points.shape}"
        )
    g = first_variation(curve).values
    return float(np.einsum("ij,ij->", g, delta))


def turning_angle_energy(curve: ClosedCurve) -> float:
    """Sum of (turning angle)^2 / dual edge length.

    A mesh-robust stand-in for the bending energy that tolerates non-uniform
    edges; used to compare energy carried by different portions of a curve.
    """
    theta = turning_angles(curve)
    ell = edge_lengths(curve)
    dual = 0.5 * (ell + np.roll(ell, 1))
    return float(np.sum(theta**2 / dual))


def open_arc_turning_energy(points: np.ndarray) -> float:
    """Turning-angle energy of an open polyline (no wrap-around angles)."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 3:
        return 0.0
    e = pts[1:] - pts[:-1]
    ell = np.linalg.norm(e, axis=1)
    e_in, e_out = e[:-1], e[1:]
    cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
    dot = (e_in * e_out).sum(axis=1)
    theta = np.arctan2(cross, dot)
    dual = 0.5 * (ell[:-1] + ell[1:])
    return float(np.sum(theta**2 / dual))


def el_residual(curve: ClosedCurve) -> VertexField:
    """Per-vertex residual 2 kappa'' + kappa^3 of the free-elastica equation.

    A closed free elastica satisfies 2 kappa'' + kappa^3 + lambda * kappa = 0
    for some multiplier; on arcs where the curve touches nothing and the
    multiplier vanishes this residual measures how far the shape is from
    stationarity. kappa'' is a cyclic second difference over the uniform
    arc step L/N.
    """
    _require_uniform(curve, "el_residual")
    kappa = curvature_field(curve).values
    h = edge_lengths(curve).sum() / curve.n
    kpp = (np.roll(kappa, -1) - 2.0 * kappa + np.roll(kappa, 1)) / h**2
    return VertexField(2.0 * kpp + kappa**3)


@dataclass(frozen=True)
class EnergyReport:
    """Summary of the energetic state of a curve."""

    bending: float
    perimeter: float
    grad_norm: float
    el_residual_max: float


def energy_report(curve: ClosedCurve) -> EnergyReport:
    """Bundle energy, perimeter, gradient norm and stationarity residual.

    Emits a RuntimeWarning when W * L falls below the universal closed-curve
    floor of 4 pi^2 (impossible for a genuine closed curve; indicates the
    mesh has degenerated).
    """
    w = bending_energy(curve)
    total = float(edge_lengths(curve).sum())
    if w * total < _WL_FLOOR:
        warnings.warn(
            f"W*L = {w * total:.6f} below the closed-curve floor {_WL_FLOOR:.6f}",
            RuntimeWarning,
            stacklevel=2,
        )
    g = first_variation(curve).values
    r = el_residual(curve).values
    return EnergyReport(
        bending=w,
        perimeter=total,
        grad_norm=float(np.linalg.norm(g)),
        el_residual_max=float(np.abs(r).max()),
    )
