"""Planar domains as signed distance fields with exact gradients.

Convention: sdf < 0 inside the domain, > 0 outside, 0 on the wall. All
primitives return true Euclidean signed distance; boolean combinations
(min/max) give a conservative signed distance that is exact wherever the
nearest primitive is unambiguous, which is all the solver needs.

The two-drops generator builds a thin corridor domain: an epsilon-tube
around a spine made of a circular connector arc, two pairs of straight
tangent legs, and two circular drop walls. Closed curves confined to it
are forced into self-contact along the doubled connector corridor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .curve import ClosedCurve, MIN_VERTICES, resample_uniform, from_points
from .errors import InvalidParameters, MalformedDomain, ProjectionFailed

_TWO_PI = 2.0 * math.pi


def _pts2d(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    squeeze = pts.ndim == 1
    if squeeze:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != 2 or not np.all(np.isfinite(pts)):
        raise MalformedDomain(f"expected finite (N, 2) points, got shape {pts.shape}")
    return pts


def _unit_rows(v: np.ndarray, fallback=(1.0, 0.0)) -> np.ndarray:
    n = np.linalg.norm(v, axis=1)
    out = np.empty_like(v)
    ok = n > 0
    out[ok] = v[ok] / n[ok, None]
    out[~ok] = np.asarray(fallback, dtype=float)
    return out


class DomainSpec:
    """Base class for signed-distance domains."""

    def values(self, points) -> np.ndarray:
        return self.evaluate(points)[0]

    def evaluate(self, points) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def bounds(self) -> tuple[float, float, float, float] | None:
        """Axis-aligned bounding box of the inside region, None if unbounded."""
        return None

    def to_jsonable(self) -> dict:
        raise NotImplementedError

    def sdf(self, point) -> float:
        return float(self.values(np.asarray(point, dtype=float)[None, :])[0])

    def gradient(self, point) -> np.ndarray:
        return self.evaluate(np.asarray(point, dtype=float)[None, :])[1][0]

    def contains(self, point, tol: float = 0.0) -> bool:
        return self.sdf(point) <= tol


@dataclass(frozen=True)
class Disk(DomainSpec):
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if c.shape != (2,) or not np.all(np.isfinite(c)):
            raise MalformedDomain("disk center must be a finite 2-vector")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise MalformedDomain(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", (float(c[0]), float(c[1])))
        object.__setattr__(self, "radius", float(self.radius))

    def evaluate(self, points):
        pts = _pts2d(points)
        rel = pts - np.asarray(self.center)
        dist = np.linalg.norm(rel, axis=1)
        return dist - self.radius, _unit_rows(rel)

    def bounds(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, cy - r, cx + r, cy + r)

    def to_jsonable(self):
        return {"shape": "disk", "center": list(self.center), "r": self.radius}


@dataclass(frozen=True)
class HalfPlane(DomainSpec):
    """Inside is the side where normal . p <= offset; normal is stored unit."""

    normal: tuple[float, float]
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        if n.shape != (2,) or not np.all(np.isfinite(n)) or not math.isfinite(self.offset):
            raise MalformedDomain("half-plane needs a finite normal and offset")
        norm = float(np.linalg.norm(n))
        if norm <= 1e-12:
            raise MalformedDomain("half-plane normal must be nonzero")
        # skip rescaling of already-unit normals so construction is
        # idempotent and JSON round-trips bit-exactly
        if abs(norm - 1.0) > 1e-9:
            n = n / norm
            object.__setattr__(self, "offset", float(self.offset) / norm)
        else:
            object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "normal", (float(n[0]), float(n[1])))

    def evaluate(self, points):
        pts = _pts2d(points)
        n = np.asarray(self.normal)
        vals = pts @ n - self.offset
        return vals, np.broadcast_to(n, pts.shape).copy()

    def to_jsonable(self):
        return {"shape": "half_plane", "normal": list(self.normal), "offset": self.offset}


def _segment_closest(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    seg = b - a
    denom = float(seg @ seg)
    t = np.clip((pts - a) @ seg / denom, 0.0, 1.0)
    return a + t[:, None] * seg


@dataclass(frozen=True)
class ConvexPolygon(DomainSpec):
    """Strictly convex polygon with counter-clockwise vertices."""

    vertices: tuple

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3 or not np.all(np.isfinite(v)):
            raise MalformedDomain("polygon needs at least 3 finite vertices")
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if not np.all(cross > 0):
            raise MalformedDomain("polygon must be strictly convex with CCW vertices")
        object.__setattr__(self, "vertices", tuple((float(x), float(y)) for x, y in v))

    def evaluate(self, points):
        pts = _pts2d(points)
        v = np.asarray(self.vertices)
        nxt = np.roll(v, -1, axis=0)
        e = nxt - v
        # inside iff left of every edge
        rel = pts[:, None, :] - v[None, :, :]
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        inside = np.all(cross >= 0, axis=1)
        # exact distance to the boundary polyline
        len2 = (e * e).sum(axis=1)
        t = np.clip((rel * e[None, :, :]).sum(axis=2) / len2[None, :], 0.0, 1.0)
        closest = v[None, :, :] + t[:, :, None] * e[None, :, :]
        diff = pts[:, None, :] - closest
        d2 = (diff * diff).sum(axis=2)
        k = np.argmin(d2, axis=1)
        rows = np.arange(pts.shape[0])
        dist = np.sqrt(d2[rows, k])
        sign = np.where(inside, -1.0, 1.0)
        grads = np.empty_like(pts)
        ok = dist > 1e-300
        grads[ok] = sign[ok, None] * diff[rows, k][ok] / dist[ok, None]
        if np.any(~ok):
            # on the boundary: outward edge normal
            en = np.stack([e[:, 1], -e[:, 0]], axis=1)
            en /= np.linalg.norm(en, axis=1)[:, None]
            grads[~ok] = en[k[~ok]]
        return sign * dist, grads

    def bounds(self):
        v = np.asarray(self.vertices)
        return (
            float(v[:, 0].min()),
            float(v[:, 1].min()),
            float(v[:, 0].max()),
            float(v[:, 1].max()),
        )

    def to_jsonable(self):
        return {"shape": "polygon", "vertices": [list(p) for p in self.vertices]}


@dataclass(frozen=True)
class Capsule(DomainSpec):
    """All points within `radius` of the segment a-b."""

    a: tuple[float, float]
    b: tuple[float, float]
    radius: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != (2,) or b.shape != (2,) or not np.all(np.isfinite([a, b])):
            raise MalformedDomain("capsule endpoints must be finite 2-vectors")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise MalformedDomain(f"capsule radius must be positive, got {self.radius}")
        if np.linalg.norm(b - a) <= 1e-12 * (1.0 + np.linalg.norm(a)):
            raise MalformedDomain("capsule endpoints coincide; use a disk")
        object.__setattr__(self, "a", (float(a[0]), float(a[1])))
        object.__setattr__(self, "b", (float(b[0]), float(b[1])))
        object.__setattr__(self, "radius", float(self.radius))

    def evaluate(self, points):
        pts = _pts2d(points)
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        closest = _segment_closest(pts, a, b)
        rel = pts - closest
        dist = np.linalg.norm(rel, axis=1)
        axis = b - a
        perp = np.array([-axis[1], axis[0]]) / np.linalg.norm(axis)
        return dist - self.radius, _unit_rows(rel, fallback=perp)

    def bounds(self):
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        lo = np.minimum(a, b) - self.radius
        hi = np.maximum(a, b) + self.radius
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    def to_jsonable(self):
        return {"shape": "capsule", "a": list(self.a), "b": list(self.b), "r": self.radius}


@dataclass(frozen=True)
class ArcTube(DomainSpec):
    """All points within `half_width` of a circular arc.

    The arc has the given center and radius and spans polar angles
    [angle_start, angle_end] (radians, angle_end > angle_start,
    span at most a full turn).
    """

    center: tuple[float, float]
    radius: float
    angle_start: float
    angle_end: float
    half_width: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        vals = [self.radius, self.angle_start, self.angle_end, self.half_width]
        if c.shape != (2,) or not np.all(np.isfinite(c)) or not all(map(math.isfinite, vals)):
            raise MalformedDomain("arc tube parameters must be finite")
        if self.radius <= 0 or self.half_width <= 0:
            raise MalformedDomain("arc tube radius and half_width must be positive")
        span = self.angle_end - self.angle_start
        if not (0.0 < span <= _TWO_PI + 1e-12):
            raise MalformedDomain(
                f"arc span must lie in (0, 2*pi], got {span}"
            )
        object.__setattr__(self, "center", (float(c[0]), float(c[1])))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "angle_start", float(self.angle_start))
        object.__setattr__(self, "angle_end", float(self.angle_end))
        object.__setattr__(self, "half_width", float(self.half_width))

    def _endpoints(self) -> np.ndarray:
        c = np.asarray(self.center)
        out = []
        for ang in (self.angle_start, self.angle_end):
            out.append(c + self.radius * np.array([math.cos(ang), math.sin(ang)]))
        return np.asarray(out)

    def spine_distance(self, points) -> np.ndarray:
        """Euclidean distance to the arc itself (no thickness)."""
        pts = _pts2d(points)
        c = np.asarray(self.center)
        rel = pts - c
        rho = np.linalg.norm(rel, axis=1)
        phi = np.arctan2(rel[:, 1], rel[:, 0])
        span = self.angle_end - self.angle_start
        covered = (phi - self.angle_start) % _TWO_PI <= span
        radial = np.abs(rho - self.radius)
        ends = self._endpoints()
        d_ends = np.minimum(
            np.linalg.norm(pts - ends[0], axis=1), np.linalg.norm(pts - ends[1], axis=1)
        )
        return np.where(covered, radial, d_ends)

    def evaluate(self, points):
        pts = _pts2d(points)
        c = np.asarray(self.center)
        rel = pts - c
        rho = np.linalg.norm(rel, axis=1)
        phi = np.arctan2(rel[:, 1], rel[:, 0])
        span = self.angle_end - self.angle_start
        covered = (phi - self.angle_start) % _TWO_PI <= span
        ends = self._endpoints()
        d0 = np.linalg.norm(pts - ends[0], axis=1)
        d1 = np.linalg.norm(pts - ends[1], axis=1)
        nearer = np.where(d0 <= d1, 0, 1)
        d_end = np.minimum(d0, d1)

        vals = np.empty(pts.shape[0])
        grads = np.empty_like(pts)

        mid = 0.5 * (self.angle_start + self.angle_end)
        e_mid = np.array([math.cos(mid), math.sin(mid)])
        radial_unit = _unit_rows(rel, fallback=tuple(-e_mid))
        radial = rho - self.radius
        vals[covered] = np.abs(radial[covered]) - self.half_width
        grads[covered] = np.sign(radial[covered])[:, None] * radial_unit[covered]
        on_spine = covered & (np.abs(radial) < 1e-300)
        grads[on_spine] = radial_unit[on_spine]

        un = ~covered
        if np.any(un):
            q = ends[nearer[un]]
            rel_e = pts[un] - q
            fall = np.array([math.cos(self.angle_start), math.sin(self.angle_start)])
            grads[un] = _unit_rows(rel_e, fallback=tuple(fall))
            vals[un] = d_end[un] - self.half_width
        return vals, grads

    def bounds(self):
        cx, cy = self.center
        r = self.radius + self.half_width
        return (cx - r, cy - r, cx + r, cy + r)

    def to_jsonable(self):
        return {
            "shape": "arc_tube",
            "center": list(self.center),
            "r": self.radius,
            "angle_start": self.angle_start,
            "angle_end": self.angle_end,
            "half_width": self.half_width,
        }


def _check_children(children, need: int):
    if len(children) < need:
        raise MalformedDomain(f"boolean node needs at least {need} children")
    for ch in children:
        if not isinstance(ch, DomainSpec):
            raise MalformedDomain(f"child {ch!r} is not a domain")


@dataclass(frozen=True)
class Union(DomainSpec):
    children: tuple = field(default_factory=tuple)

    def __init__(self, *children):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        _check_children(children, 2)
        object.__setattr__(self, "children", tuple(children))

    def evaluate(self, points):
        pts = _pts2d(points)
        vals = np.stack([ch.values(pts) for ch in self.children])
        pick = np.argmin(vals, axis=0)
        grads = np.empty_like(pts)
        for k, ch in enumerate(self.children):
            mask = pick == k
            if np.any(mask):
                grads[mask] = ch.evaluate(pts[mask])[1]
        return vals[pick, np.arange(pts.shape[0])], grads

    def values(self, points):
        pts = _pts2d(points)
        return np.min(np.stack([ch.values(pts) for ch in self.children]), axis=0)

    def bounds(self):
        boxes = [ch.bounds() for ch in self.children]
        if any(b is None for b in boxes):
            return None
        arr = np.asarray(boxes)
        return (
            float(arr[:, 0].min()),
            float(arr[:, 1].min()),
            float(arr[:, 2].max()),
            float(arr[:, 3].max()),
        )

    def to_jsonable(self):
        return {"op": "union", "children": [ch.to_jsonable() for ch in self.children]}


@dataclass(frozen=True)
class Intersection(DomainSpec):
    children: tuple = field(default_factory=tuple)

    def __init__(self, *children):
        if len(children) == 1 and isinstance(children[0], (list, tuple)):
            children = tuple(children[0])
        _check_children(children, 2)
        object.__setattr__(self, "children", tuple(children))
        # all-half-plane intersections (polygonal hulls) collapse to one matmul
        if all(isinstance(ch, HalfPlane) for ch in children):
            object.__setattr__(
                self, "_hp_normals", np.array([ch.normal for ch in children])
            )
            object.__setattr__(
                self, "_hp_offsets", np.array([ch.offset for ch in children])
            )
        else:
            object.__setattr__(self, "_hp_normals", None)
            object.__setattr__(self, "_hp_offsets", None)

    def evaluate(self, points):
        pts = _pts2d(points)
        if self._hp_normals is not None:
            vals = pts @ self._hp_normals.T - self._hp_offsets
            pick = np.argmax(vals, axis=1)
            rows = np.arange(pts.shape[0])
            return vals[rows, pick], self._hp_normals[pick].copy()
        vals = np.stack([ch.values(pts) for ch in self.children])
        pick = np.argmax(vals, axis=0)
        grads = np.empty_like(pts)
        for k, ch in enumerate(self.children):
            mask = pick == k
            if np.any(mask):
                grads[mask] = ch.evaluate(pts[mask])[1]
        return vals[pick, np.arange(pts.shape[0])], grads

    def values(self, points):
        pts = _pts2d(points)
        if self._hp_normals is not None:
            return np.max(pts @ self._hp_normals.T - self._hp_offsets, axis=1)
        return np.max(np.stack([ch.values(pts) for ch in self.children]), axis=0)

    def bounds(self):
        boxes = [b for b in (ch.bounds() for ch in self.children) if b is not None]
        if not boxes:
            return None
        arr = np.asarray(boxes)
        lo_x, lo_y = arr[:, 0].max(), arr[:, 1].max()
        hi_x, hi_y = arr[:, 2].min(), arr[:, 3].min()
        if lo_x >= hi_x or lo_y >= hi_y:
            return (lo_x, lo_y, lo_x, lo_y)
        return (float(lo_x), float(lo_y), float(hi_x), float(hi_y))

    def to_jsonable(self):
        return {
            "op": "intersection",
            "children": [ch.to_jsonable() for ch in self.children],
        }


@dataclass(frozen=True)
class Complement(DomainSpec):
    child: DomainSpec

    def __post_init__(self):
        if not isinstance(self.child, DomainSpec):
            raise MalformedDomain("complement needs a domain child")

    def evaluate(self, points):
        vals, grads = self.child.evaluate(points)
        return -vals, -grads

    def values(self, points):
        return -self.child.values(points)

    def to_jsonable(self):
        return {"op": "complement", "children": [self.child.to_jsonable()]}


def characteristic_scale(domain: DomainSpec) -> float:
    """Bounding-box diagonal, or 1.0 for unbounded domains."""
    box = domain.bounds()
    if box is None:
        return 1.0
    return float(math.hypot(box[2] - box[0], box[3] - box[1])) or 1.0


def project_points(
    domain: DomainSpec, points, tol_rel: float = 1e-9, max_iter: int = 50
) -> np.ndarray:
    """Move outside points onto the wall (sdf = 0) by damped Newton steps.

    Points already inside the domain are returned unchanged. Raises
    ProjectionFailed if any projected point's residual stays above
    tol_rel * characteristic_scale(domain).
    """
    out = _pts2d(points).copy()
    tol = tol_rel * characteristic_scale(domain)
    outside = domain.values(out) > tol
    if not np.any(outside):
        return out
    pts = out[outside]
    vals, grads = domain.evaluate(pts)
    for _ in range(max_iter):
        active = np.abs(vals) > tol
        if not np.any(active):
            break
        step = vals[active, None] * grads[active]
        trial = pts.copy()
        trial[active] -= step
        t_vals = domain.values(trial[active])
        worse = np.abs(t_vals) > np.abs(vals[active])
        # halve steps that overshoot (kinks in min/max fields)
        for _ in range(20):
            if not np.any(worse):
                break
            idx = np.flatnonzero(active)[worse]
            step[worse] *= 0.5
            trial[idx] = pts[idx] - step[worse]
            t_vals[worse] = domain.values(trial[idx])
            worse = np.abs(t_vals) > np.abs(vals[active])
        pts = trial
        vals, grads = domain.evaluate(pts)
    residual = float(np.abs(vals).max())
    if residual > tol:
        raise ProjectionFailed(residual)
    out[outside] = pts
    return out


# ---------------------------------------------------------------------------
# serialization


def domain_to_json(domain: DomainSpec) -> str:
    return json.dumps(domain.to_jsonable())


def _domain_from_dict(data) -> DomainSpec:
    if not isinstance(data, dict):
        raise MalformedDomain(f"domain node must be an object, got {type(data).__name__}")
    if "op" in data:
        op = data["op"]
        kids = [_domain_from_dict(ch) for ch in data.get("children", [])]
        if op == "union":
            return Union(*kids)
        if op == "intersection":
            return Intersection(*kids)
        if op == "complement":
            if len(kids) != 1:
                raise MalformedDomain("complement takes exactly one child")
            return Complement(kids[0])
        raise MalformedDomain(f"unknown boolean op {op!r}")
    shape = data.get("shape")
    try:
        if shape == "disk":
            return Disk(tuple(data["center"]), data["r"])
        if shape == "half_plane":
            return HalfPlane(tuple(data["normal"]), data["offset"])
        if shape == "polygon":
            return ConvexPolygon(tuple(map(tuple, data["vertices"])))
        if shape == "capsule":
            return Capsule(tuple(data["a"]), tuple(data["b"]), data["r"])
        if shape == "arc_tube":
            return ArcTube(
                tuple(data["center"]),
                data["r"],
                data["angle_start"],
                data["angle_end"],
                data["half_width"],
            )
    except KeyError as exc:
        raise MalformedDomain(f"missing field {exc} for shape {shape!r}") from exc
    raise MalformedDomain(f"unknown shape {shape!r}")


def domain_from_json(text: str) -> DomainSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDomain(f"invalid JSON: {exc}") from exc
    return _domain_from_dict(data)


# ---------------------------------------------------------------------------
# generators


def disk(cx: float, cy: float, r: float) -> Disk:
    return Disk((cx, cy), r)


def stadium(length: float, radius: float) -> Capsule:
    """Capsule of the given straight length and cap radius, centered at 0."""
    if not (length > 0 and radius > 0):
        raise MalformedDomain("stadium needs positive length and radius")
    h = 0.5 * length
    return Capsule((-h, 0.0), (h, 0.0), radius)


def ellipse_domain(a: float, b: float, sides: int = 256) -> Intersection:
    """Ellipse x^2/a^2 + y^2/b^2 <= 1 as an intersection of tangent half-planes."""
    if not (a > 0 and b > 0):
        raise MalformedDomain("ellipse needs positive semi-axes")
    if sides < 8:
        raise MalformedDomain("ellipse needs at least 8 tangent planes")
    planes = []
    for k in range(sides):
        t = _TWO_PI * k / sides
        n = np.array([math.cos(t) / a, math.sin(t) / b])
        nn = float(np.linalg.norm(n))
        planes.append(HalfPlane((n[0] / nn, n[1] / nn), 1.0 / nn))
    return Intersection(*planes)


def _rot(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


@dataclass(frozen=True)
class TwoDropsLayout:
    """Geometry bundle for the two-drops corridor domain.

    The spine is a connector arc of `ring_radius` spanning `ring_span`
    radians centered on the top, plus, at each end apex, two tangent legs
    leading to a hanging drop circle of radius `drop_scale`. One leg is the
    straight continuation of the connector tangent at the apex; the other
    is the second tangent to the drop circle from the apex. The domain is
    the union of eps-tubes around all spine pieces; the drop interiors are
    holes of the domain.
    """

    eps: float
    ring_radius: float
    ring_span: float
    drop_scale: float
    tangent_length: float
    beta: float
    apexes: np.ndarray
    drop_centers: np.ndarray
    tangency: np.ndarray
    arc_interval: tuple[float, float]
    domain: Union

    def hole_centers(self) -> np.ndarray:
        return self.drop_centers.copy()

    def traversal_loop(self, n: int = 1024) -> ClosedCurve:
        """Closed curve threading every corridor of the domain once.

        Runs around the right drop, along the connector (outer lane), around
        the left drop, and back along the connector (inner lane). All piece
        junctions are tangent except one right-angle turn at each apex,
        which is unavoidable for a single closed traversal.
        """
        if n < 8 * MIN_VERTICES:
            raise InvalidParameters(f"traversal loop needs n >= {8 * MIN_VERTICES}")
        alpha0 = 0.5 * math.pi - 0.5 * self.ring_span
        span = self.ring_span
        r_ring = self.ring_radius
        r = self.drop_scale
        a_r, a_l = self.apexes
        c_r, c_l = self.drop_centers
        t1_r, t2_r = self.tangency[0]
        t1_l, t2_l = self.tangency[1]
        lo, hi = self.arc_interval
        lo_l, hi_l = math.pi - hi, math.pi - lo
        arc_len = r * (hi - lo)
        pass_len = r_ring * span

        def seg(p, q):
            def f(u):
                return p[None, :] + u[:, None] * (q - p)[None, :]

            return f, float(np.linalg.norm(q - p))

        def drop_arc(center, a_hi, a_lo):
            def f(u):
                ang = a_hi + u * (a_lo - a_hi)
                return center[None, :] + r * np.stack([np.cos(ang), np.sin(ang)], axis=1)

            return f, arc_len

        def ring_pass(reverse: bool):
            def f(u):
                if reverse:
                    ang = (alpha0 + span) - u * span
                    rho = r_ring - 0.5 * self.eps * np.sin(math.pi * u)
                else:
                    ang = alpha0 + u * span
                    rho = r_ring + 0.5 * self.eps * np.sin(math.pi * u)
                return rho[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=1)

            return f, pass_len

        pieces = [
            seg(a_r, t2_r),
            drop_arc(c_r, hi, lo),
            seg(t1_r, a_r),
            ring_pass(False),
            seg(a_l, t1_l),
            drop_arc(c_l, hi_l, lo_l),
            seg(t2_l, a_l),
            ring_pass(True),
        ]
        lengths = np.array([ln for _, ln in pieces])
        raw = n * lengths / lengths.sum()
        counts = np.maximum(4, np.floor(raw).astype(int))
        # hand out the remainder by largest fractional part, deterministically
        order = np.argsort(-(raw - np.floor(raw)), kind="stable")
        k = 0
        while counts.sum() < n:
            counts[order[k % len(pieces)]] += 1
            k += 1
        while counts.sum() > n:
            j = int(np.argmax(counts))
            counts[j] -= 1
        chunks = []
        for (f, _), m in zip(pieces, counts):
            u = np.arange(m) / m
            chunks.append(f(u))
        loop = from_points(np.vstack(chunks))
        return resample_uniform(loop, n)


def two_drops_layout(
    eps: float = 0.05,
    ring_radius: float = 2.0,
    ring_span: float = 1.5 * math.pi,
    drop_scale: float = 1.0,
) -> TwoDropsLayout:
    """Construct the two-drops corridor domain and its layout data.

    Raises InvalidParameters when the tube width or the drop size make the
    corridors overlap or degenerate.
    """
    if not all(map(math.isfinite, (eps, ring_radius, ring_span, drop_scale))):
        raise InvalidParameters("two-drops parameters must be finite")
    if eps <= 0 or ring_radius <= 0 or drop_scale <= 0:
        raise InvalidParameters("two-drops parameters must be positive")
    if eps >= 0.2 * drop_scale:
        raise InvalidParameters(
            f"tube half-width {eps} too large for drop radius {drop_scale}"
        )
    if not (0.5 * math.pi < ring_span < _TWO_PI):
        raise InvalidParameters("ring span must lie in (pi/2, 2*pi)")
    if eps >= 0.2 * ring_radius:
        raise InvalidParameters("tube half-width too large for the connector radius")

    alpha0 = 0.5 * math.pi - 0.5 * ring_span
    apex = ring_radius * np.array([math.cos(alpha0), math.sin(alpha0)])
    u1 = np.array([math.sin(alpha0), -math.cos(alpha0)])  # tangent into the gap
    n_a = np.array([math.cos(alpha0), math.sin(alpha0)])
    r = drop_scale
    # distinct tubes need > 2*eps spine clearance to keep their walls apart;
    # 2.4*eps leaves a 20% buffer while still admitting eps up to ~0.1 here
    margin = 2.4 * eps

    connector = ArcTube((0.0, 0.0), ring_radius, alpha0, alpha0 + ring_span, eps)

    chosen = None
    for factor in (1.0, 0.8, 0.65, 0.5, 1.25, 1.6, 2.0, 2.6):
        lt = drop_scale * factor
        center = apex + lt * u1 + r * n_a
        d = math.hypot(lt, r)
        beta = math.asin(r / d)
        chat = (center - apex) / d
        t1 = apex + lt * _rot(chat, -beta)
        t2 = apex + lt * _rot(chat, +beta)
        # the two drops must clear each other across the symmetry axis
        if 2.0 * abs(center[0]) < 2.0 * r + margin:
            continue
        # the drop circle must clear the connector arc
        if float(connector.spine_distance(center[None, :])[0]) - r < margin:
            continue
        # sampled right-side pieces must clear every left-side piece; by
        # symmetry, mirror the samples and measure against the right side
        us = np.linspace(0.0, 1.0, 48)
        leg_pts = np.concatenate(
            [
                apex[None, :] + us[:, None] * (t1 - apex)[None, :],
                apex[None, :] + us[:, None] * (t2 - apex)[None, :],
            ]
        )
        ang = np.linspace(0.0, _TWO_PI, 96, endpoint=False)
        circ_pts = center[None, :] + r * np.stack([np.cos(ang), np.sin(ang)], axis=1)
        samples = np.concatenate([leg_pts, circ_pts])
        mirrored = samples * np.array([-1.0, 1.0])
        d_leg1 = np.linalg.norm(mirrored - _segment_closest(mirrored, apex, t1), axis=1)
        d_leg2 = np.linalg.norm(mirrored - _segment_closest(mirrored, apex, t2), axis=1)
        d_circ = np.abs(np.linalg.norm(mirrored - center, axis=1) - r)
        if float(np.min([d_leg1.min(), d_leg2.min(), d_circ.min()])) < margin:
            continue
        chosen = (lt, center, beta, t1, t2)
        break
    if chosen is None:
        raise InvalidParameters(
            "no tangent-leg length separates the two drops at these parameters"
        )
    lt, center, beta, t1, t2 = chosen

    # far-side wall of the drop: the arc not facing the apex
    phi_a = math.atan2(apex[1] - center[1], apex[0] - center[0])
    angs = []
    for t in (t1, t2):
        a = math.atan2(t[1] - center[1], t[0] - center[0])
        while a <= phi_a:
            a += _TWO_PI
        angs.append(a)
    lo, hi = min(angs), max(angs)
    span_arc = hi - lo
    if not (math.pi < span_arc < _TWO_PI):
        raise InvalidParameters("drop wall arc is degenerate at these parameters")

    mirror = np.array([-1.0, 1.0])
    apex_l = apex * mirror
    center_l = center * mirror
    t1_l, t2_l = t1 * mirror, t2 * mirror

    dom = Union(
        connector,
        Capsule(tuple(apex), tuple(t1), eps),
        Capsule(tuple(apex), tuple(t2), eps),
        ArcTube(tuple(center), r, lo, hi, eps),
        Capsule(tuple(apex_l), tuple(t1_l), eps),
        Capsule(tuple(apex_l), tuple(t2_l), eps),
        ArcTube(tuple(center_l), r, math.pi - hi, math.pi - lo, eps),
    )
    return TwoDropsLayout(
        eps=float(eps),
        ring_radius=float(ring_radius),
        ring_span=float(ring_span),
        drop_scale=float(drop_scale),
        tangent_length=float(lt),
        beta=float(beta),
        apexes=np.array([apex, apex_l]),
        drop_centers=np.array([center, center_l]),
        tangency=np.array([[t1, t2], [t1_l, t2_l]]),
        arc_interval=(float(lo), float(hi)),
        domain=dom,
    )


def two_drops(
    eps: float = 0.05,
    ring_radius: float = 2.0,
    ring_span: float = 1.5 * math.pi,
    drop_scale: float = 1.0,
) -> Union:
    """The two-drops corridor domain (see two_drops_layout)."""
    return two_drops_layout(eps, ring_radius, ring_span, drop_scale).domain
