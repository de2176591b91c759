"""Structural checks on closed curves: wall contacts, self-contact couples,
their nesting structure, winding-number profile, convexity, and the
bending-energy--area ratio.

Self-contacts are detected as vertex pairs that are close in the plane but
far along the curve, then clustered into contact regions; each region is
summarized by its closest pair ("couple"). Couples are classified by the
angle between the tangent lines: tangential (parallel or antiparallel) or
transversal. On top of the couples sit combinatorial checks: no two couples
interleave cyclically (non-crossing) and the linear index intervals form a
laminar family (nested), with the two extreme couples singled out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import (
    UNIFORM_SPREAD_TOL,
    ClosedCurve,
    edge_spread,
    from_points,
    length,
    resample_uniform,
    signed_area,
    tangent_field,
    turning_angles,
)
from .domain import DomainSpec, characteristic_scale
from .energy import bending_energy, open_arc_turning_energy
from .errors import (
    InvalidParameters,
    MultiplicityViolation,
    NonUniform,
    NotSimple,
)

TANGENTIAL_PARALLEL = "tangential_parallel"
TANGENTIAL_ANTIPARALLEL = "tangential_antiparallel"
TRANSVERSAL = "transversal"


@dataclass(frozen=True)
class BoundaryArc:
    """Maximal cyclic run [start..end] of vertices on the domain wall."""

    start: int
    end: int
    point: tuple[float, float]

    def count(self, n: int) -> int:
        return (self.end - self.start) % n + 1


@dataclass(frozen=True)
class SelfCouple:
    """One self-contact region, summarized by its closest vertex pair (i, j).

    i_range/j_range bound the region's indices on both strands and pairs
    holds every close vertex pair of the region, sorted by first index.
    """

    i: int
    j: int
    gap: float
    angle_deg: float
    kind: str
    i_range: tuple[int, int]
    j_range: tuple[int, int]
    pair_count: int
    pairs: np.ndarray = field(compare=False, repr=False)


@dataclass(frozen=True)
class ContactReport:
    boundary_arcs: tuple
    self_couples: tuple


@dataclass(frozen=True)
class StructureReport:
    non_crossing: bool
    nested: bool
    multiplicity_ok: bool
    special_couples: tuple | None
    index_values: dict
    is_convex: bool
    bh_ratio: float | None
    branch_energy_ratio: float | None


def _cyclic_gap(a: int, b: int, n: int) -> int:
    d = abs(a - b) % n
    return min(d, n - d)


def boundary_contacts(
    curve: ClosedCurve, domain: DomainSpec, tol: float | None = None
) -> list[BoundaryArc]:
    """Maximal cyclic vertex runs with |sdf| <= tol, gaps < 3 bridged."""
    if tol is None:
        tol = 1e-3 * characteristic_scale(domain)
    if tol <= 0:
        raise InvalidParameters(f"tol must be positive, got {tol!r}")
    n = curve.n
    on_wall = np.abs(domain.values(curve.points)) <= tol
    if not np.any(on_wall):
        return []
    if np.all(on_wall):
        mid = n // 2
        return [BoundaryArc(0, n - 1, tuple(curve.points[mid]))]
    # runs of consecutive contact vertices, cyclically
    starts = np.nonzero(on_wall & ~np.roll(on_wall, 1))[0]
    runs = []
    for s in starts:
        e = s
        while on_wall[(e + 1) % n]:
            e += 1
        runs.append([int(s), int(e)])  # e may exceed n-1 to encode wrap
    runs.sort()
    # bridge non-contact gaps of fewer than 3 vertices
    merged = [runs[0]]
    for s, e in runs[1:]:
        if s - merged[-1][1] - 1 < 3:
            merged[-1][1] = e
        else:
            merged.append([s, e])
    if len(merged) > 1:
        first, last = merged[0], merged[-1]
        if (first[0] + n) - last[1] - 1 < 3:
            first[0] = last[0] - n
            merged.pop()
    arcs = []
    for s, e in merged:
        mid = ((s + e) // 2) % n
        arcs.append(BoundaryArc(s % n, e % n, tuple(curve.points[mid])))
    return arcs


def self_contacts(
    curve: ClosedCurve, tol_d: float | None = None, tol_angle: float = 5.0
) -> list[SelfCouple]:
    """Self-contact couples: close in the plane, far along the curve.

    Vertex pairs with |p_i - p_j| <= tol_d and cyclic index separation
    >= n/20 are clustered into regions (pairs whose endpoints sit within
    max(3, n/128) indices of each other on both strands join up); each
    region is reported once, through its closest pair.
    """
    n = curve.n
    pts = curve.points
    if tol_d is None:
        tol_d = 1e-3 * curve.bbox_diag()
    if tol_d <= 0:
        raise InvalidParameters(f"tol_d must be positive, got {tol_d!r}")
    if not (0.0 < tol_angle < 90.0):
        raise InvalidParameters(f"tol_angle must lie in (0, 90), got {tol_angle!r}")
    min_sep = max(1, n // 20)

    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, n - sep)
    mask = (d2 <= tol_d * tol_d) & (sep >= min_sep) & (idx[:, None] < idx[None, :])
    ii, jj = np.nonzero(mask)
    if ii.size == 0:
        return []

    # classify each pair by the angle between the two local tangents before
    # clustering — a tangential contact band can run straight into a
    # crossing, and linking by proximity alone would swallow one into the
    # other even though they are different kinds of contact
    tangents = tangent_field(curve).values
    dots = np.clip(np.einsum("ij,ij->i", tangents[ii], tangents[jj]), -1.0, 1.0)
    angles = np.degrees(np.arccos(dots))
    kind_of = np.where(
        angles <= tol_angle, 0, np.where(angles >= 180.0 - tol_angle, 1, 2)
    )
    kind_names = (TANGENTIAL_PARALLEL, TANGENTIAL_ANTIPARALLEL, TRANSVERSAL)

    cell = max(3, n // 128)
    nb = -(-n // cell)
    parent = list(range(ii.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for cls in (0, 1, 2):
        buckets: dict[tuple[int, int], list[int]] = {}
        for k in np.nonzero(kind_of == cls)[0]:
            buckets.setdefault((ii[k] // cell, jj[k] // cell), []).append(int(k))
        for (bi, bj), members in buckets.items():
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    other = buckets.get(((bi + di) % nb, (bj + dj) % nb))
                    if other is None:
                        continue
                    for k in members:
                        for m in other:
                            if m <= k:
                                continue
                            if (
                                _cyclic_gap(ii[k], ii[m], n) <= cell
                                and _cyclic_gap(jj[k], jj[m], n) <= cell
                            ):
                                union(k, m)

    groups: dict[int, list[int]] = {}
    for k in range(ii.size):
        groups.setdefault(find(k), []).append(k)

    couples = []
    for root in sorted(groups):
        members = groups[root]
        a = ii[members]
        b = jj[members]
        gaps = np.sqrt(d2[a, b])
        best = int(np.argmin(gaps))
        i, j, gap = int(a[best]), int(b[best]), float(gaps[best])
        order = np.lexsort((b, a))
        pairs = np.stack([a[order], b[order]], axis=1)
        couples.append(
            SelfCouple(
                i=i,
                j=j,
                gap=gap,
                angle_deg=float(angles[members[best]]),
                kind=kind_names[kind_of[members[best]]],
                i_range=(int(a.min()), int(a.max())),
                j_range=(int(b.min()), int(b.max())),
                pair_count=int(len(members)),
                pairs=pairs,
            )
        )
    couples.sort(key=lambda c: (c.i, c.j))
    return couples


def _couple_ij(c) -> tuple[int, int]:
    if isinstance(c, SelfCouple):
        return c.i, c.j
    i, j = c
    return int(i), int(j)


def verify_decomposition(couples, n: int):
    """Check the combinatorial structure of self-contact couples.

    Returns (non_crossing, nested, special). non_crossing: no two couples
    interleave as a1 < a2 < b1 < b2 cyclically. nested: the linear index
    intervals [i, j] are pairwise disjoint or contained. special: the two
    extreme couples, each with one contact-free side, when the family is
    laminar and has at least two members; otherwise None.

    Raises MultiplicityViolation when two couples share an endpoint region
    (three strands through one point).
    """
    if n < 3:
        raise InvalidParameters(f"n must be >= 3, got {n}")
    ij = []
    for c in couples:
        i, j = _couple_ij(c)
        if not (0 <= i < j < n):
            raise InvalidParameters(f"couple ({i}, {j}) out of range for n={n}")
        ij.append((i, j))
    if len(ij) <= 1:
        return True, True, None

    for x in range(len(ij)):
        for y in range(x + 1, len(ij)):
            for ex in ij[x]:
                for ey in ij[y]:
                    if _cyclic_gap(ex, ey, n) <= 3:
                        raise MultiplicityViolation(
                            f"couples {ij[x]} and {ij[y]} share the endpoint "
                            f"region near index {ex}"
                        )

    def inside(x, a, b):
        return 0 < (x - a) % n < (b - a) % n

    non_crossing = True
    for x in range(len(ij)):
        a1, b1 = ij[x]
        for y in range(x + 1, len(ij)):
            a2, b2 = ij[y]
            if inside(a2, a1, b1) != inside(b2, a1, b1):
                non_crossing = False

    nested = True
    for x in range(len(ij)):
        i1, j1 = ij[x]
        for y in range(x + 1, len(ij)):
            i2, j2 = ij[y]
            disjoint = j1 < i2 or j2 < i1
            contained = (i1 < i2 and j2 < j1) or (i2 < i1 and j1 < j2)
            if not (disjoint or contained):
                nested = False

    special = None
    if nested and non_crossing:
        endpoints = sorted(e for pair in ij for e in pair)
        candidates = []
        for i, j in ij:
            others = [e for e in endpoints if e not in (i, j)]
            inner_free = not any(i < e < j for e in others)
            outer_free = not any(e < i or e > j for e in others)
            if inner_free or outer_free:
                candidates.append((j - i, i, j))
        if len(candidates) >= 2:
            candidates.sort()
            special = ((candidates[0][1], candidates[0][2]),
                       (candidates[-1][1], candidates[-1][2]))
    return non_crossing, nested, special


def reorient_canonical(curve: ClosedCurve) -> ClosedCurve:
    """Counter-clockwise version of the curve; vertex 0 stays first."""
    if signed_area(curve) >= 0:
        return curve
    pts = curve.points
    return from_points(np.concatenate([pts[:1], pts[:0:-1]]))


def _distance_to_polyline(grid: np.ndarray, pts: np.ndarray) -> np.ndarray:
    seg_v = np.roll(pts, -1, axis=0) - pts
    len2 = np.einsum("ij,ij->i", seg_v, seg_v)
    out = np.empty(grid.shape[0])
    chunk = 256
    for k in range(0, grid.shape[0], chunk):
        g = grid[k : k + chunk]
        w = g[:, None, :] - pts[None, :, :]
        t = np.clip(np.einsum("mnk,nk->mn", w, seg_v) / len2[None, :], 0.0, 1.0)
        closest = w - t[:, :, None] * seg_v[None, :, :]
        d2 = np.einsum("mnk,mnk->mn", closest, closest)
        out[k : k + chunk] = np.sqrt(d2.min(axis=1))
    return out


def _winding_many(grid: np.ndarray, pts: np.ndarray) -> np.ndarray:
    out = np.empty(grid.shape[0], dtype=int)
    chunk = 256
    for k in range(0, grid.shape[0], chunk):
        g = grid[k : k + chunk]
        a = pts[None, :, :] - g[:, None, :]
        b = np.roll(a, -1, axis=1)
        cross = a[:, :, 0] * b[:, :, 1] - a[:, :, 1] * b[:, :, 0]
        dot = np.einsum("mnk,mnk->mn", a, b)
        total = np.arctan2(cross, dot).sum(axis=1)
        out[k : k + chunk] = np.rint(total / (2.0 * math.pi)).astype(int)
    return out


def index_profile(curve: ClosedCurve, grid_resolution: int = 64) -> dict[int, int]:
    """Histogram of winding numbers over a bounding-box grid.

    The curve is first made counter-clockwise; grid points within 2 mean
    edge lengths of the curve are skipped (winding is ambiguous there).
    """
    if grid_resolution < 16:
        raise InvalidParameters(f"grid_resolution must be >= 16, got {grid_resolution}")
    c = reorient_canonical(curve)
    pts = c.points
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = 0.05 * max(float((hi - lo).max()), 1e-9)
    xs = np.linspace(lo[0] - pad, hi[0] + pad, grid_resolution)
    ys = np.linspace(lo[1] - pad, hi[1] + pad, grid_resolution)
    gx, gy = np.meshgrid(xs, ys)
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)
    mean_edge = length(c) / c.n
    keep = _distance_to_polyline(grid, pts) > 2.0 * mean_edge
    if not np.any(keep):
        return {}
    values = _winding_many(grid[keep], pts)
    uniq, counts = np.unique(values, return_counts=True)
    return {int(v): int(k) for v, k in zip(uniq, counts)}


def is_convex(curve: ClosedCurve, tol: float = 1e-6) -> bool:
    """True iff every vertex turns the same way and the total turn is one loop.

    tol is an angular slack in radians: tiny opposite-sign turning angles
    below it are tolerated. Scale-, rotation- and translation-invariant.
    """
    if edge_spread(curve) > UNIFORM_SPREAD_TOL:
        raise NonUniform("is_convex needs a uniform-speed curve; resample first")
    theta = turning_angles(curve)
    total = float(theta.sum())
    loops = round(total / (2.0 * math.pi))
    if loops not in (-1, 1):
        return False
    return bool(np.all(loops * theta >= -tol))


def _has_proper_crossing(pts: np.ndarray) -> bool:
    n = pts.shape[0]
    r = np.roll(pts, -1, axis=0) - pts
    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    qx = px + r[:, 0][:, None]
    qy = py + r[:, 1][:, None]

    def cross_to(ax, ay):
        return r[:, 0][:, None] * (ay - py) - r[:, 1][:, None] * (ax - px)

    c1 = cross_to(px.T, py.T)
    c2 = cross_to(qx.T, qy.T)
    straddle = (c1 * c2) < 0
    proper = straddle & straddle.T
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, n - sep)
    return bool(np.any(proper & (sep >= 2)))


def bh_ratio(curve: ClosedCurve) -> float:
    """(bending energy)^2 * enclosed area / (4 pi^3); 1.0 exactly on circles.

    Raises NotSimple when the curve self-touches (distinct vertices closer
    than 1e-6 of the bounding-box diagonal) or has a proper self-crossing.
    """
    n = curve.n
    pts = curve.points
    scale = curve.bbox_diag()
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, n - sep)
    if np.any((d2 <= (1e-6 * scale) ** 2) & (sep >= 2)):
        raise NotSimple("curve has near-coincident distinct vertices")
    if _has_proper_crossing(pts):
        raise NotSimple("curve crosses itself")
    w = bending_energy(curve)
    area = abs(signed_area(curve))
    return w * w * area / (4.0 * math.pi**3)


def branch_energy_ratio(curve: ClosedCurve, couple: SelfCouple) -> float:
    """Energy ratio of the two strands spanned by one tangential contact region.

    Two pairs are taken at the quartiles of the region's pair list; the
    branches are the forward index paths connecting them on each strand.
    For a true minimizer both branches run between the same two contact
    points, so the ratio should be 1 up to discretization.
    """
    pairs = np.asarray(couple.pairs)
    k = pairs.shape[0]
    if k < 4:
        raise InvalidParameters("need at least 4 contact pairs to span branches")
    t1, s1 = (int(v) for v in pairs[k // 4])
    t2, s2 = (int(v) for v in pairs[(3 * k) // 4])
    if t1 == t2 or s1 == s2:
        raise InvalidParameters("contact region too short to span branches")
    n = curve.n

    def forward(a, b):
        count = (b - a) % n + 1
        return curve.points[(a + np.arange(count)) % n]

    branch1 = forward(t1, t2)
    if couple.kind == TANGENTIAL_PARALLEL:
        branch2 = forward(s1, s2)
    else:
        branch2 = forward(s2, s1)
    e1 = open_arc_turning_energy(branch1)
    e2 = open_arc_turning_energy(branch2)
    if min(e1, e2) <= 0.0:
        raise InvalidParameters("degenerate branch with no bending energy")
    return e1 / e2


def splice_at_couple(curve: ClosedCurve, couple) -> ClosedCurve:
    """Reverse the sub-arc between a couple's indices (index surgery).

    Reconnects the two strands through the contact, turning a doubled
    loop into a simple one (or vice versa). Raises DegenerateEdge when the
    couple's vertices coincide, since the splice would create a zero edge.
    """
    i, j = _couple_ij(couple)
    n = curve.n
    if not (0 <= i < j < n):
        raise InvalidParameters(f"couple ({i}, {j}) out of range for n={n}")
    pts = curve.points
    spliced = np.concatenate([pts[: i + 1], pts[i + 1 : j + 1][::-1], pts[j + 1 :]])
    return from_points(spliced)


def analyze_curve(
    curve: ClosedCurve,
    domain: DomainSpec | None = None,
    boundary_tol: float | None = None,
    self_tol: float | None = None,
    tol_angle: float = 5.0,
    grid_resolution: int = 64,
    convexity_tol: float = 1e-6,
):
    """Full structural report. Returns (ContactReport, StructureReport).

    The default self-contact tolerance is the larger of 1e-3 of the
    bounding-box diagonal and one mean edge length, so that two strands
    sampled out of phase still register. Non-uniform input is resampled.
    """
    if edge_spread(curve) > UNIFORM_SPREAD_TOL:
        curve = resample_uniform(curve)
    arcs = boundary_contacts(curve, domain, boundary_tol) if domain is not None else []
    if self_tol is None:
        self_tol = max(1e-3 * curve.bbox_diag(), length(curve) / curve.n)
    couples = self_contacts(curve, self_tol, tol_angle)
    multiplicity_ok = True
    try:
        non_crossing, nested, special = verify_decomposition(couples, curve.n)
    except MultiplicityViolation:
        multiplicity_ok = False
        non_crossing, nested, special = False, False, None
    index_values = index_profile(curve, grid_resolution)
    convex = is_convex(curve, convexity_tol)
    try:
        ratio = bh_ratio(curve)
    except NotSimple:
        ratio = None
    branch = None
    tangential = [
        c
        for c in couples
        if c.kind in (TANGENTIAL_PARALLEL, TANGENTIAL_ANTIPARALLEL) and c.pair_count >= 8
    ]
    if tangential:
        widest = max(tangential, key=lambda c: c.pair_count)
        try:
            branch = branch_energy_ratio(curve, widest)
        except InvalidParameters:
            branch = None
    return (
        ContactReport(boundary_arcs=tuple(arcs), self_couples=tuple(couples)),
        StructureReport(
            non_crossing=non_crossing,
            nested=nested,
            multiplicity_ok=multiplicity_ok,
            special_couples=special,
            index_values=index_values,
            is_convex=convex,
            bh_ratio=ratio,
            branch_energy_ratio=branch,
        ),
    )


def report_to_jsonable(contact: ContactReport, structure: StructureReport) -> dict:
    """JSON-ready dict with deterministic ordering."""
    return {
        "boundary_arcs": [
            {"start": a.start, "end": a.end, "point": [a.point[0], a.point[1]]}
            for a in contact.boundary_arcs
        ],
        "self_couples": [
            {
                "i": c.i,
                "j": c.j,
                "gap": c.gap,
                "angle_deg": c.angle_deg,
                "kind": c.kind,
                "i_range": list(c.i_range),
                "j_range": list(c.j_range),
                "pair_count": c.pair_count,
            }
            for c in contact.self_couples
        ],
        "structure": {
            "non_crossing": structure.non_crossing,
            "nested": structure.nested,
            "multiplicity_ok": structure.multiplicity_ok,
            "special_couples": (
                None
                if structure.special_couples is None
                else [list(p) for p in structure.special_couples]
            ),
            "index_values": {
                str(k): structure.index_values[k] for k in sorted(structure.index_values)
            },
            "is_convex": structure.is_convex,
            "bh_ratio": structure.bh_ratio,
            "branch_energy_ratio": structure.branch_energy_ratio,
        },
    }
