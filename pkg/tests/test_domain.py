import json
import math

import numpy as np
import pytest

from elastica.domain import (
    Union,
    characteristic_scale,
    disk,
    domain_from_json,
    domain_to_json,
    ellipse_domain,
    project_points,
    stadium,
    two_drops,
    two_drops_layout,
)
from elastica.errors import InvalidParameters, MalformedDomain


def spine_samples(layout, per_piece=400):
    """Dense points on every tube spine: connector arc, legs, drop walls."""
    alpha0 = 0.5 * math.pi - 0.5 * layout.ring_span
    th = np.linspace(alpha0, alpha0 + layout.ring_span, per_piece)
    pieces = [
        layout.ring_radius * np.column_stack([np.cos(th), np.sin(th)])
    ]
    lo, hi = layout.arc_interval
    arcs = [(layout.drop_centers[0], lo, hi)]
    arcs.append((layout.drop_centers[1], math.pi - hi, math.pi - lo))
    for center, a0, a1 in arcs:
        ph = np.linspace(a0, a1, per_piece)
        pieces.append(
            center + layout.drop_scale * np.column_stack([np.cos(ph), np.sin(ph)])
        )
    u = np.linspace(0.0, 1.0, per_piece)[:, None]
    for side in range(2):
        apex = layout.apexes[side]
        for t in layout.tangency[side]:
            pieces.append(apex + u * (t - apex))
    return np.vstack(pieces)


def sample_box(rng, bounds, m):
    x0, y0, x1, y1 = bounds
    return np.column_stack(
        [rng.uniform(x0, x1, m), rng.uniform(y0, y1, m)]
    )


def domain_box(dom, fallback=None):
    """Bounding box, falling back for trees that cannot bound themselves."""
    box = dom.bounds()
    if box is None:
        box = fallback
    assert box is not None
    return box


class TestPrimitivesAndCsg:
    def test_disk_outside_point(self):
        d = disk(0.0, 0.0, 1.0)
        assert d.sdf((2.0, 0.0)) == 1.0
        assert np.allclose(d.gradient((2.0, 0.0)), [1.0, 0.0], atol=1e-12)

    def test_union_nearest_disk(self):
        u = Union(disk(0.0, 0.0, 1.0), disk(3.0, 0.0, 1.0))
        assert u.sdf((1.5, 0.0)) == 0.5

    def test_contains(self):
        d = disk(0.0, 0.0, 1.0)
        assert d.contains((0.0, 0.0), tol=0.0)
        assert d.contains((1.0 + 1e-9, 0.0), tol=1e-6)
        assert not d.contains((2.0, 0.0), tol=1e-6)

    def test_stadium_and_ellipse_probes(self):
        st = stadium(2.0, 1.0)
        assert st.contains((0.0, 0.0))
        assert st.sdf((1.0, 0.0)) == -1.0  # cap center sits on the spine
        el = ellipse_domain(2.0, 1.0)
        assert el.sdf((2.5, 0.0)) > 0.0
        assert el.sdf((0.0, 0.0)) < 0.0

    def test_bad_parameters(self):
        with pytest.raises(MalformedDomain):
            stadium(-2.0, 1.0)
        with pytest.raises(MalformedDomain):
            ellipse_domain(2.0, 0.0)


class TestProject:
    def test_disk_exact(self):
        d = disk(0.0, 0.0, 1.0)
        q = project_points(d, [[2.0, 0.0]])[0]
        assert np.allclose(q, [1.0, 0.0], atol=1e-9)

    def test_inside_unchanged(self):
        d = disk(0.0, 0.0, 1.0)
        pts = np.array([[0.3, 0.4], [0.0, 0.0], [-0.9, 0.0]])
        assert np.array_equal(project_points(d, pts), pts)

    def test_two_drops_wall(self):
        layout = two_drops_layout()
        dom = layout.domain
        scale = characteristic_scale(dom)
        spine = spine_samples(layout, per_piece=400)
        rng = np.random.default_rng(7)
        dirs = rng.standard_normal(spine.shape)
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        outside = spine + (layout.eps + 1e-3) * dirs
        outside = outside[dom.values(outside) > 0.0]
        assert len(outside) > 100
        proj = project_points(dom, outside)
        assert np.abs(dom.values(proj)).max() <= 1e-6 * scale

    def test_idempotent(self):
        for dom in (disk(0.0, 0.0, 1.0), stadium(2.0, 1.0), two_drops()):
            scale = characteristic_scale(dom)
            rng = np.random.default_rng(8)
            x0, y0, x1, y1 = dom.bounds()
            pts = sample_box(rng, (x0 - 1.0, y0 - 1.0, x1 + 1.0, y1 + 1.0), 500)
            once = project_points(dom, pts)
            twice = project_points(dom, once)
            assert np.abs(twice - once).max() <= 1e-9 * scale


class TestTwoDrops:
    def test_spine_at_minus_eps(self):
        layout = two_drops_layout(0.05, 2.0, 1.5 * math.pi, 1.0)
        vals = layout.domain.values(spine_samples(layout))
        assert np.abs(vals + layout.eps).max() <= 1e-9

    def test_hole_centers_outside(self):
        layout = two_drops_layout(0.05, 2.0, 1.5 * math.pi, 1.0)
        vals = layout.domain.values(layout.hole_centers())
        assert np.all(vals > 0.0)

    def test_small_span_rejected(self):
        with pytest.raises(InvalidParameters):
            two_drops(0.05, 2.0, math.pi / 2.0, 1.0)

    def test_bad_eps_rejected(self):
        with pytest.raises(InvalidParameters):
            two_drops(-1.0, 2.0, 1.5 * math.pi, 1.0)
        with pytest.raises(InvalidParameters):
            two_drops(0.5, 2.0, 1.5 * math.pi, 1.0)  # eps >= 0.2*drop_scale

    def test_area_linear_in_eps(self):
        # tube area ~ 2*eps*spine_length, so halving eps halves the area
        layouts = {e: two_drops(e, 2.0, 1.5 * math.pi, 1.0) for e in (0.1, 0.05, 0.025)}
        x0, y0, x1, y1 = layouts[0.1].bounds()
        rng = np.random.default_rng(9)
        pts = sample_box(rng, (x0, y0, x1, y1), 200_000)
        counts = {e: int((d.values(pts) < 0.0).sum()) for e, d in layouts.items()}
        assert counts[0.025] > 1000
        assert 1.8 <= counts[0.1] / counts[0.05] <= 2.2
        assert 1.8 <= counts[0.05] / counts[0.025] <= 2.2


class TestSignOracle:
    """sign(sdf) against independent point-membership tests, away from the
    boundary band where polygonization error could flip either verdict."""

    def _check(self, dom, oracle, rng, m=10_000, band=None, box=None):
        scale = characteristic_scale(dom)
        band = band if band is not None else 1e-9 * scale
        x0, y0, x1, y1 = domain_box(dom, box)
        pad = 0.25 * max(x1 - x0, y1 - y0)
        accepted = 0
        while accepted < m:
            pts = sample_box(rng, (x0 - pad, y0 - pad, x1 + pad, y1 + pad), m)
            vals = dom.values(pts)
            keep = np.abs(vals) > band
            pts, vals = pts[keep], vals[keep]
            inside = oracle(pts)
            assert np.array_equal(vals < 0.0, inside)
            accepted += len(pts)

    def test_disk(self):
        d = disk(0.3, -0.2, 1.7)
        self._check(
            d,
            lambda p: np.linalg.norm(p - [0.3, -0.2], axis=1) < 1.7,
            np.random.default_rng(10),
        )

    def test_stadium(self):
        st = stadium(2.0, 1.0)

        def oracle(p):
            x = np.clip(p[:, 0], -1.0, 1.0)
            return np.hypot(p[:, 0] - x, p[:, 1]) < 1.0

        self._check(st, oracle, np.random.default_rng(11))

    def test_ellipse_polygon(self):
        el = ellipse_domain(2.0, 1.0)
        # rebuild the 256 tangent lines, intersect consecutive ones into
        # polygon vertices, then use even-odd ray crossing
        a, b, sides = 2.0, 1.0, 256
        t = 2.0 * math.pi * np.arange(sides) / sides
        nx, ny = np.cos(t) / a, np.sin(t) / b
        # vertex k solves n_k . v = 1 and n_{k+1} . v = 1
        nx2, ny2 = np.roll(nx, -1), np.roll(ny, -1)
        det = nx * ny2 - ny * nx2
        verts = np.column_stack([(ny2 - ny) / det, (nx - nx2) / det])

        def oracle(p):
            ax, ay = verts[:, 0], verts[:, 1]
            bx, by = np.roll(ax, -1), np.roll(ay, -1)
            straddle = (ay[None, :] > p[:, 1:2]) != (by[None, :] > p[:, 1:2])
            with np.errstate(divide="ignore", invalid="ignore"):
                xs = ax[None, :] + (p[:, 1:2] - ay[None, :]) / (by - ay)[None, :] * (
                    bx - ax
                )[None, :]
            hits = straddle & (xs > p[:, 0:1])
            return hits.sum(axis=1) % 2 == 1

        self._check(
            el, oracle, np.random.default_rng(12), band=1e-7, box=(-2.0, -1.0, 2.0, 1.0)
        )

    def test_two_drops_tube(self):
        from scipy.spatial import cKDTree

        layout = two_drops_layout()
        tree = cKDTree(spine_samples(layout, per_piece=4000))

        def oracle(p):
            return tree.query(p)[0] < layout.eps

        # spine sampling is ~2e-3 apart; stay clear of that ambiguity band
        self._check(
            layout.domain, oracle, np.random.default_rng(13), m=10_000, band=5e-3
        )


class TestLipschitz:
    def test_one_lipschitz_pairs(self):
        rng = np.random.default_rng(14)
        for dom in (
            disk(0.0, 0.0, 1.0),
            stadium(2.0, 1.0),
            ellipse_domain(2.0, 1.0),
            two_drops(),
        ):
            x0, y0, x1, y1 = domain_box(dom, (-2.0, -1.0, 2.0, 1.0))
            pad = x1 - x0
            box = (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
            p = sample_box(rng, box, 10_000)
            q = sample_box(rng, box, 10_000)
            lhs = np.abs(dom.values(p) - dom.values(q))
            rhs = np.linalg.norm(p - q, axis=1)
            assert np.all(lhs <= rhs * (1.0 + 1e-12) + 1e-12)


class TestConvexity:
    def test_sdf_convex_along_segments(self):
        rng = np.random.default_rng(15)
        for dom in (disk(0.0, 0.0, 1.0), stadium(2.0, 1.0), ellipse_domain(2.0, 1.0)):
            x0, y0, x1, y1 = domain_box(dom, (-2.0, -1.0, 2.0, 1.0))
            pad = 0.5 * (x1 - x0)
            box = (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
            p = sample_box(rng, box, 5_000)
            q = sample_box(rng, box, 5_000)
            mid = 0.5 * (p + q)
            assert np.all(
                dom.values(mid) <= 0.5 * (dom.values(p) + dom.values(q)) + 1e-9
            )


class TestJson:
    def test_roundtrip_all_generators(self):
        rng = np.random.default_rng(16)
        for dom in (
            disk(0.5, -0.25, 1.5),
            stadium(2.0, 1.0),
            ellipse_domain(2.0, 1.0),
            two_drops(0.05, 2.0, 1.5 * math.pi, 1.0),
        ):
            again = domain_from_json(domain_to_json(dom))
            x0, y0, x1, y1 = domain_box(dom, (-2.0, -1.0, 2.0, 1.0))
            pts = sample_box(rng, (x0 - 1.0, y0 - 1.0, x1 + 1.0, y1 + 1.0), 2_000)
            assert np.array_equal(dom.values(pts), again.values(pts))

    def test_unknown_shape_rejected(self):
        with pytest.raises(MalformedDomain):
            domain_from_json(json.dumps({"shape": "octagon", "r": 1.0}))

    def test_malformed_tree_rejected(self):
        with pytest.raises(MalformedDomain):
            domain_from_json(json.dumps({"op": "union"}))
