import math

import numpy as np
import pytest

from conftest import make_loop, make_loop_in_unit_disk
from elastica.curve import circle, from_points, resample_uniform, scale_about
from elastica.energy import (
    bending_energy,
    directional_derivative,
    el_residual,
    energy_report,
    first_variation,
    turning_angle_energy,
)
from elastica.errors import LengthMismatch, NonUniform

# quad of kappa(t)^2 * speed(t) over [0, 2pi] for the 2x1 ellipse,
# kappa = ab / speed^3
ELLIPSE_W_2_1 = 6.6360297521232985


def analytic_ellipse(a=2.0, b=1.0, n=2048):
    """Vertices on the exact ellipse at equal true arc length."""
    t = np.linspace(0.0, 2.0 * np.pi, 2_000_001)
    speed = np.hypot(a * np.sin(t), b * np.cos(t))
    s = np.concatenate(
        [[0.0], np.cumsum((speed[1:] + speed[:-1]) * 0.5 * np.diff(t))]
    )
    tsamp = np.interp(np.arange(n) * s[-1] / n, s, t)
    return from_points(np.column_stack([a * np.cos(tsamp), b * np.sin(tsamp)]))


def rounded_rectangle(w=2.0, h=1.0, r=0.3, n=512):
    """Axis-aligned straight sides joined by quarter circles, uniform mesh."""
    m = 600
    pieces = []
    corners = [
        (w / 2 - r, -h / 2 + r, -np.pi / 2),
        (w / 2 - r, h / 2 - r, 0.0),
        (-w / 2 + r, h / 2 - r, np.pi / 2),
        (-w / 2 + r, -h / 2 + r, np.pi),
    ]
    sides = [
        np.column_stack(
            [np.linspace(-w / 2 + r, w / 2 - r, m, endpoint=False), np.full(m, -h / 2)]
        ),
        np.column_stack(
            [np.full(m, w / 2), np.linspace(-h / 2 + r, h / 2 - r, m, endpoint=False)]
        ),
        np.column_stack(
            [np.linspace(w / 2 - r, -w / 2 + r, m, endpoint=False), np.full(m, h / 2)]
        ),
        np.column_stack(
            [np.full(m, -w / 2), np.linspace(h / 2 - r, -h / 2 + r, m, endpoint=False)]
        ),
    ]
    for side, (cx, cy, th0) in zip(sides, corners):
        pieces.append(side)
        th = np.linspace(th0, th0 + np.pi / 2, m, endpoint=False)
        pieces.append(np.column_stack([cx + r * np.cos(th), cy + r * np.sin(th)]))
    return resample_uniform(from_points(np.vstack(pieces)), n)


class TestBendingEnergy:
    def test_unit_circle(self):
        w = bending_energy(circle((0.0, 0.0), 1.0, 1024))
        assert abs(w - 2.0 * math.pi) <= 1e-3 * 2.0 * math.pi

    def test_circle_radii(self):
        for r in (0.5, 1.0, 3.0):
            w = bending_energy(circle((0.0, 0.0), r, 512))
            assert abs(w - 2.0 * math.pi / r) <= 1e-3 * 2.0 * math.pi / r

    def test_ellipse_quadrature(self):
        w = bending_energy(analytic_ellipse())
        assert abs(w - ELLIPSE_W_2_1) <= 1e-3 * ELLIPSE_W_2_1

    def test_nonuniform_rejected(self):
        # parameter-uniform ellipse samples have speed varying 1..2
        t = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
        crv = from_points(np.column_stack([2.0 * np.cos(t), np.sin(t)]))
        with pytest.raises(NonUniform):
            bending_energy(crv)


class TestScalingAndInvariance:
    def test_scaling_law(self):
        rng = np.random.default_rng(101)
        for _ in range(5):
            crv = make_loop(rng)
            w = bending_energy(crv)
            for lam in (0.5, 2.0, 10.0):
                ws = bending_energy(scale_about(crv, lam, center=(0.2, -0.4)))
                assert abs(ws * lam - w) <= 1e-12 * w

    def test_euclidean_invariance(self):
        rng = np.random.default_rng(102)
        for _ in range(10):
            crv = make_loop(rng)
            w = bending_energy(crv)
            ang = rng.uniform(0.0, 2.0 * math.pi)
            c, s = math.cos(ang), math.sin(ang)
            rot = np.array([[c, -s], [s, c]])
            moved = from_points(crv.points @ rot.T + rng.uniform(-4.0, 4.0, 2))
            assert abs(bending_energy(moved) - w) <= 1e-12 * w


class TestDirectionalDerivative:
    def test_translation_null(self):
        crv = circle((0.0, 0.0), 1.0, 512)
        w = bending_energy(crv)
        d = directional_derivative(crv, np.tile([0.7, -0.3], (512, 1)))
        assert abs(d) <= 1e-10 * w

    def test_radial_gives_minus_w(self):
        # differentiate W(lam*curve) = W/lam at lam=1
        for r in (0.7, 1.5):
            crv = circle((0.0, 0.0), r, 512)
            w = bending_energy(crv)
            d = directional_derivative(crv, crv.points.copy())
            assert abs(d + w) <= 1e-8 * w

    def test_matches_central_differences(self):
        rng = np.random.default_rng(103)
        for _ in range(50):
            crv = make_loop(rng, n=128)
            pts = crv.points
            diag = float(np.linalg.norm(pts.max(0) - pts.min(0)))
            delta = rng.standard_normal(pts.shape)
            delta /= np.linalg.norm(delta)  # unit direction keeps FD truncation low
            h = 1e-6 * diag
            wp = bending_energy(from_points(pts + h * delta))
            wm = bending_energy(from_points(pts - h * delta))
            fd = (wp - wm) / (2.0 * h)
            dd = directional_derivative(crv, delta)
            assert abs(dd - fd) <= 1e-6 * max(abs(fd), 1e-12)

    def test_length_mismatch(self):
        crv = circle((0.0, 0.0), 1.0, 64)
        with pytest.raises(LengthMismatch):
            directional_derivative(crv, np.zeros((32, 2)))


class TestFirstVariation:
    def test_consistency_with_directional(self):
        rng = np.random.default_rng(104)
        crv = make_loop(rng)
        g = first_variation(crv).values
        for _ in range(100):
            delta = rng.standard_normal(crv.points.shape)
            dd = directional_derivative(crv, delta)
            assert abs(float((g * delta).sum()) - dd) <= 1e-12 * max(abs(dd), 1e-12)

    def test_translation_null(self):
        rng = np.random.default_rng(105)
        for _ in range(10):
            g = first_variation(make_loop(rng)).values
            assert np.abs(g.sum(axis=0)).max() <= 1e-10 * np.linalg.norm(g)

    def test_rotation_null(self):
        rng = np.random.default_rng(106)
        for _ in range(10):
            crv = make_loop(rng)
            g = first_variation(crv).values
            pts = crv.points
            diag = float(np.linalg.norm(pts.max(0) - pts.min(0)))
            center = pts.mean(axis=0)
            perp = np.column_stack([-(pts[:, 1] - center[1]), pts[:, 0] - center[0]])
            assert abs(float((g * perp).sum())) <= 1e-10 * np.linalg.norm(g) * diag


class TestElResidual:
    def test_circle_constant_curvature(self):
        # kappa'' = 0 so the residual is kappa^3 = 1/R^3
        for r in (1.0, 2.0):
            res = el_residual(circle((0.0, 0.0), r, 1024)).values
            assert np.abs(res - 1.0 / r**3).max() <= 1e-3 / r**3

    def test_straight_runs_vanish_exactly(self):
        crv = rounded_rectangle()
        from elastica.curve import curvature_field

        kap = curvature_field(crv).values
        res = el_residual(crv).values
        flat = kap == 0.0
        interior = flat & np.roll(flat, 1) & np.roll(flat, -1)
        assert int(interior.sum()) >= 100
        assert np.abs(res[interior]).max() == 0.0

    def test_nonuniform_rejected(self):
        t = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
        crv = from_points(np.column_stack([2.0 * np.cos(t), np.sin(t)]))
        with pytest.raises(NonUniform):
            el_residual(crv)


class TestEnergyReport:
    def test_unit_circle_fields(self):
        rep = energy_report(circle((0.0, 0.0), 1.0, 1024))
        assert abs(rep.bending - 2.0 * math.pi) <= 1e-3 * 2.0 * math.pi
        assert abs(rep.perimeter - 2.0 * math.pi) <= 1e-3 * 2.0 * math.pi
        assert rep.grad_norm >= 0.0
        assert abs(rep.el_residual_max - 1.0) <= 2e-3

    def test_product_floor_on_random_loops(self):
        floor = 4.0 * math.pi**2 * 0.95
        rng = np.random.default_rng(107)
        for _ in range(100):
            rep = energy_report(make_loop(rng, n=256))
            assert rep.bending * rep.perimeter >= floor

    def test_scaled_curve_homogeneity(self):
        rng = np.random.default_rng(108)
        crv = make_loop(rng)
        rep = energy_report(crv)
        rep3 = energy_report(scale_about(crv, 3.0))
        assert abs(rep3.bending - rep.bending / 3.0) <= 1e-12 * rep.bending
        assert abs(rep3.perimeter - rep.perimeter * 3.0) <= 1e-12 * rep.perimeter

    def test_warns_below_floor(self):
        # a regular octagon has W*L = 4 pi^2 (sin(pi/8)/(pi/8))^2, just
        # under the 5%-slack floor
        with pytest.warns(RuntimeWarning):
            energy_report(circle((0.0, 0.0), 1.0, 8))


class TestLengthBound:
    def test_unit_disk_curves(self):
        rng = np.random.default_rng(109)
        bound = (2.0 * math.pi) ** 3 * 1.05
        for _ in range(50):
            crv = make_loop_in_unit_disk(rng)
            rep = energy_report(crv)
            assert rep.perimeter <= bound * rep.bending


class TestTurningAngleCrossCheck:
    def test_agrees_with_bending_energy(self):
        rng = np.random.default_rng(110)
        crvs = [circle((0.0, 0.0), 1.0, 512)] + [make_loop(rng, n=512) for _ in range(10)]
        for crv in crvs:
            w = bending_energy(crv)
            assert abs(turning_angle_energy(crv) - w) <= 1e-2 * w
