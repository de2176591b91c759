"""Shared fixtures: random smooth loops and cached solver runs.

The four minimization runs (disk, stadium, ellipse, two drops) are expensive,
so they execute once per session; each fixture records its own wall time so
acceptance tests can assert runtime budgets against the actual solve.
"""

import math
import time

import numpy as np
import pytest

from elastica.curve import circle, from_points, resample_uniform
from elastica.domain import disk, ellipse_domain, stadium, two_drops_layout
from elastica.solver import SolverConfig, minimize, seed_from_boundary_offset


def make_loop(rng, n=128, modes=6, amp=0.12):
    """Random smooth simple closed curve: radial Fourier wobble on a circle.

    Amplitudes decay like 1/k and sum below 1, so the radius stays positive
    and the curve is star-shaped (hence simple), then uniformly resampled.
    """
    t = np.linspace(0.0, 2.0 * math.pi, 4 * n, endpoint=False)
    r = np.ones_like(t)
    for k in range(2, 2 + modes):
        r += amp / k * (
            rng.uniform(-1.0, 1.0) * np.cos(k * t)
            + rng.uniform(-1.0, 1.0) * np.sin(k * t)
        )
    pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
    return resample_uniform(from_points(pts), n)


def make_loop_in_unit_disk(rng, n=128, modes=6, amp=0.12):
    """Same wobbly loop, rescaled to fit strictly inside the unit disk."""
    crv = make_loop(rng, n=n, modes=modes, amp=amp)
    pts = crv.points
    rmax = float(np.linalg.norm(pts, axis=1).max())
    return from_points(pts * (0.999 / rmax))


def _timed_solve(init, domain, config):
    t0 = time.perf_counter()
    report = minimize(init, domain, config)
    return report, time.perf_counter() - t0


@pytest.fixture(scope="session")
def disk_run():
    domain = disk(0.0, 0.0, 1.0)
    config = SolverConfig(N=512, seed=0)
    init = circle((0.0, 0.0), 0.3, 512)
    report, elapsed = _timed_solve(init, domain, config)
    return {
        "domain": domain,
        "init": init,
        "config": config,
        "report": report,
        "elapsed": elapsed,
    }


@pytest.fixture(scope="session")
def stadium_run():
    domain = stadium(2.0, 1.0)
    config = SolverConfig(N=512, seed=0)
    init = seed_from_boundary_offset(domain, 0.2, 512)
    report, elapsed = _timed_solve(init, domain, config)
    return {
        "domain": domain,
        "init": init,
        "config": config,
        "report": report,
        "elapsed": elapsed,
    }


@pytest.fixture(scope="session")
def ellipse_run():
    domain = ellipse_domain(2.0, 1.0)
    config = SolverConfig(N=512, seed=0)
    init = circle((0.0, 0.0), 0.8, 512)
    report, elapsed = _timed_solve(init, domain, config)
    return {
        "domain": domain,
        "init": init,
        "config": config,
        "report": report,
        "elapsed": elapsed,
    }


@pytest.fixture(scope="session")
def drops_run():
    layout = two_drops_layout(0.05, 2.0, 1.5 * math.pi, 1.0)
    config = SolverConfig(N=1024, seed=0)
    init = layout.traversal_loop(1024)
    report, elapsed = _timed_solve(init, layout.domain, config)
    return {
        "layout": layout,
        "domain": layout.domain,
        "init": init,
        "config": config,
        "report": report,
        "elapsed": elapsed,
    }
