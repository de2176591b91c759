"""Penalty-continuation descent for bending energy under confinement.

The constrained problem (curve inside a domain) is relaxed to a sequence of
unconstrained ones: objective = bending energy + mu * sum of squared wall
violations weighted by dual edge lengths, with mu growing geometrically.
Each stage runs a truncated-Newton descent with Armijo backtracking: the
search direction solves a model Hessian (circulant fourth-difference
bending stiffness plus the penalty's diagonal along wall normals) by a few
preconditioned conjugate-gradient iterations, which keeps the iteration
count mesh-independent and handles the stiffness gap between wall-pinned
and free stretches of the curve.

The descent works on the turning-angle form of the bending energy, which
depends on the polygon's shape alone; the second-difference form used for
reporting agrees with it in value but its global length normalization adds
a distributed tangential force whose equilibria are not discrete
elasticae. Reported energies and traces always use the second-difference
formula.

Steps move vertices along curve normals only, and every trial step is
scored after uniform resampling. Tangential motion cannot change the
shape, but it can game the discrete energy by crowding vertices; normal
motion can game it too, by rippling vertices to stretch the mesh under
sharp turns. Judging trials by their resampled shape removes both
loopholes at once. Convergence is likewise judged on
the constrained problem's own terms: the residual keeps the normal gradient
on free vertices and the unbalanced away-from-wall pull on contact
vertices, while wall-supported components and tangential (reparametrizing)
components don't count. A projection cleanup runs at the end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .contour import zero_contours
from .curve import (
    MIN_VERTICES,
    ClosedCurve,
    edge_spread,
    from_points,
    resample_uniform,
    scale_about,
    winding_number,
)
from .domain import DomainSpec, characteristic_scale, project_points
from .energy import _require_uniform, _second_difference
from .errors import Infeasible, InvalidParameters, PointOnCurve


class Termination(str, Enum):
    Converged = "Converged"
    MaxIters = "MaxIters"
    LineSearchStall = "LineSearchStall"


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for minimize(). Defaults are sized for N <= 1024 desk runs.

    grad_tol, constraint_tol and initial_step default to None, meaning:
    1e-6 * initial bending energy, 1e-4 * domain scale, and 1e-2 * domain
    scale (largest first trial displacement) respectively.
    """

    mu0: float = 10.0
    mu_growth: float = 10.0
    outer_loops: int = 6
    max_inner_iters: int = 2000
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    initial_step: float | None = None
    grad_tol: float | None = None
    constraint_tol: float | None = None
    resample_every: int = 25
    N: int = 512
    seed: int = 0

    def __post_init__(self):
        def positive(name):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
                raise InvalidParameters(f"{name} must be positive, got {val!r}")

        for name in ("mu0", "mu_growth", "outer_loops", "max_inner_iters"):
            positive(name)
        for name in ("initial_step", "grad_tol", "constraint_tol"):
            val = getattr(self, name)
            if val is not None and not (math.isfinite(val) and val > 0):
                raise InvalidParameters(f"{name} must be positive or None, got {val!r}")
        if not (0.0 < self.armijo_c < 1.0):
            raise InvalidParameters(f"armijo_c must lie in (0, 1), got {self.armijo_c}")
        if not (0.0 < self.backtrack < 1.0):
            raise InvalidParameters(f"backtrack must lie in (0, 1), got {self.backtrack}")
        if self.mu_growth < 1.0:
            raise InvalidParameters("mu_growth must be >= 1")
        if int(self.resample_every) < 1:
            raise InvalidParameters("resample_every must be >= 1")
        if int(self.N) < MIN_VERTICES:
            raise InvalidParameters(f"N must be >= {MIN_VERTICES}")


@dataclass(frozen=True)
class SolveReport:
    final_curve: ClosedCurve
    energy_trace: tuple  # (iter, bending, penalty, violation) per accepted step
    termination: Termination
    iters: int
    trace_rows: tuple  # (iter, mu, bending, penalty, violation, step)
    objective_trace: tuple  # (iter, mu, descent objective) per accepted step
    final_energy: float
    final_violation: float


def _objective(pts: np.ndarray, domain: DomainSpec, mu: float, shift=None):
    n = pts.shape[0]
    edges = np.roll(pts, -1, axis=0) - pts
    ell = np.linalg.norm(edges, axis=1)
    total = float(ell.sum())
    d = _second_difference(pts)
    w = n**3 * float(np.einsum("ij,ij->", d, d)) / total**3
    vals = domain.values(pts)
    v = np.maximum(vals if shift is None else vals + shift, 0.0)
    dual = 0.5 * (ell + np.roll(ell, 1))
    pen = mu * float(v @ (v * dual))
    return w + pen, w, pen, max(0.0, float(vals.max()))


def _resample_weights(pts: np.ndarray, weights: np.ndarray, n: int) -> np.ndarray:
    """Carry per-vertex weights over to the uniform arc-length grid.

    Matches resample_uniform's convention: vertex 0 anchored, targets at
    j*L/n along the polygon. Linear interpolation is plenty — the weights
    are multiplier estimates, not part of the geometry.
    """
    ell = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(ell)])
    targets = np.arange(n) * (cum[-1] / n)
    return np.interp(targets, cum, np.append(weights, weights[0]))


def _uniform_pts(pts: np.ndarray, n: int) -> np.ndarray:
    """Equal-arclength resampling on a raw point array, vertex 0 anchored.

    Same fixed-point iteration as curve.resample_uniform, minus the curve
    validation, so it is safe on rough line-search trial polygons (folded,
    or with a collapsed edge).
    """
    for _ in range(64):
        seg = np.roll(pts, -1, axis=0) - pts
        seg_len = np.linalg.norm(seg, axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg_len)])
        total = cum[-1]
        targets = np.arange(n) * (total / n)
        idx = np.clip(np.searchsorted(cum, targets, side="right") - 1, 0, n - 1)
        denom = np.where(seg_len[idx] > 0.0, seg_len[idx], 1.0)
        frac = (targets - cum[idx]) / denom
        pts = pts[idx] + frac[:, None] * seg[idx]
        new_len = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        err = np.abs(np.cumsum(new_len) - np.arange(1, n + 1) * (new_len.sum() / n))
        if float(err.max()) <= 1e-12 * float(new_len.sum()):
            break
    return pts


_SHARP_TURN_COS = math.cos(0.5)


def _shape_objective(pts: np.ndarray, domain: DomainSpec, mu: float, shift: np.ndarray):
    """Penalized turning-angle energy, scored through a resample when sharp.

    Near a sharp turn a step can ripple vertices to stretch the dual edges
    under the turn and lower the raw objective without improving the curve
    at all; the payoff scales like the squared turning angle, so it only
    exists where turns are large. Such trials are scored by the energy of
    their uniformly resampled shape, which makes mesh games worthless (the
    multiplier offsets ride along to the new grid by arc length). Smooth
    trials are scored as-is: the resample's small reparametrizing pull
    would otherwise drown the tiny descent steps of the end game.
    """
    n = pts.shape[0]
    edges = np.roll(pts, -1, axis=0) - pts
    ell = np.linalg.norm(edges, axis=1)
    smin = float(ell.min())
    sharp = smin <= 0.0
    if not sharp:
        unit = edges / ell[:, None]
        dots = np.einsum("ij,ij->i", np.roll(unit, 1, axis=0), unit)
        sharp = bool(dots.min() < _SHARP_TURN_COS)
    if sharp:
        rpts = _uniform_pts(pts, n)
        rshift = _resample_weights(pts, shift, n) if shift.any() else shift
    else:
        rpts, rshift = pts, shift
    f, _, pen, viol = _objective_ta(rpts, domain, mu, rshift)
    return f, pen, viol, rpts, rshift


def _perp(v: np.ndarray) -> np.ndarray:
    return np.stack([-v[:, 1], v[:, 0]], axis=1)


def _turning_pieces(pts: np.ndarray):
    edges = np.roll(pts, -1, axis=0) - pts
    ell = np.linalg.norm(edges, axis=1)
    unit = edges / ell[:, None]
    prev_u = np.roll(unit, 1, axis=0)
    cross = prev_u[:, 0] * unit[:, 1] - prev_u[:, 1] * unit[:, 0]
    dot = np.einsum("ij,ij->i", prev_u, unit)
    theta = np.arctan2(cross, dot)
    dual = 0.5 * (ell + np.roll(ell, 1))
    return edges, ell, unit, theta, dual


def _objective_ta(pts: np.ndarray, domain: DomainSpec, mu: float, shift=None):
    """Turning-angle bending energy plus the wall penalty.

    This is the objective the descent actually works on: sum of squared
    turning angles over dual edge lengths. It agrees with the
    second-difference energy to O(h^2) on uniform meshes but is a function
    of the polygon's shape alone, so its critical points are discrete
    elasticae — the second-difference form carries an extra global length
    force (its L^3 normalization), and descending on it equilibrates to
    curves that fail the elastica equation on free arcs.
    """
    _, ell, _, theta, dual = _turning_pieces(pts)
    w_ta = float(theta @ (theta / dual))
    vals = domain.values(pts)
    v = np.maximum(vals if shift is None else vals + shift, 0.0)
    pen = mu * float(v @ (v * dual))
    return w_ta + pen, w_ta, pen, max(0.0, float(vals.max()))


def _turning_state(pts: np.ndarray, domain: DomainSpec, mu: float, shift=None):
    """Value pieces plus the exact gradient of the turning-angle objective.

    shift holds per-vertex multiplier offsets (lambda / 2mu): the penalty
    sees the violation as vals + shift, which lets contact forces persist
    at feasible points so the reported violation can reach zero without
    sending mu to infinity. The reported violation is always against the
    true walls.
    """
    n = pts.shape[0]
    edges, ell, unit, theta, dual = _turning_pieces(pts)
    total = float(ell.sum())
    w_ta = float(theta @ (theta / dual))

    # theta_j sits between edges e_{j-1} and e_j; its derivatives are the
    # rotated edge directions over the edge lengths
    p_edge = _perp(edges) / (ell * ell)[:, None]
    q_edge = np.roll(p_edge, 1, axis=0)
    coef = (2.0 * theta / dual)[:, None]
    cp = coef * p_edge
    cq = coef * q_edge
    g = np.roll(cp, 1, axis=0) - cp - cq + np.roll(cq, -1, axis=0)
    # the dual lengths under the 1/dual weights move with the vertices
    m = theta * theta / (dual * dual)
    q = (0.5 * (m + np.roll(m, -1)))[:, None] * unit
    g += q - np.roll(q, 1, axis=0)

    vals, sgrads = domain.evaluate(pts)
    v = np.maximum(vals if shift is None else vals + shift, 0.0)
    pen = mu * float(v @ (v * dual))
    g = g + (2.0 * mu) * (v * dual)[:, None] * sgrads
    v2 = v * v
    c = 0.5 * (v2 + np.roll(v2, -1))
    g = g + mu * (np.roll(unit, 1, axis=0) * np.roll(c, 1)[:, None] - unit * c[:, None])
    frac = float(np.count_nonzero(v > 0)) / n
    active = v > 0.0
    return g, w_ta, pen, max(0.0, float(vals.max())), total, frac, vals, sgrads, active


def _normals(pts: np.ndarray) -> np.ndarray:
    """Unit curve normals (tangents from central differences, rotated 90°)."""
    t = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    nrm = np.linalg.norm(t, axis=1)
    nrm[nrm == 0.0] = 1.0
    t = t / nrm[:, None]
    return np.stack([-t[:, 1], t[:, 0]], axis=1)


def _stationarity(g, normals, vals, sgrads, band: float) -> float:
    """First-order residual of the confined minimization problem.

    Tangential gradient components are pure reparametrization (the
    resampler owns the parametrization) and wall-side normal components at
    contact vertices are balanced by the wall reaction, so neither counts.
    What remains — the normal gradient on free vertices, plus any normal
    pull away from the wall at contact vertices — must vanish at a
    constrained minimizer.
    """
    a = np.einsum("ij,ij->i", g, normals)
    snorm = np.linalg.norm(sgrads, axis=1)
    snorm[snorm == 0.0] = 1.0
    cos = np.einsum("ij,ij->i", normals, sgrads / snorm[:, None])
    rho = np.abs(a)
    contact = vals >= -band
    rho[contact] = np.maximum(0.0, (a * cos)[contact])
    return float(rho.max())


def _spectral_symbol(n: int, total: float, mu: float, frac: float):
    """Fourier symbol of the bending-stiffness model, and its penalty-shifted
    version used as a preconditioner / steepest-descent metric."""
    k = np.arange(n // 2 + 1)
    lam = (32.0 * n**3 / total**3) * np.sin(np.pi * k / n) ** 4 + 16.0 * math.pi**4 / (
        total**3 * n
    )
    return lam, lam + 2.0 * mu * (total / n) * frac


def _spectral_inverse(g: np.ndarray, total: float, mu: float, frac: float) -> np.ndarray:
    """Gradient divided by the shifted stiffness symbol, mode by mode."""
    n = g.shape[0]
    _, m = _spectral_symbol(n, total, mu, frac)
    return np.fft.irfft(np.fft.rfft(g, axis=0) / m[:, None], n=n, axis=0)


def _solve_direction(g, pts, total, mu, frac, active, sgrads) -> np.ndarray:
    """Approximate Newton direction for the penalized objective.

    Model Hessian = circulant fourth-difference bending stiffness (symbol
    32 (n^3/L^3) sin^4(pi k/n), plus a small floor for the zero mode) plus
    the penalty's diagonal, which acts along the wall normal on violating
    vertices only. The system is solved by conjugate gradients,
    preconditioned with the circulant part shifted by the penalty's mean.
    Truncating CG early still yields a descent direction — and the
    truncation is deliberately mild, because fully resolving directions the
    model thinks are soft walks into constraint-activation kinks the model
    cannot see.
    """
    n = g.shape[0]
    lam, m = _spectral_symbol(n, total, mu, frac)
    edges = np.roll(pts, -1, axis=0) - pts
    ell = np.linalg.norm(edges, axis=1)
    dual = 0.5 * (ell + np.roll(ell, 1))
    dvec = np.where(active, 2.0 * mu * dual, 0.0)
    snorm = np.linalg.norm(sgrads, axis=1)
    snorm[snorm == 0.0] = 1.0
    shat = sgrads / snorm[:, None]

    def apply_m_inv(r):
        return np.fft.irfft(np.fft.rfft(r, axis=0) / m[:, None], n=n, axis=0)

    def apply_h(x):
        cx = np.fft.irfft(np.fft.rfft(x, axis=0) * lam[:, None], n=n, axis=0)
        w = np.einsum("ij,ij->i", shat, x) * dvec
        return cx + w[:, None] * shat

    x = np.zeros_like(g)
    r = g.copy()
    z = apply_m_inv(r)
    p = z.copy()
    rz = float(np.einsum("ij,ij->", r, z))
    rz0 = rz
    for _ in range(200):
        hp = apply_h(p)
        php = float(np.einsum("ij,ij->", p, hp))
        if php <= 0.0:
            break
        alpha = rz / php
        x += alpha * p
        r -= alpha * hp
        z = apply_m_inv(r)
        rz_new = float(np.einsum("ij,ij->", r, z))
        if rz_new <= 1e-4 * rz0:
            break
        p = z + (rz_new / rz) * p
        rz = rz_new
    if float(np.einsum("ij,ij->", g, x)) <= 0.0:
        return apply_m_inv(g)
    return x


def _project_violating(pts: np.ndarray, domain: DomainSpec) -> np.ndarray:
    vals = domain.values(pts)
    mask = vals > 0
    if not np.any(mask):
        return pts
    out = pts.copy()
    out[mask] = project_points(domain, pts[mask])
    return out


def _cleanup(pts: np.ndarray, domain: DomainSpec, n: int) -> ClosedCurve:
    pts = _project_violating(pts, domain)
    curve = resample_uniform(from_points(pts), n)
    pts = _project_violating(curve.points, domain)
    curve = from_points(pts)
    if edge_spread(curve) > 5e-4:
        curve = resample_uniform(curve, n)
    return curve


def penalized_energy(curve: ClosedCurve, domain: DomainSpec, mu: float) -> float:
    """Bending energy plus mu-weighted squared wall violations."""
    if not (math.isfinite(mu) and mu >= 0.0):
        raise InvalidParameters(f"mu must be a finite nonnegative number, got {mu!r}")
    _require_uniform(curve, "penalized energy")
    f, _, _, _ = _objective(curve.points, domain, float(mu))
    return f


def minimize(
    curve0: ClosedCurve, domain: DomainSpec, config: SolverConfig | None = None
) -> SolveReport:
    """Find a local minimizer of the bending energy confined to the domain.

    Deterministic given identical inputs. Returns the best curve found even
    on MaxIters/LineSearchStall terminations.
    """
    cfg = config if config is not None else SolverConfig()
    n = int(cfg.N)
    curve = resample_uniform(curve0, n)
    pts = curve.points.copy()
    scale = characteristic_scale(domain)
    if float(domain.values(pts).min()) > 0.1 * scale:
        raise Infeasible("initial curve lies entirely far outside the domain")

    _, w0, pen0, viol0 = _objective(pts, domain, cfg.mu0)
    grad_tol = cfg.grad_tol if cfg.grad_tol is not None else 1e-6 * w0
    constraint_tol = (
        cfg.constraint_tol if cfg.constraint_tol is not None else 1e-4 * scale
    )
    step_cap0 = cfg.initial_step if cfg.initial_step is not None else 1e-2 * scale

    trace = [(0, w0, pen0, viol0)]
    rows = [(0, cfg.mu0, w0, pen0, viol0, 0.0)]
    # the reported bending energy is free to rise while the wall pushes the
    # curve around, so the trace above is not a descent record; this one is:
    # the line-searched objective value at every accepted step
    obj_rows = []
    it = 0
    mu = cfg.mu0
    done = False
    last_stalled = False
    shift = np.zeros(n)
    for outer in range(int(cfg.outer_loops)):
        mu = cfg.mu0 * cfg.mu_growth**outer
        last_stalled = False
        for inner in range(int(cfg.max_inner_iters)):
            # accepted steps land on a freshly resampled mesh already; this
            # scheduled pass is a safety net for any drift that slips
            # through, skipped while spacing is still clean so it cannot
            # perturb a settled equilibrium
            if (
                inner
                and inner % int(cfg.resample_every) == 0
                and edge_spread(from_points(pts)) > 2e-4
            ):
                shift = _resample_weights(pts, shift, n)
                pts = resample_uniform(from_points(pts), n).points.copy()
            g, w_ta, pen, viol, total, frac, vals, sgrads, active = _turning_state(
                pts, domain, mu, shift
            )
            normals = _normals(pts)
            rho = _stationarity(g, normals, vals, sgrads, constraint_tol)
            if rho <= grad_tol:
                if viol <= constraint_tol:
                    done = True
                break
            # descend on the shape only: tangential motion just slides the
            # parametrization, which the resampler resets anyway
            gnormal = np.einsum("ij,ij->i", g, normals)[:, None] * normals
            f = w_ta + pen
            mean_edge = total / n
            accepted = False
            # Newton-model direction first; if its line search dies, retry
            # with the preconditioned gradient, then the raw gradient. The
            # model can be blind to constraint-activation kinks, and near a
            # sharp corner the resampled scoring bends the landscape enough
            # that only the raw gradient reliably points downhill
            for attempt in range(3):
                if attempt == 0:
                    dirn = _solve_direction(
                        gnormal, pts, total, mu, frac, active, sgrads
                    )
                elif attempt == 1:
                    dirn = _spectral_inverse(gnormal, total, mu, frac)
                else:
                    dirn = gnormal
                dirn = np.einsum("ij,ij->i", dirn, normals)[:, None] * normals
                slope = float(np.einsum("ij,ij->", gnormal, dirn))
                if slope <= 0.0:
                    continue
                dmax = float(np.max(np.linalg.norm(dirn, axis=1)))
                # unit step is the model-optimal choice; the cap is a trust
                # region against early steps large enough to fold the polygon
                s = min(1.0, min(step_cap0, 0.5 * mean_edge) / dmax)
                for _ in range(60):
                    if s * dmax < 1e-15 * total:
                        break
                    trial = pts - s * dirn
                    f_t, pen_t, viol_t, rpts, rshift = _shape_objective(
                        trial, domain, mu, shift
                    )
                    if f_t <= f - cfg.armijo_c * s * slope:
                        accepted = True
                        break
                    s *= cfg.backtrack
                if accepted:
                    break
            if not accepted:
                last_stalled = True
                break
            if attempt != 2:
                # model steps can crawl when the energy is dominated by one
                # sharp feature the model spreads thin (a corner being
                # rounded); one full-cap raw-gradient probe per step keeps
                # that from turning into hundreds of tiny iterations
                gmax = float(np.max(np.linalg.norm(gnormal, axis=1)))
                s_g = min(step_cap0, 0.5 * mean_edge) / gmax
                f_g, pen_g, viol_g, rpts_g, rshift_g = _shape_objective(
                    pts - s_g * gnormal, domain, mu, shift
                )
                if f_g < f_t:
                    f_t, pen_t, viol_t, rpts, rshift, s = (
                        f_g,
                        pen_g,
                        viol_g,
                        rpts_g,
                        rshift_g,
                        s_g,
                    )
            assert f_t <= f + 1e-12 * max(1.0, abs(f))
            pts = rpts
            shift = rshift
            it += 1
            w_t = _objective(pts, domain, 0.0)[1]
            trace.append((it, w_t, pen_t, viol_t))
            rows.append((it, mu, w_t, pen_t, viol_t, s))
            obj_rows.append((it, mu, f_t))
        if done:
            break
        # multiplier estimate: keeps contact forces alive at the next stage
        # so the equilibrium violation shrinks faster than 1/mu
        shift = np.maximum(0.0, shift + vals) / cfg.mu_growth

    g, w_ta, pen, viol, total, frac, vals, sgrads, active = _turning_state(
        pts, domain, mu, shift
    )
    rho = _stationarity(g, _normals(pts), vals, sgrads, constraint_tol)
    if rho <= grad_tol and viol <= constraint_tol:
        termination = Termination.Converged
    elif last_stalled:
        termination = Termination.LineSearchStall
    else:
        termination = Termination.MaxIters

    final = _cleanup(pts, domain, n)
    final_vals = domain.values(final.points)
    final_violation = max(0.0, float(final_vals.max()))
    _, w_final, _, _ = _objective(final.points, domain, 0.0)

    if termination is Termination.Converged:
        contact = np.abs(final_vals) <= 1e-3 * scale
        cpts = final.points[contact]
        spread = float(np.ptp(cpts, axis=0).max()) if len(cpts) else 0.0
        if len(cpts) < 2 or spread <= 1e-6 * scale:
            warnings.warn(
                "converged curve touches the wall at fewer than two distinct "
                "points; a true minimizer has at least two",
                RuntimeWarning,
                stacklevel=2,
            )

    return SolveReport(
        final_curve=final,
        energy_trace=tuple(trace),
        termination=termination,
        iters=it,
        trace_rows=tuple(rows),
        objective_trace=tuple(obj_rows),
        final_energy=w_final,
        final_violation=final_violation,
    )


def inflate_to_saturation(
    curve: ClosedCurve, domain: DomainSpec, center=(0.0, 0.0)
) -> ClosedCurve:
    """Dilate the curve about center as far as the domain allows.

    Scaling down bending energy is the cheapest move available: energy
    scales as 1/factor, so the saturated dilation never costs energy.
    Returns the input curve unchanged when it already touches the wall.
    """
    center = np.asarray(center, dtype=float)
    if center.shape != (2,) or not np.all(np.isfinite(center)):
        raise InvalidParameters("center must be a finite 2-vector")
    if float(domain.values(curve.points).max()) > 0.0:
        raise Infeasible("curve must start inside the domain")
    try:
        if winding_number(curve, center) == 0:
            raise Infeasible("center must be enclosed by the curve")
    except PointOnCurve:
        raise Infeasible("center lies on the curve") from None

    rel = curve.points - center

    def feasible(lam: float) -> bool:
        return float(domain.values(center + lam * rel).max()) <= 0.0

    if not feasible(1.0 + 1e-12):
        return curve
    lo, hi = 1.0, 2.0
    for _ in range(60):
        if not feasible(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise Infeasible("dilation is unbounded; domain has no wall this way")
    while hi - lo > 1e-9 * lo:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    if lo <= 1.0 + 1e-12:
        return curve
    return scale_about(curve, lo, center)


def seed_from_boundary_offset(
    domain: DomainSpec, offset: float, n: int = 512, resolution: int = 256
) -> ClosedCurve:
    """Initial curve from the level set {sdf = -offset}, resampled to n points.

    Picks the longest closed loop of the level set. Useful for corridor
    domains where no handwritten initializer exists.
    """
    if not (offset > 0 and math.isfinite(offset)):
        raise InvalidParameters(f"offset must be positive, got {offset!r}")
    if n < MIN_VERTICES:
        raise InvalidParameters(f"n must be >= {MIN_VERTICES}")
    if resolution < 16:
        raise InvalidParameters("resolution must be >= 16")
    box = domain.bounds()
    if box is None:
        raise Infeasible("domain must be bounded to seed from its wall")
    pad = 0.05 * max(box[2] - box[0], box[3] - box[1], 1e-9)
    xs = np.linspace(box[0] - pad, box[2] + pad, resolution)
    ys = np.linspace(box[1] - pad, box[3] + pad, resolution)
    gx, gy = np.meshgrid(xs, ys)
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)
    vals = np.empty(grid.shape[0])
    chunk = 8192
    for k in range(0, grid.shape[0], chunk):
        vals[k : k + chunk] = domain.values(grid[k : k + chunk])
    field = (vals + offset).reshape(resolution, resolution)
    loops = [pts for pts, closed in zero_contours(xs, ys, field) if closed]
    loops = [pts for pts in loops if pts.shape[0] >= MIN_VERTICES]
    if not loops:
        raise Infeasible(f"no closed loop at depth {offset} inside the domain")

    def loop_length(pts):
        return float(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1).sum())

    best = max(loops, key=loop_length)
    return resample_uniform(from_points(best), n)
