"""Optimal traversal of a fixed path: minimize the action over ramps p(t).

Two independent solvers are provided and must agree:

* ``arc_length_reparametrize`` inverts the cumulative metric arc length, the
  analytic optimum (constant metric speed saturates the Cauchy-Schwarz step
  between the action and geometric bounds).
* ``optimize_ramp`` runs preconditioned projected gradient descent on the
  discretized control variables u_i = pdot_i >= 0 under the admissibility
  constraint sum_i u_i dt = 1, against the action of the tabulated
  cumulative arc length (squared speed per unit progress g(p) = (ds/dp)^2
  is exposed by the same table).

The descent steps live in the constraint tangent, so the fixed point is the
constant-speed schedule; modeling the action through arc increments rather
than midpoint samples of g keeps that fixed point unique even across the
channel path's square-root cusps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import DiscretizedPath, RampProfile
from .errors import InadmissibleInitial, NonConvergence, ZeroLengthPath
from .metrics import MetricKind, offset_distances, segment_lengths

PathGenerator = Callable[[np.ndarray], np.ndarray]


def arc_length_reparametrize(
    path: DiscretizedPath, metric: MetricKind, tau: float, n: int
) -> RampProfile:
    """Ramp that traverses the given path at constant metric speed.

    The input path is read as parametrized by its own normalized time
    u in [0, 1] (for a channel path sampled uniformly in the progress
    parameter, u is that parameter).  The returned schedule p(t) satisfies
    s(p(t)) = (t / tau) * ell, with s the cumulative arc length.  The table
    is inverted with monotone cubics through the sample index: where the
    path has a square-root cusp in its parameter, p(s) is locally quadratic
    and direct linear interpolation would leave the tail cells with
    percent-level speed ripple however finely the table is sampled.

    Constant speed to a target spread requires the input to resolve any
    parameter cusp; sampling the input on cosine_progress_grid with ~16x
    the output resolution gives spreads below 1e-4 at n = 2000.
    """
    if n < 100:
        raise ValueError("need n >= 100 control segments")
    seg = segment_lengths(path, metric)
    total = float(seg.sum())
    if total <= 1e-15:
        raise ZeroLengthPath("cannot reparametrize a constant path")
    s_cum = np.concatenate([[0.0], np.cumsum(seg)])
    u = (path.times - path.times[0]) / (path.times[-1] - path.times[0])
    keep = np.concatenate([[True], np.diff(s_cum) > 0.0])  # drop stalled samples
    s_knots, u_knots = s_cum[keep], u[keep]
    # invert along the sample index, then map back through the sample
    # parameters: both legs are smooth whenever the input sampling resolves
    # the path's cusps, while u(s) itself has unbounded curvature there
    idx = np.arange(s_knots.size, dtype=float)
    s_to_idx = _MonotoneCubic(s_knots, idx)
    idx_to_u = _MonotoneCubic(idx, u_knots)
    targets = np.linspace(0.0, total, n + 1)
    p = np.clip(idx_to_u.value(s_to_idx.value(targets)), 0.0, 1.0)
    p[0], p[-1] = 0.0, 1.0
    times = np.linspace(0.0, tau, n + 1)
    return RampProfile(times=times, p_values=np.maximum.accumulate(p))


def _monotone_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fritsch-Carlson knot derivatives for shape-preserving cubic Hermite."""
    h = np.diff(x)
    delta = np.diff(y) / h
    d = np.zeros_like(y)
    d[0], d[-1] = delta[0], delta[-1]
    prod = delta[:-1] * delta[1:]
    harmonic = np.zeros_like(prod)
    nonzero = prod > 0.0
    harmonic[nonzero] = 2.0 * prod[nonzero] / (delta[:-1] + delta[1:])[nonzero]
    d[1:-1] = harmonic
    return d


class _MonotoneCubic:
    """Shape-preserving cubic Hermite through (x, y), linear outside."""

    def __init__(self, x: np.ndarray, y: np.ndarray):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.d = _monotone_slopes(self.x, self.y)

    def _locate(self, p: np.ndarray):
        idx = np.clip(np.searchsorted(self.x, p) - 1, 0, self.x.size - 2)
        h = self.x[idx + 1] - self.x[idx]
        t = np.clip((p - self.x[idx]) / h, 0.0, 1.0)
        return idx, h, t

    def value(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        idx, h, t = self._locate(p)
        y0, y1 = self.y[idx], self.y[idx + 1]
        d0, d1 = self.d[idx], self.d[idx + 1]
        h00 = (1.0 + 2.0 * t) * (1.0 - t) ** 2
        h10 = t * (1.0 - t) ** 2
        h01 = t * t * (3.0 - 2.0 * t)
        h11 = t * t * (t - 1.0)
        inner = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
        lo, hi = self.x[0], self.x[-1]
        below = self.y[0] + (p - lo) * self.d[0]
        above = self.y[-1] + (p - hi) * self.d[-1]
        return np.where(p < lo, below, np.where(p > hi, above, inner))

    def derivative(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        idx, h, t = self._locate(p)
        y0, y1 = self.y[idx], self.y[idx + 1]
        d0, d1 = self.d[idx], self.d[idx + 1]
        dh00 = 6.0 * t * (t - 1.0)
        dh10 = (1.0 - t) * (1.0 - 3.0 * t)
        dh01 = -dh00
        dh11 = t * (3.0 * t - 2.0)
        inner = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
        lo, hi = self.x[0], self.x[-1]
        outer = np.where(p < lo, self.d[0], self.d[-1])
        outside = (p < lo) | (p > hi)
        return np.where(outside, outer, inner)


@dataclass(frozen=True)
class TraversalTable:
    """Cumulative metric arc length s(p) of a path, as a C1 monotone cubic.

    The squared speed per unit progress g(p) = s'(p)^2 follows by
    differentiating the interpolant.  Integrating the action through s
    rather than through midpoint samples of g keeps the model bounded and
    trap-free across the square-root cusps of the channel path, where g
    itself diverges and a midpoint-sampled model acquires spurious local
    minima.
    """

    spline: _MonotoneCubic
    total_length: float

    def s_at(self, p: np.ndarray) -> np.ndarray:
        return self.spline.value(p)

    def ds_at(self, p: np.ndarray) -> np.ndarray:
        return np.clip(self.spline.derivative(p), 0.0, None)

    def g_at(self, p: np.ndarray) -> np.ndarray:
        """Squared metric speed per unit progress, (ds/dp)^2."""
        return self.ds_at(p) ** 2


def cosine_progress_grid(n: int) -> np.ndarray:
    """Progress samples clustered at both endpoints, (1 - cos(pi k/n))/2.

    Channel paths carry square-root cusps in the progress parameter at p = 0
    and p = 1; cosine spacing equidistributes arc length across them where a
    uniform grid leaves the whole cusp inside one cell.
    """
    return 0.5 * (1.0 - np.cos(np.pi * np.linspace(0.0, 1.0, n + 1)))


def tabulate_traversal(
    path_generator: PathGenerator, metric: MetricKind, n_tab: int
) -> TraversalTable:
    p_tab = cosine_progress_grid(n_tab)
    chords = offset_distances(path_generator(p_tab), metric, 1)
    s_cum = np.concatenate([[0.0], np.cumsum(chords)])
    return TraversalTable(spline=_MonotoneCubic(p_tab, s_cum), total_length=float(s_cum[-1]))


def _project(u: np.ndarray, dt: float) -> np.ndarray:
    """Clamp controls to u >= 0, then rescale onto sum u dt = 1."""
    u = np.maximum(u, 0.0)
    total = float(u.sum()) * dt
    if total <= 0.0:
        u = np.full_like(u, 1.0 / (u.size * dt))
        return u
    return u / total


def _model_action(table: TraversalTable, u: np.ndarray, dt: float) -> float:
    """Action of traversing arc increments S(p_{i+1}) - S(p_i) per cell."""
    p_edges = np.concatenate([[0.0], np.cumsum(u) * dt])
    ds = np.diff(table.s_at(p_edges))
    return float(np.sum(ds * ds) / dt)


def _model_gradient(
    table: TraversalTable, u: np.ndarray, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of the model action plus s'(p) at the cell midpoints.

    With s_m = S(p_m), the action depends on the edge p_m through the two
    adjacent increments, so d a / d p_m = (2/dt) S'(p_m)(ds_{m-1} - ds_m)
    (the final edge sees only ds_{N-1}); u_k moves every edge beyond k by
    dt, giving suffix sums.
    """
    p_edges = np.concatenate([[0.0], np.cumsum(u) * dt])
    ds = np.diff(table.s_at(p_edges))
    sprime = table.ds_at(p_edges)
    imbalance = np.empty(u.size, dtype=float)
    imbalance[:-1] = sprime[1:-1] * (ds[:-1] - ds[1:])  # edges 1..N-1
    imbalance[-1] = sprime[-1] * ds[-1]  # edge N
    grad = 2.0 * np.cumsum(imbalance[::-1])[::-1]
    p_mid = 0.5 * (p_edges[:-1] + p_edges[1:])
    return grad, table.ds_at(p_mid)


@dataclass(frozen=True)
class OptimizeResult:
    ramp: RampProfile
    history: np.ndarray
    iterations: int
    converged: bool


def _ramp_to_controls(ramp: RampProfile, tau: float, n: int) -> np.ndarray:
    times = np.linspace(0.0, tau, n + 1)
    p = np.interp(times / tau * ramp.tau, ramp.times, ramp.p_values)
    u = np.diff(p) / (tau / n)
    if np.any(u < -1e-12):
        raise InadmissibleInitial("initial ramp is decreasing")
    return u


def optimize_ramp(
    path_generator: PathGenerator,
    metric: MetricKind,
    tau: float,
    n: int,
    initial: RampProfile,
    *,
    max_iters: int = 100_000,
    tol: float = 1e-10,
    n_tab: int | None = None,
) -> OptimizeResult:
    """Projected gradient descent on the discretized controls pdot_i.

    Every iterate satisfies pdot_i >= 0 and sum_i pdot_i dt = 1 (clamp then
    rescale).  Iteration stops when the relative action decrease falls below
    tol or after max_iters steps; the per-iteration action history is
    nonincreasing by construction.  Raises NonConvergence (with the history
    attached) if the cap is hit while the action is still falling fast.
    """
    try:
        u = _ramp_to_controls(initial, tau, n)
    except InadmissibleInitial:
        raise
    except Exception as exc:  # bad grid, shape, ...
        raise InadmissibleInitial(str(exc)) from exc
    dt = tau / n
    u = _project(u, dt)
    table = tabulate_traversal(path_generator, metric, n_tab or 4 * n)
    if table.total_length <= 1e-15:
        raise ZeroLengthPath("cannot optimize traversal of a constant path")
    eta0 = 0.5  # damped-Newton fraction; backtracking halves on increase
    speed_scale = table.total_length  # s'(p) averages to this over [0, 1]

    action = _model_action(table, u, dt)
    history = [action]
    eta = eta0
    converged = False
    last_decrease = 0.0
    iterations = 0
    for iterations in range(1, max_iters + 1):
        grad, sprime_mid = _model_gradient(table, u, dt)
        # diagonal Newton scaling (model Hessian diag is ~2 s'(p)^2 dt);
        # without it the cusps in s' leave the shallow region crawling.  The
        # multiplier keeps the scaled step inside the constraint tangent:
        # the KKT point has a constant gradient over the active set, which
        # a raw-gradient step through the multiplicative rescale would
        # never reach.
        curvature = np.maximum(sprime_mid, 1e-9 * speed_scale) ** 2
        precond = 1.0 / (2.0 * curvature * dt)
        lam = float((precond * grad).sum() / precond.sum())
        direction = precond * (grad - lam)
        step = eta
        improved = False
        for _ in range(60):
            cand = _project(u - step * direction, dt)
            cand_action = _model_action(table, cand, dt)
            if cand_action < action:
                improved = True
                break
            step *= 0.5
        if not improved:
            converged = True
            break
        # remember the working scale, probe growth next round
        eta = min(step * 2.0, 1.0)
        last_decrease = (action - cand_action) / max(cand_action, 1e-300)
        u, action = cand, cand_action
        history.append(action)
        if last_decrease < tol:
            converged = True
            break
    hist = np.asarray(history)
    if not converged and last_decrease > 1e3 * tol:
        raise NonConvergence(
            f"action still decreasing ({last_decrease:.2e} rel) after {max_iters} iterations",
            history=hist,
        )
    p = np.concatenate([[0.0], np.cumsum(u) * dt])
    p[-1] = 1.0
    ramp = RampProfile(times=np.linspace(0.0, tau, n + 1), p_values=np.maximum.accumulate(p))
    return OptimizeResult(ramp=ramp, history=hist, iterations=iterations, converged=converged)
