import numpy as np
import pytest

from qspeed.channels import DiscretizedPath, GadcParams, RampProfile, gadc_path, gadc_states
from qspeed.control import (
    _model_action,
    _model_gradient,
    _project,
    arc_length_reparametrize,
    cosine_progress_grid,
    optimize_ramp,
    tabulate_traversal,
)
from qspeed.errors import InadmissibleInitial, ZeroLengthPath
from qspeed.metrics import MetricKind
from qspeed.qsl import constant_speed_spread
from qspeed.states import pure_state_theta

PARAMS = GadcParams(0.5)


def channel_generator(theta):
    rho0 = pure_state_theta(theta)
    return lambda p: gadc_states(rho0, p, PARAMS.c)


def dense_path(gen, n=8000, tau=1.0):
    p = cosine_progress_grid(n)
    return DiscretizedPath(times=p * tau, states=gen(p))


def test_arc_length_on_constant_speed_path_is_identity():
    # straight line sampled uniformly already moves at constant speed
    gen = channel_generator(np.pi / 2)  # on-axis: trace-norm speed constant in p
    path = DiscretizedPath(times=np.linspace(0.0, 1.0, 2001), states=gen(np.linspace(0, 1, 2001)))
    ramp = arc_length_reparametrize(path, MetricKind.TD, 1.0, 400)
    assert np.max(np.abs(ramp.p_values - ramp.times)) < 1e-8


def test_arc_length_rejects_constant_path():
    rho = pure_state_theta(0.7)
    path = DiscretizedPath(np.linspace(0.0, 1.0, 101), np.repeat(rho[None], 101, axis=0))
    with pytest.raises(ZeroLengthPath):
        arc_length_reparametrize(path, MetricKind.TD, 1.0, 100)


@pytest.mark.parametrize("metric", list(MetricKind))
def test_arc_length_flattens_speed(metric):
    # input sampled ~16x finer than the output grid so the parameter cusps
    # at p=0 and p=1 are resolved below the target spread
    gen = channel_generator(np.pi / 3)
    ramp = arc_length_reparametrize(dense_path(gen, n=32000), metric, 1.0, 2000)
    path = gadc_path(pure_state_theta(np.pi / 3), ramp, PARAMS)
    assert constant_speed_spread(path, metric) < 1e-4


def test_arc_length_profile_above_diagonal():
    # trace-norm speed per unit progress grows toward p=1, so the optimal
    # schedule covers progress early
    gen = channel_generator(np.pi / 3)
    ramp = arc_length_reparametrize(dense_path(gen), MetricKind.TD, 1.0, 400)
    assert ramp.p_at(0.5) > 0.55


def test_arc_length_accelerates_through_relaxation_tail():
    # fed with the free-relaxation clock, the schedule must rush through
    # input time near the end where the state crawls
    path = gadc_path(pure_state_theta(np.pi / 2), RampProfile.exponential_clock(1.0, 4000), PARAMS)
    ramp = arc_length_reparametrize(path, MetricKind.TD, 1.0, 400)
    slopes = np.diff(ramp.p_values)
    assert np.all(np.diff(slopes) > -1e-12)
    assert slopes[-1] > 100.0 * slopes[0]


def test_project_enforces_constraints(rng):
    dt = 0.01
    u = _project(rng.normal(size=100), dt)
    assert np.all(u >= 0.0)
    assert np.sum(u) * dt == pytest.approx(1.0, abs=1e-12)


def test_model_gradient_matches_finite_differences(rng):
    gen = channel_generator(np.pi / 4)
    n = 50
    dt = 1.0 / n
    table = tabulate_traversal(gen, MetricKind.QFI, 4 * n)
    u = _project(rng.random(n) + 0.25, dt)
    grad, _ = _model_gradient(table, u, dt)
    for k in range(0, n, 7):
        eps = 1e-7
        up, um = u.copy(), u.copy()
        up[k] += eps
        um[k] -= eps
        fd = (_model_action(table, up, dt) - _model_action(table, um, dt)) / (2.0 * eps)
        assert grad[k] == pytest.approx(fd, rel=1e-5, abs=1e-9)


@pytest.mark.parametrize("metric", list(MetricKind))
@pytest.mark.parametrize("theta", [np.pi / 3, 0.3, 2.5])
def test_optimizer_reaches_arc_length_optimum(metric, theta):
    gen = channel_generator(theta)
    n = 400
    result = optimize_ramp(gen, metric, 1.0, n, RampProfile.uniform(1.0, n))
    table = tabulate_traversal(gen, metric, 4 * n)
    arc = arc_length_reparametrize(dense_path(gen, n=4 * n), metric, 1.0, n)
    a_arc = _model_action(table, np.diff(arc.p_values) * n, 1.0 / n)
    assert result.history[-1] == pytest.approx(a_arc, rel=1e-3)
    assert result.history[-1] == pytest.approx(table.total_length**2, rel=1e-4)


def test_optimizer_descent_history(rng):
    gen = channel_generator(1.0)
    result = optimize_ramp(gen, MetricKind.TD, 1.0, 200, RampProfile.power(1.0, 200, 2.0))
    assert np.all(np.diff(result.history) <= 0.0)
    assert result.converged


def test_optimizer_noop_from_arc_length_start():
    gen = channel_generator(np.pi / 3)
    n = 300
    arc = arc_length_reparametrize(dense_path(gen, n=4 * n), MetricKind.TD, 1.0, n)
    result = optimize_ramp(gen, MetricKind.TD, 1.0, n, arc)
    assert abs(result.history[-1] - result.history[0]) <= 1e-4 * result.history[0]


def test_optimizer_initial_guess_independence():
    gen = channel_generator(np.pi / 3)
    n = 300
    from_uniform = optimize_ramp(gen, MetricKind.WY, 1.0, n, RampProfile.uniform(1.0, n))
    from_cubic = optimize_ramp(gen, MetricKind.WY, 1.0, n, RampProfile.power(1.0, n, 3.0))
    assert from_uniform.history[-1] == pytest.approx(from_cubic.history[-1], rel=1e-3)


def test_optimizer_final_ramp_admissible():
    gen = channel_generator(2.0)
    n = 250
    result = optimize_ramp(gen, MetricKind.QFI, 1.0, n, RampProfile.uniform(1.0, n))
    ramp = result.ramp
    assert ramp.p_values[0] == 0.0 and ramp.p_values[-1] == 1.0
    assert np.all(np.diff(ramp.p_values) >= -1e-14)
    assert np.sum(np.diff(ramp.p_values)) == pytest.approx(1.0, abs=1e-12)


def test_optimizer_rejects_decreasing_initial():
    gen = channel_generator(1.0)
    bad = RampProfile.__new__(RampProfile)
    object.__setattr__(bad, "times", np.linspace(0.0, 1.0, 101))
    p = np.linspace(0.0, 1.0, 101)
    p[40] = 0.9  # locally decreasing afterwards
    object.__setattr__(bad, "p_values", p)
    with pytest.raises(InadmissibleInitial):
        optimize_ramp(gen, MetricKind.TD, 1.0, 100, bad)


def test_optimizer_rejects_constant_path():
    rho = np.diag([PARAMS.c_bar, PARAMS.c]).astype(complex)
    gen = lambda p: np.repeat(rho[None], len(p), axis=0)  # noqa: E731
    with pytest.raises(ZeroLengthPath):
        optimize_ramp(gen, MetricKind.TD, 1.0, 100, RampProfile.uniform(1.0, 100))


def test_optimizer_reports_nonconvergence_with_history():
    from qspeed.errors import NonConvergence

    gen = channel_generator(np.pi / 3)
    with pytest.raises(NonConvergence) as excinfo:
        optimize_ramp(gen, MetricKind.TD, 1.0, 200, RampProfile.uniform(1.0, 200), max_iters=2)
    assert excinfo.value.history is not None
    assert len(excinfo.value.history) >= 2
