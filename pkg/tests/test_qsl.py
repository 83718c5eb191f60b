import numpy as np
import pytest

from qspeed.channels import DiscretizedPath, GadcParams, RampProfile, gadc_path
from qspeed.errors import EmptyInput, ZeroLengthPath
from qspeed.geodesics import geodesic_path, td_geodesic
from qspeed.metrics import MetricKind
from qspeed.qsl import QslReport, action_qsl, build_report, geometric_qsl, tightest_metric
from qspeed.states import pure_state_theta

from conftest import random_ramp

PARAMS = GadcParams(0.5)
STEADY = np.diag([PARAMS.c_bar, PARAMS.c]).astype(complex)


def test_geometric_on_constant_path_raises(rng):
    rho = pure_state_theta(0.4)
    path = DiscretizedPath(np.linspace(0.0, 1.0, 10), np.repeat(rho[None], 10, axis=0))
    with pytest.raises(ZeroLengthPath):
        geometric_qsl(path, MetricKind.TD)


@pytest.mark.parametrize("metric", list(MetricKind))
def test_geodesic_saturates_geometric_bound(metric):
    path = geodesic_path(metric, pure_state_theta(np.pi / 3), STEADY, RampProfile.uniform(1.0, 500))
    report = geometric_qsl(path, metric)
    assert report.ratio_geom == pytest.approx(1.0, abs=1e-6)
    assert report.delta == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("theta", [0.0, np.pi])
def test_channel_path_saturates_at_poles(theta):
    path = gadc_path(pure_state_theta(theta), RampProfile.exponential_clock(1.0, 2000), PARAMS)
    for metric in MetricKind:
        assert geometric_qsl(path, metric).ratio_geom == pytest.approx(1.0, abs=1e-4)


def test_interior_theta_ratios_below_one():
    path = gadc_path(pure_state_theta(np.pi / 3), RampProfile.uniform(1.0, 2000), PARAMS)
    for metric in MetricKind:
        report = geometric_qsl(path, metric)
        assert report.ratio_geom < 1.0 - 1e-5
        assert report.tau_geom < report.tau


def test_geodesic_constant_speed_full_saturation():
    # TD geodesic at uniform ramp moves at constant speed: both bounds tight
    path = td_geodesic(pure_state_theta(np.pi / 3), STEADY, RampProfile.uniform(1.0, 400))
    report = action_qsl(path, MetricKind.TD)
    assert report.ratio_geom == pytest.approx(1.0, abs=1e-9)
    assert report.ratio_action == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("metric", list(MetricKind))
def test_geodesic_arc_ramp_saturates_action_bound(metric):
    # each metric's own geodesic, traversed at constant metric speed
    from qspeed.control import arc_length_reparametrize

    rho0 = pure_state_theta(np.pi / 3)
    base = geodesic_path(metric, rho0, STEADY, RampProfile.uniform(1.0, 2000))
    ramp = arc_length_reparametrize(base, metric, 1.0, 2000)
    path = geodesic_path(metric, rho0, STEADY, ramp)
    report = action_qsl(path, metric)
    assert report.ratio_geom == pytest.approx(1.0, abs=1e-5)
    assert report.ratio_action == pytest.approx(1.0, abs=1e-5)


def test_constant_speed_nongeodesic_hits_cauchy_schwarz_equality():
    # any constant-speed traversal gives tau_action = tau_geom^2 / tau
    from qspeed.channels import DiscretizedPath, gadc_states
    from qspeed.control import arc_length_reparametrize, cosine_progress_grid

    rho0 = pure_state_theta(np.pi / 3)
    p_dense = cosine_progress_grid(16000)
    base = DiscretizedPath(times=p_dense, states=gadc_states(rho0, p_dense, PARAMS.c))
    ramp = arc_length_reparametrize(base, MetricKind.TD, 1.0, 1000)
    path = gadc_path(rho0, ramp, PARAMS)
    report = action_qsl(path, MetricKind.TD)
    assert report.tau_action == pytest.approx(report.tau_geom**2 / report.tau, rel=1e-6)


def test_nonconstant_speed_strictly_below():
    path = gadc_path(pure_state_theta(np.pi / 3), RampProfile.exponential_clock(1.0, 1000), PARAMS)
    report = action_qsl(path, MetricKind.TD)
    assert report.tau_action < report.tau_geom**2 / report.tau - 1e-3


@pytest.mark.parametrize("metric", list(MetricKind))
def test_chain_inequality_random_ramps(rng, metric):
    for _ in range(60):
        theta = rng.uniform(0.0, np.pi)
        ramp = random_ramp(rng, n=200)
        path = gadc_path(pure_state_theta(theta), ramp, PARAMS)
        report = action_qsl(path, metric)
        assert report.ratio_action <= report.ratio_geom**2 + 1e-9
        assert report.ratio_geom**2 <= 1.0 + 1e-9
        assert 0.0 < report.ratio_action


def test_monotone_improvement_under_arc_ramp(rng):
    from qspeed.control import arc_length_reparametrize

    rho0 = pure_state_theta(1.1)
    base = gadc_path(rho0, RampProfile.uniform(1.0, 2000), PARAMS)
    for metric in MetricKind:
        arc = arc_length_reparametrize(base, metric, 1.0, 500)
        optimized = action_qsl(gadc_path(rho0, arc, PARAMS), metric)
        for _ in range(5):
            ramp = random_ramp(rng, n=500)
            candidate = action_qsl(gadc_path(rho0, ramp, PARAMS), metric)
            assert optimized.tau_action >= candidate.tau_action - 1e-10


def test_tightest_metric_argmax():
    def rep(metric, ratio):
        return QslReport(
            metric=metric, tau=1.0, distance=ratio, length=1.0,
            tau_geom=ratio, ratio_geom=ratio, delta=1.0 / ratio - 1.0,
        )

    picks = [rep(MetricKind.QFI, 0.9), rep(MetricKind.WY, 0.8), rep(MetricKind.TD, 0.7)]
    assert tightest_metric(picks) == (MetricKind.QFI, False)


def test_tightest_metric_tie_flagged():
    path = gadc_path(pure_state_theta(0.0), RampProfile.exponential_clock(1.0, 500), PARAMS)
    reports = [geometric_qsl(path, m) for m in MetricKind]
    pick = tightest_metric(reports)
    assert pick.tie
    assert pick.metric is MetricKind.QFI  # fixed tie-break order


def test_tightest_metric_requires_two():
    with pytest.raises(EmptyInput):
        tightest_metric([])


def test_report_record_roundtrip():
    path = gadc_path(pure_state_theta(np.pi / 3), RampProfile.exponential_clock(1.0, 500), PARAMS)
    report = build_report(path, MetricKind.QFI)
    record = report.to_record()
    assert record["metric"] == "qfi"
    assert record["L"] == report.distance
    assert record["ell"] == report.length
    assert 0.0 < record["ratio_sqrt_fq"] < record["ratio_geom"]
    # the sqrt(F_Q) normalization sits at half the finite-difference bound
    assert record["ratio_sqrt_fq"] == pytest.approx(report.ratio_geom / 2.0, rel=5e-3)


def test_ratios_within_unit_interval(rng):
    for _ in range(20):
        theta = rng.uniform(0.0, np.pi)
        path = gadc_path(pure_state_theta(theta), random_ramp(rng, n=300), PARAMS)
        for metric in MetricKind:
            report = action_qsl(path, metric)
            assert 0.0 < report.ratio_geom <= 1.0 + 1e-9
            assert 0.0 < report.ratio_action <= 1.0 + 1e-9
