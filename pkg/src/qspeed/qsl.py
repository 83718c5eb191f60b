"""Geometric and action quantum-speed-limit times for a discretized path.

For a path of duration tau with endpoint geodesic distance L, path length
ell and action a:

* geometric bound: tau_geom = L / (ell / tau) = L tau / ell  (<= tau),
* action bound:    tau_action = L^2 / a                      (<= tau_geom^2 / tau).

The geometric bound only sees the traversed set; the action bound is
sensitive to the instantaneous speed and reaches the geometric one exactly
when the speed is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

from .channels import DiscretizedPath
from .errors import EmptyInput, ZeroAction, ZeroLengthPath
from .metrics import (
    MetricKind,
    endpoint_distance,
    instantaneous_speed,
    path_action,
    path_length,
    sqrt_fq_integral,
)

TIE_TOL = 1e-9


@dataclass(frozen=True)
class QslReport:
    """Bundle of bound diagnostics for one (path, metric) pair.

    distance is the endpoint geodesic distance L, length the path length
    ell.  ratio_* are the bounds divided by the true duration, so a value of
    1 means saturation; delta = tau/tau_geom - 1 measures how far the path
    is from the metric's geodesic.  The sqrt_fq_* fields carry the
    alternative Fisher-information normalization of the QFI bound
    (L / integral sqrt(F_Q) dt) and are populated for the QFI metric only.
    """

    metric: MetricKind
    tau: float
    distance: float
    length: float
    tau_geom: float
    ratio_geom: float
    delta: float
    action: Optional[float] = None
    tau_action: Optional[float] = None
    ratio_action: Optional[float] = None
    sqrt_fq: Optional[float] = None
    tau_sqrt_fq: Optional[float] = None
    ratio_sqrt_fq: Optional[float] = None

    def to_record(self) -> dict[str, object]:
        """Flat key=value record with the conventional field names."""
        rec: dict[str, object] = {
            "metric": self.metric.value,
            "tau": self.tau,
            "L": self.distance,
            "ell": self.length,
            "tau_geom": self.tau_geom,
            "ratio_geom": self.ratio_geom,
            "delta": self.delta,
        }
        if self.action is not None:
            rec.update(
                action=self.action,
                tau_action=self.tau_action,
                ratio_action=self.ratio_action,
            )
        if self.sqrt_fq is not None:
            rec.update(
                sqrt_fq_integral=self.sqrt_fq,
                tau_sqrt_fq=self.tau_sqrt_fq,
                ratio_sqrt_fq=self.ratio_sqrt_fq,
            )
        return rec


def geometric_qsl(path: DiscretizedPath, metric: MetricKind) -> QslReport:
    """Geometric bound report (action fields left unset)."""
    tau = path.tau
    length = path_length(path, metric)
    if length <= 1e-15:
        raise ZeroLengthPath("path never leaves its initial state")
    distance = endpoint_distance(path.states[0], path.states[-1], metric)
    ratio = distance / length
    delta = length / distance - 1.0 if distance > 0.0 else math.inf
    return QslReport(
        metric=metric,
        tau=tau,
        distance=distance,
        length=length,
        tau_geom=ratio * tau,
        ratio_geom=ratio,
        delta=delta,
    )


def action_qsl(path: DiscretizedPath, metric: MetricKind) -> QslReport:
    """Full report: geometric bound plus the action bound."""
    report = geometric_qsl(path, metric)
    action = path_action(path, metric)
    if action <= 0.0:
        raise ZeroAction("action functional vanished")
    tau_action = report.distance**2 / action
    return replace(
        report,
        action=action,
        tau_action=tau_action,
        ratio_action=tau_action / report.tau,
    )


def build_report(path: DiscretizedPath, metric: MetricKind) -> QslReport:
    """action_qsl plus, for the QFI metric, the sqrt(F_Q)-integral variant."""
    report = action_qsl(path, metric)
    if metric is not MetricKind.QFI:
        return report
    integral = sqrt_fq_integral(path)
    tau_fq = report.distance / integral if integral > 0.0 else math.inf
    return replace(
        report,
        sqrt_fq=integral,
        tau_sqrt_fq=tau_fq,
        ratio_sqrt_fq=tau_fq / report.tau,
    )


class TightestPick(NamedTuple):
    metric: MetricKind
    tie: bool


_ORDER = {MetricKind.QFI: 0, MetricKind.WY: 1, MetricKind.TD: 2}


def tightest_metric(reports: Sequence[QslReport]) -> TightestPick:
    """Metric whose geometric bound is tightest (largest ratio_geom).

    Ties within 1e-9 are broken by the fixed order QFI < WY < TD and
    flagged.
    """
    if len(reports) < 2:
        raise EmptyInput("need at least two reports to compare")
    best = max(r.ratio_geom for r in reports)
    contenders = [r for r in reports if best - r.ratio_geom <= TIE_TOL]
    winner = min(contenders, key=lambda r: _ORDER[r.metric])
    return TightestPick(metric=winner.metric, tie=len(contenders) > 1)


def constant_speed_spread(path: DiscretizedPath, metric: MetricKind) -> float:
    """Relative spread of the speed profile (0 for constant speed)."""
    profile = instantaneous_speed(path, metric)
    v = profile.speeds
    mean = float(v.mean())
    if mean == 0.0:
        return 0.0
    return float((v.max() - v.min()) / mean)
