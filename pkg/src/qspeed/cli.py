"""Experiment harness: theta sweeps, Bloch-path dumps, ramp optimization.

Subcommands
-----------
sweep-theta   geometric-bound ratios per metric over a theta grid (CSV)
paths-bloch   Bloch coordinates of the channel path and the three geodesics
optimize      action-bound saturation via ramp optimization (CSV pair)
report        single-run summary for one (theta, beta, metric, ramp)

Configuration is a flat key=value file (see DEFAULTS) overridden by flags.
CSV files carry a header row, '.' decimals and 17 significant digits, and
are byte-deterministic for a fixed platform and configuration.  Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .channels import DiscretizedPath, GadcParams, RampProfile, gadc_path, gadc_states, steady_state
from .control import arc_length_reparametrize, cosine_progress_grid, optimize_ramp
from .errors import ConfigError, QspeedError
from .geodesics import geodesic_path
from .metrics import MetricKind
from .qsl import QslReport, action_qsl, build_report, geometric_qsl, tightest_metric
from .states import bloch_many, pure_state_theta

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

EXP_HORIZON = 12.0  # dimensionless truncation of the free-relaxation clock

METRIC_ORDER = (MetricKind.QFI, MetricKind.WY, MetricKind.TD)
CURVE_LABELS = {"gadc": "GADC", "td": "TD-geo", "wy": "WY-geo", "qfi": "QFI-geo"}


@dataclass
class Config:
    beta: float = 0.5
    theta: float = math.pi / 3.0
    theta_points: int = 61
    n_time: int = 2000
    tau: float = 1.0
    metric: str = "all"
    out_dir: str = "."
    solver: str = "gradient"
    max_iters: int = 100_000
    tol: float = 1e-10
    ramp: str = "exponential"


_CASTS = {
    "beta": float,
    "theta": float,
    "theta_points": int,
    "n_time": int,
    "tau": float,
    "metric": str,
    "out_dir": str,
    "solver": str,
    "max_iters": int,
    "tol": float,
    "ramp": str,
}


def parse_config_file(path: str) -> dict:
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CASTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CASTS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return values


def build_config(args: argparse.Namespace) -> Config:
    cfg = Config()
    if args.config:
        cfg = replace(cfg, **parse_config_file(args.config))
    overrides = {}
    for key, attr in [
        ("beta", "beta"),
        ("theta", "theta"),
        ("metric", "metric"),
        ("n_time", "n_time"),
        ("out_dir", "out"),
    ]:
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    cfg = replace(cfg, **overrides)
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: Config) -> None:
    if cfg.theta_points < 1:
        raise ConfigError("theta_points must be >= 1")
    if cfg.n_time < 1:
        raise ConfigError("n_time must be >= 1")
    if cfg.tau <= 0.0:
        raise ConfigError("tau must be positive")
    if not 0.0 <= cfg.theta <= math.pi:
        raise ConfigError("theta must lie in [0, pi]")
    if cfg.metric not in {"all", "qfi", "wy", "td"}:
        raise ConfigError(f"metric must be one of all/qfi/wy/td, got {cfg.metric!r}")
    if cfg.solver not in {"gradient", "arclength"}:
        raise ConfigError(f"solver must be gradient or arclength, got {cfg.solver!r}")
    if cfg.ramp not in {"exponential", "uniform"}:
        raise ConfigError(f"ramp must be exponential or uniform, got {cfg.ramp!r}")
    if cfg.max_iters < 1:
        raise ConfigError("max_iters must be >= 1")
    if cfg.tol <= 0.0:
        raise ConfigError("tol must be positive")
    try:
        GadcParams(cfg.beta)
    except QspeedError as exc:
        raise ConfigError(str(exc)) from exc


def selected_metrics(cfg: Config) -> tuple[MetricKind, ...]:
    if cfg.metric == "all":
        return METRIC_ORDER
    return (MetricKind.parse(cfg.metric),)


def make_ramp(cfg: Config, n: int | None = None) -> RampProfile:
    n = n or cfg.n_time
    if cfg.ramp == "uniform":
        return RampProfile.uniform(cfg.tau, n)
    return RampProfile.exponential_clock(cfg.tau, n, EXP_HORIZON)


# -- output helpers ----------------------------------------------------------


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[tuple], meta: dict | None = None) -> None:
    lines = []
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={_fmt(value)}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _say(cfg_quiet: bool, message: str) -> None:
    if not cfg_quiet:
        print(message)


# -- subcommands -------------------------------------------------------------


def _theta_grid(cfg: Config) -> np.ndarray:
    return np.linspace(0.0, math.pi, cfg.theta_points)


def _sweep_one(theta: float, cfg: Config, params: GadcParams) -> dict[MetricKind, QslReport]:
    ramp = make_ramp(cfg)
    path = gadc_path(pure_state_theta(theta), ramp, params)
    return {metric: geometric_qsl(path, metric) for metric in METRIC_ORDER}


def cmd_sweep_theta(cfg: Config, quiet: bool = False, plot: bool = True) -> Path:
    params = GadcParams(cfg.beta)
    thetas = _theta_grid(cfg)
    with ThreadPoolExecutor() as pool:
        all_reports = list(pool.map(lambda th: _sweep_one(th, cfg, params), thetas))
    rows = []
    for theta, reports in zip(thetas, all_reports):
        pick = tightest_metric([reports[m] for m in METRIC_ORDER])
        for metric in METRIC_ORDER:
            r = reports[metric]
            rows.append(
                (
                    float(theta),
                    metric.value,
                    r.distance,
                    r.length,
                    r.ratio_geom,
                    r.delta,
                    int(pick.metric is metric),
                )
            )
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "sweep_theta.csv"
    write_csv(
        csv_path,
        ["theta", "metric", "L", "ell", "ratio_geom", "delta", "tightest_flag"],
        rows,
        meta=_meta(cfg, ["beta", "theta_points", "n_time", "tau", "ramp"]),
    )
    if plot:
        from . import plots

        plots.plot_sweep(thetas, all_reports, out_dir / "sweep_theta.png")
    _say(quiet, f"wrote {csv_path}")
    return csv_path


def cmd_paths_bloch(cfg: Config, quiet: bool = False, plot: bool = True) -> Path:
    params = GadcParams(cfg.beta)
    rho0 = pure_state_theta(cfg.theta)
    rho_tau = steady_state(params)
    curves: dict[str, np.ndarray] = {}
    curves["gadc"] = bloch_many(gadc_path(rho0, make_ramp(cfg), params).states)
    uniform = RampProfile.uniform(cfg.tau, cfg.n_time)
    for metric in (MetricKind.TD, MetricKind.WY, MetricKind.QFI):
        path = geodesic_path(metric, rho0, rho_tau, uniform)
        curves[metric.value] = bloch_many(path.states)
    rows = []
    for key in ("gadc", "td", "wy", "qfi"):
        label = CURVE_LABELS[key]
        for idx, (x, y, z) in enumerate(curves[key]):
            rows.append((label, idx, float(x), float(y), float(z)))
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "paths_bloch.csv"
    write_csv(
        csv_path,
        ["curve", "index", "x", "y", "z"],
        rows,
        meta=_meta(cfg, ["beta", "theta", "n_time", "tau", "ramp"]),
    )
    if plot:
        from . import plots

        plots.plot_bloch(curves, out_dir / "paths_bloch.png")
    _say(quiet, f"wrote {csv_path}")
    return csv_path


def _optimize_one(
    theta: float, metric: MetricKind, cfg: Config, params: GadcParams
) -> dict[str, object]:
    """Optimize the traversal of one channel path in one metric."""
    rho0 = pure_state_theta(theta)
    gen = lambda p: gadc_states(rho0, p, params.c)  # noqa: E731
    n = cfg.n_time
    uniform = RampProfile.uniform(cfg.tau, n)
    path_uniform = gadc_path(rho0, uniform, params)
    rep_uniform = action_qsl(path_uniform, metric)

    p_dense = cosine_progress_grid(16 * n)
    dense = DiscretizedPath(times=p_dense * cfg.tau, states=gen(p_dense))
    arc_ramp = arc_length_reparametrize(dense, metric, cfg.tau, n)
    result = optimize_ramp(
        gen, metric, cfg.tau, n, uniform, max_iters=cfg.max_iters, tol=cfg.tol
    )
    chosen = arc_ramp if cfg.solver == "arclength" else result.ramp
    rep_opt = action_qsl(gadc_path(rho0, chosen, params), metric)
    rep_arc = action_qsl(gadc_path(rho0, arc_ramp, params), metric)
    return {
        "theta": theta,
        "metric": metric,
        "ratio_geom": rep_uniform.ratio_geom,
        "ratio_geom_opt": rep_opt.ratio_geom,
        "ratio_action_initial": rep_uniform.ratio_action,
        "ratio_action_optimized": rep_opt.ratio_action,
        "ratio_action_arc": rep_arc.ratio_action,
        "ramp_initial": uniform,
        "ramp_optimal": chosen,
        "history": result.history,
        "iterations": result.iterations,
    }


def cmd_optimize(
    cfg: Config, quiet: bool = False, plot: bool = True, history: bool = False
) -> tuple[Path, Path]:
    params = GadcParams(cfg.beta)
    metrics_run = selected_metrics(cfg)
    thetas = _theta_grid(cfg)
    jobs = [(theta, metric) for metric in metrics_run for theta in thetas]
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda job: _optimize_one(job[0], job[1], cfg, params), jobs))

    summary_rows = []
    for res in results:
        summary_rows.append(
            (
                float(res["theta"]),
                res["metric"].value,
                res["ratio_geom"] ** 2,
                res["ratio_action_initial"],
                res["ratio_action_optimized"],
            )
        )
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_path = out_dir / "optimize_summary.csv"
    write_csv(
        summary_path,
        ["theta", "metric", "ratio_geom_sq", "ratio_action_initial", "ratio_action_optimized"],
        summary_rows,
        meta=_meta(cfg, ["beta", "theta_points", "n_time", "tau", "solver", "max_iters", "tol"]),
    )

    # ramp profiles for five evenly spaced grid points
    profile_idx = sorted(set(np.linspace(0, len(thetas) - 1, min(5, len(thetas))).round().astype(int)))
    profile_rows = []
    by_job = {(res["theta"], res["metric"]): res for res in results}
    for metric in metrics_run:
        for i in profile_idx:
            res = by_job[(thetas[i], metric)]
            ramp: RampProfile = res["ramp_optimal"]
            t_over_tau = ramp.times / cfg.tau
            p_init = res["ramp_initial"].p_at(ramp.times)
            for k in range(ramp.times.size):
                profile_rows.append(
                    (
                        float(thetas[i]),
                        metric.value,
                        float(t_over_tau[k]),
                        float(p_init[k]),
                        float(ramp.p_values[k]),
                    )
                )
    profiles_path = out_dir / "optimize_profiles.csv"
    write_csv(
        profiles_path,
        ["theta", "metric", "t_over_tau", "p_initial", "p_optimal"],
        profile_rows,
        meta=_meta(cfg, ["beta", "n_time", "tau", "solver"]),
    )

    if history:
        for res in results:
            idx = int(np.argmin(np.abs(thetas - res["theta"])))
            name = f"optimize_history_{res['metric'].value}_{idx:02d}.csv"
            hist = res["history"]
            write_csv(out_dir / name, ["iter", "action"], list(enumerate(hist.tolist())))

    for res in results:
        gap = abs(res["ratio_action_optimized"] - res["ratio_action_arc"])
        scale = max(abs(res["ratio_action_arc"]), 1e-30)
        if gap / scale > 1e-2:
            _say(
                quiet,
                f"warning: solver disagreement {gap / scale:.2e} at "
                f"theta={res['theta']:.4f} metric={res['metric'].value}",
            )

    if plot:
        from . import plots

        plots.plot_optimize(summary_rows, profile_rows, out_dir)
    _say(quiet, f"wrote {summary_path} and {profiles_path}")
    return summary_path, profiles_path


def cmd_report(cfg: Config, quiet: bool = False) -> str:
    params = GadcParams(cfg.beta)
    path = gadc_path(pure_state_theta(cfg.theta), make_ramp(cfg), params)
    metrics_run = selected_metrics(cfg)
    lines = [
        "qsl report",
        f"  beta         = {_fmt(cfg.beta)}",
        f"  theta        = {_fmt(cfg.theta)}",
        f"  tau          = {_fmt(cfg.tau)}",
        f"  n_time       = {cfg.n_time}",
        f"  ramp         = {cfg.ramp}",
    ]
    for metric in metrics_run:
        report = build_report(path, metric)
        lines.append(f"  [{metric.value}]")
        for key, value in report.to_record().items():
            if key == "metric":
                continue
            lines.append(f"    {key:<16} = {_fmt(value)}")
    text = "\n".join(lines)
    if not quiet:
        print(text)
    return text


def _meta(cfg: Config, keys: list[str]) -> dict:
    base = {"version": __version__}
    for key in keys:
        base[key] = getattr(cfg, key)
    return base


# -- argument parsing --------------------------------------------------------


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspeed",
        description="Quantum speed limits of a qubit thermalizing through "
        "a generalized amplitude damping channel.",
    )
    parser.add_argument("--version", action="version", version=f"qspeed {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--beta", type=float, help="inverse bath temperature")
    common.add_argument("--theta", type=float, help="initial-state angle in [0, pi]")
    common.add_argument("--metric", choices=["qfi", "wy", "td"], help="restrict to one metric")
    common.add_argument("--n-time", dest="n_time", type=int, help="time-grid segments")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    common.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep-theta", parents=[common], help="bound ratios over a theta grid")
    sub.add_parser("paths-bloch", parents=[common], help="Bloch coordinates of path and geodesics")
    opt = sub.add_parser("optimize", parents=[common], help="optimize traversal ramps")
    opt.add_argument("--history", action="store_true", help="write per-iteration action history")
    sub.add_parser("report", parents=[common], help="single-run summary")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        plot = not args.no_plot
        if args.command == "sweep-theta":
            cmd_sweep_theta(cfg, quiet=args.quiet, plot=plot)
        elif args.command == "paths-bloch":
            cmd_paths_bloch(cfg, quiet=args.quiet, plot=plot)
        elif args.command == "optimize":
            cmd_optimize(cfg, quiet=args.quiet, plot=plot, history=args.history)
        elif args.command == "report":
            cmd_report(cfg, quiet=args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QspeedError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def entrypoint() -> None:
    raise SystemExit(main())
