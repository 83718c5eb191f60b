"""Figure rendering for the CLI report paths.

Figures are written next to the CSV files; the CSV remains the primary
output and the plots are presentation-only.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .metrics import MetricKind

METRIC_COLORS = {MetricKind.QFI: "tab:green", MetricKind.WY: "tab:purple", MetricKind.TD: "tab:blue"}
METRIC_LABELS = {MetricKind.QFI: "QFI", MetricKind.WY: "WY", MetricKind.TD: "TD"}
CURVE_STYLE = {
    "gadc": dict(color="tab:red", ls="--", label="channel path"),
    "td": dict(color="tab:blue", ls="-", label="TD geodesic"),
    "wy": dict(color="tab:purple", ls="-", label="WY geodesic"),
    "qfi": dict(color="tab:green", ls="-", label="QFI geodesic"),
}


def plot_sweep(thetas, reports_per_theta, out_path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    for metric in (MetricKind.QFI, MetricKind.WY, MetricKind.TD):
        ratios = [reports[metric].ratio_geom for reports in reports_per_theta]
        ax.plot(thetas, ratios, color=METRIC_COLORS[metric], label=METRIC_LABELS[metric])
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$\tau_g^\gamma/\tau$")
    ax.set_xlim(0.0, np.pi)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return out_path


def plot_bloch(curves: dict[str, np.ndarray], out_path: Path) -> Path:
    """x-z section of the Bloch ball; the configured curves all lie in y=0."""
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    angle = np.linspace(0.0, 2.0 * np.pi, 361)
    ax.plot(np.cos(angle), np.sin(angle), color="0.7", lw=0.8)
    for key in ("gadc", "td", "wy", "qfi"):
        xyz = curves[key]
        ax.plot(xyz[:, 0], xyz[:, 2], **CURVE_STYLE[key])
    ax.set_xlabel("x")
    ax.set_ylabel("z")
    ax.set_aspect("equal")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=160)
    plt.close(fig)
    return out_path


def plot_optimize(summary_rows, profile_rows, out_dir: Path) -> list[Path]:
    """Saturation plot plus ramp profiles, one panel per metric."""
    metrics = sorted({row[1] for row in summary_rows})
    fig, axes = plt.subplots(1, len(metrics), figsize=(3.6 * len(metrics), 3.2), squeeze=False)
    for ax, label in zip(axes[0], metrics):
        rows = [r for r in summary_rows if r[1] == label]
        theta = [r[0] for r in rows]
        ax.plot(theta, [r[2] for r in rows], "-", color="tab:blue", label=r"$(\tau_g/\tau)^2$")
        ax.plot(theta, [r[3] for r in rows], ".", color="tab:purple", label="uniform ramp")
        ax.plot(theta, [r[4] for r in rows], ".", color="tab:red", label="optimized ramp")
        ax.set_title(label.upper())
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel(r"$\tau_a/\tau$")
    axes[0][0].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    summary_png = out_dir / "optimize_summary.png"
    fig.savefig(summary_png, dpi=160)
    plt.close(fig)

    fig, axes = plt.subplots(1, len(metrics), figsize=(3.6 * len(metrics), 3.2), squeeze=False)
    for ax, label in zip(axes[0], metrics):
        rows = [r for r in profile_rows if r[1] == label]
        thetas = sorted({r[0] for r in rows})
        for theta in thetas:
            pts = [(r[2], r[4]) for r in rows if r[0] == theta]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], label=rf"$\theta={theta:.2f}$")
        if rows:
            diag = [(r[2], r[3]) for r in rows if r[0] == thetas[0]]
            ax.plot([p[0] for p in diag], [p[1] for p in diag], "k--", lw=0.8, label="initial")
        ax.set_title(label.upper())
        ax.set_xlabel(r"$t/\tau$")
        ax.set_ylabel(r"$p$")
    axes[0][0].legend(frameon=False, fontsize=7)
    fig.tight_layout()
    profiles_png = out_dir / "optimize_profiles.png"
    fig.savefig(profiles_png, dpi=160)
    plt.close(fig)
    return [summary_png, profiles_png]
