"""Quantum speed limits for a qubit under generalized amplitude damping.

Geometric bounds (geodesic distance over path-average speed) and action
bounds (squared distance over the traversal action) for three contractive
metrics -- Bures/QFI, Wigner-Yanase and trace distance -- together with the
closed-form geodesics, the damping channel in Kraus and Lindblad form, and
ramp optimization that saturates the action bound on a fixed path.
"""

__version__ = "0.1.0"

from .channels import (
    DiscretizedPath,
    GadcParams,
    RampProfile,
    apply_channel,
    gadc_kraus,
    gadc_path,
    gadc_states,
    lindblad_propagate,
    lindblad_rhs,
    steady_state,
)
from .control import OptimizeResult, arc_length_reparametrize, optimize_ramp
from .errors import QspeedError
from .geodesics import (
    geodesic_length_check,
    geodesic_path,
    qfi_geodesic,
    td_geodesic,
    wy_geodesic,
)
from .metrics import (
    MetricKind,
    SpeedProfile,
    instantaneous_speed,
    path_action,
    path_length,
    sld_qfi,
)
from .qmat import HermitianEig, eig_hermitian, mat_sqrt_psd, trace_norm
from .qsl import QslReport, action_qsl, build_report, geometric_qsl, tightest_metric
from .states import (
    BlochVector,
    dist_qfi,
    dist_td,
    dist_wy,
    fidelity_root,
    from_bloch,
    pure_state_theta,
    to_bloch,
)

__all__ = [
    "__version__",
    "QspeedError",
    "HermitianEig",
    "eig_hermitian",
    "mat_sqrt_psd",
    "trace_norm",
    "BlochVector",
    "pure_state_theta",
    "to_bloch",
    "from_bloch",
    "fidelity_root",
    "dist_qfi",
    "dist_wy",
    "dist_td",
    "GadcParams",
    "RampProfile",
    "DiscretizedPath",
    "gadc_kraus",
    "apply_channel",
    "gadc_states",
    "gadc_path",
    "lindblad_rhs",
    "lindblad_propagate",
    "steady_state",
    "td_geodesic",
    "wy_geodesic",
    "qfi_geodesic",
    "geodesic_path",
    "geodesic_length_check",
    "MetricKind",
    "SpeedProfile",
    "instantaneous_speed",
    "path_length",
    "path_action",
    "sld_qfi",
    "QslReport",
    "geometric_qsl",
    "action_qsl",
    "build_report",
    "tightest_metric",
    "arc_length_reparametrize",
    "optimize_ramp",
    "OptimizeResult",
]
