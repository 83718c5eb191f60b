"""Generalized amplitude damping channel, in Kraus and Lindblad form.

Basis convention: |0> is the excited state, so the lowering operator is
sigma_minus = |1><0| and the emission rate gamma multiplies the decay
dissipator.  With c = gamma / (gamma + Gamma) = (1 + tanh beta)/2 the fixed
point is diag(1 - c, c); the Bloch z-coordinate of the fixed point is
-tanh(beta).  The Kraus family and the master equation agree under the
schedule p(t) = 1 - exp(-(gamma + Gamma) t), which the test suite pins down
as the channel-equivalence invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmat
from .errors import (
    IncompleteKrausSet,
    ParameterOutOfRange,
    RampInvalid,
    StepSizeTooCoarse,
)
from .states import validate_density_matrix

SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |1><0|
SIGMA_PLUS = SIGMA_MINUS.conj().T


@dataclass(frozen=True)
class GadcParams:
    """Bath parameters of the damping channel.

    beta is the inverse bath temperature in units of the qubit energy;
    rate_scale fixes gamma + Gamma (1 by default, so time is measured in
    units of the total relaxation rate).
    """

    beta: float
    rate_scale: float = 1.0
    c: float = field(init=False)
    c_bar: float = field(init=False)
    gamma_emit: float = field(init=False)
    gamma_absorb: float = field(init=False)

    def __post_init__(self):
        if not np.isfinite(self.beta):
            raise ParameterOutOfRange("beta must be finite")
        if self.rate_scale <= 0.0:
            raise ParameterOutOfRange("rate_scale must be positive")
        # logistic form keeps both c and 1-c at full relative precision
        x = float(np.exp(-2.0 * self.beta))
        c = 1.0 / (1.0 + x)
        c_bar = x / (1.0 + x)
        if not (0.0 < c < 1.0 and 0.0 < c_bar < 1.0):
            raise ParameterOutOfRange(f"beta={self.beta} drives c={c} out of (0, 1)")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "c_bar", c_bar)
        object.__setattr__(self, "gamma_emit", c * self.rate_scale)
        object.__setattr__(self, "gamma_absorb", c_bar * self.rate_scale)
        recovered = 0.5 * np.log(self.gamma_emit / self.gamma_absorb)
        if abs(recovered - self.beta) > 1e-12 * max(1.0, abs(self.beta)):
            raise ParameterOutOfRange("rates inconsistent with beta")


@dataclass(frozen=True)
class RampProfile:
    """Monotone schedule p(t) with p(0) = 0 and p(tau) = 1."""

    times: np.ndarray
    p_values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.p_values, dtype=float)
        if t.ndim != 1 or t.shape != p.shape or t.size < 2:
            raise RampInvalid(f"need matching 1-d grids with >= 2 points, got {t.shape}, {p.shape}")
        if not np.all(np.diff(t) > 0.0):
            raise RampInvalid("time grid must be strictly increasing")
        if abs(t[0]) > 1e-12:
            raise RampInvalid(f"grid must start at t=0, got {t[0]!r}")
        if abs(p[0]) > 1e-12 or abs(p[-1] - 1.0) > 1e-12:
            raise RampInvalid(f"endpoints p(0)={p[0]!r}, p(tau)={p[-1]!r} must be 0 and 1")
        if np.any(np.diff(p) < -1e-14):
            raise RampInvalid("p(t) must be nondecreasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "p_values", p)

    @property
    def tau(self) -> float:
        return float(self.times[-1])

    def p_at(self, t: np.ndarray | float) -> np.ndarray | float:
        return np.interp(t, self.times, self.p_values)

    @staticmethod
    def uniform(tau: float = 1.0, n: int = 2000) -> "RampProfile":
        t = np.linspace(0.0, tau, n + 1)
        return RampProfile(t, t / tau)

    @staticmethod
    def exponential_clock(tau: float = 1.0, n: int = 2000, horizon: float = 12.0) -> "RampProfile":
        """Schedule of free relaxation, p = 1 - exp(-horizon t/tau).

        Truncated at the given dimensionless horizon and renormalized so
        p(tau) = 1 exactly (the free flow only reaches p = 1 asymptotically).
        """
        t = np.linspace(0.0, tau, n + 1)
        p = -np.expm1(-horizon * t / tau) / -np.expm1(-horizon)
        p[-1] = 1.0
        return RampProfile(t, p)

    @staticmethod
    def power(tau: float = 1.0, n: int = 2000, exponent: float = 2.0) -> "RampProfile":
        if exponent <= 0:
            raise RampInvalid("exponent must be positive")
        t = np.linspace(0.0, tau, n + 1)
        return RampProfile(t, (t / tau) ** exponent)


@dataclass(frozen=True)
class DiscretizedPath:
    """Ordered samples (t_i, rho_i) of a curve on the state manifold."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=complex)
        if t.ndim != 1 or s.ndim != 3 or s.shape[0] != t.shape[0]:
            raise ParameterOutOfRange(f"inconsistent path shapes {t.shape}, {s.shape}")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ParameterOutOfRange("path time grid must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def tau(self) -> float:
        return float(self.times[-1] - self.times[0])

    def validate_states(self, tol: float = 1e-8) -> None:
        for rho in self.states:
            validate_density_matrix(rho, tol)


def gadc_kraus(p: float, c: float) -> list[np.ndarray]:
    """The four Kraus operators of the damping channel at progress p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"p={p!r} outside [0, 1]")
    if not 0.0 < c < 1.0:
        raise ParameterOutOfRange(f"c={c!r} outside (0, 1)")
    return [k[0] for k in _kraus_stack(np.array([p]), c)]


def _kraus_stack(p: np.ndarray, c: float) -> np.ndarray:
    """Stacked Kraus operators, shape (4, n, 2, 2), for an array of p values."""
    p = np.asarray(p, dtype=float)
    sp = np.sqrt(p)
    sq = np.sqrt(1.0 - p)
    rc = np.sqrt(c)
    rcbar = np.sqrt(1.0 - c)
    k = np.zeros((4,) + p.shape + (2, 2), dtype=complex)
    k[0, ..., 0, 0] = rc * sq
    k[0, ..., 1, 1] = rc
    k[1, ..., 1, 0] = rc * sp
    k[2, ..., 0, 0] = rcbar
    k[2, ..., 1, 1] = rcbar * sq
    k[3, ..., 0, 1] = rcbar * sp
    return k


def apply_channel(rho: np.ndarray, kraus: list[np.ndarray]) -> np.ndarray:
    """sum_k K rho K^dag after checking sum_k K^dag K = identity."""
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    total = sum(k.conj().T @ k for k in kraus)
    if np.max(np.abs(total - np.eye(dim))) > 1e-10:
        raise IncompleteKrausSet("sum K^dag K deviates from identity beyond 1e-10")
    out = np.zeros_like(rho)
    for k in kraus:
        out += k @ rho @ k.conj().T
    return out


def gadc_states(rho0: np.ndarray, p: np.ndarray, c: float) -> np.ndarray:
    """Channel output states for an array of p values, shape (n, 2, 2)."""
    p = np.asarray(p, dtype=float)
    if p.size and (p.min() < 0.0 or p.max() > 1.0):
        raise ParameterOutOfRange("p values must lie in [0, 1]")
    if not 0.0 < c < 1.0:
        raise ParameterOutOfRange(f"c={c!r} outside (0, 1)")
    rho0 = np.asarray(rho0, dtype=complex)
    k = _kraus_stack(p, c)
    return np.einsum("knij,jm,knlm->nil", k, rho0, k.conj())


def gadc_path(rho0: np.ndarray, ramp: RampProfile, params: GadcParams) -> DiscretizedPath:
    """Channel trajectory sampled on the ramp's grid.

    The visited set depends only on the p values; the ramp's timing fixes how
    fast that set is traversed.
    """
    rho0 = validate_density_matrix(rho0)
    states = gadc_states(rho0, ramp.p_values, params.c)
    return DiscretizedPath(times=ramp.times.copy(), states=states)


def lindblad_rhs(rho: np.ndarray, params: GadcParams) -> np.ndarray:
    """Thermalizing master-equation generator applied to rho."""
    rho = np.asarray(rho, dtype=complex)
    n_down = SIGMA_PLUS @ SIGMA_MINUS  # |0><0|
    n_up = SIGMA_MINUS @ SIGMA_PLUS  # |1><1|
    out = params.gamma_emit * (
        SIGMA_MINUS @ rho @ SIGMA_PLUS - 0.5 * (n_down @ rho + rho @ n_down)
    )
    out += params.gamma_absorb * (
        SIGMA_PLUS @ rho @ SIGMA_MINUS - 0.5 * (n_up @ rho + rho @ n_up)
    )
    return out


def lindblad_propagate(
    rho0: np.ndarray, t_final: float, n_steps: int, params: GadcParams
) -> DiscretizedPath:
    """Classical RK4 integration of the master equation.

    Requires at least 100 steps per unit of (gamma + Gamma) t.  After each
    step the state is re-hermitized and trace-renormalized; if either
    correction ever exceeds 1e-8 the step count is rejected.
    """
    rho = validate_density_matrix(rho0).copy()
    if t_final < 0.0:
        raise ParameterOutOfRange("t_final must be nonnegative")
    if t_final == 0.0:
        return DiscretizedPath(times=np.array([0.0]), states=rho[None, :, :])
    required = 100.0 * params.rate_scale * t_final
    if n_steps < required:
        raise StepSizeTooCoarse(f"n_steps={n_steps} below required {required:.0f}")
    dt = t_final / n_steps
    traj = np.empty((n_steps + 1, 2, 2), dtype=complex)
    traj[0] = rho
    for i in range(n_steps):
        k1 = lindblad_rhs(rho, params)
        k2 = lindblad_rhs(rho + 0.5 * dt * k1, params)
        k3 = lindblad_rhs(rho + 0.5 * dt * k2, params)
        k4 = lindblad_rhs(rho + dt * k3, params)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        herm = qmat.hermitize(rho)
        herm_corr = float(np.max(np.abs(rho - herm)))
        tr = float(np.trace(herm).real)
        if herm_corr > 1e-8 or abs(tr - 1.0) > 1e-8:
            raise StepSizeTooCoarse(
                f"guard corrections ({herm_corr:.2e}, {abs(tr - 1.0):.2e}) exceed 1e-8"
            )
        rho = herm / tr
        traj[i + 1] = rho
    times = np.linspace(0.0, t_final, n_steps + 1)
    return DiscretizedPath(times=times, states=traj)


def steady_state(params: GadcParams) -> np.ndarray:
    """Fixed point diag(1 - c, c) of both channel forms."""
    return np.diag([params.c_bar, params.c]).astype(complex)
