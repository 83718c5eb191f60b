"""Qubit density matrices, Bloch coordinates and geodesic distances.

Three contractive-metric geodesic distances are implemented:

* Bures angle            arccos tr sqrt(sqrt(rho) sigma sqrt(rho))
* Bhattacharyya angle    arccos tr(sqrt(rho) sqrt(sigma))
* trace-norm distance    ||rho - sigma||_1

The trace-norm distance is kept unnormalized (orthogonal pure states sit at
distance 2, not 1) so that every speed-limit ratio is consistent within one
metric.  Arccos arguments are clamped to [-1, 1] before evaluation since
round-off can push them out by ~1e-16.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import DimensionMismatch, NonHermitianInput, NotPositiveSemiDefinite, ParameterOutOfRange

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

STATE_TOL = 1e-10


def validate_density_matrix(rho: np.ndarray, tol: float = STATE_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return as complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {rho.shape}")
    qmat.require_hermitian(rho, tol)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > tol:
        raise ParameterOutOfRange(f"trace {tr!r} differs from 1 beyond {tol:.1e}")
    w = np.linalg.eigvalsh(qmat.hermitize(rho))
    if float(w.min()) < -tol:
        raise NotPositiveSemiDefinite(f"eigenvalue {float(w.min()):.3e} below -{tol:.1e}")
    return rho


def pure_state_theta(theta: float) -> np.ndarray:
    """Projector onto cos(theta)|0> + sin(theta)|1>.

    theta outside [0, pi] is reduced mod pi (the projector is pi-periodic);
    a warning flags the reduction.
    """
    if not 0.0 <= theta <= np.pi:
        warnings.warn(f"theta={theta} reduced mod pi", stacklevel=2)
        theta = theta % np.pi
    psi = np.array([np.cos(theta), np.sin(theta)], dtype=complex)
    return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


def to_bloch(rho: np.ndarray) -> BlochVector:
    """Bloch coordinates of a qubit state, rho = (I + r . sigma)/2."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionMismatch(f"Bloch map needs a 2x2 state, got {rho.shape}")
    return BlochVector(
        x=float(2.0 * rho[0, 1].real),
        y=float(-2.0 * rho[0, 1].imag),
        z=float((rho[0, 0] - rho[1, 1]).real),
    )


def from_bloch(r: BlochVector | tuple[float, float, float]) -> np.ndarray:
    if isinstance(r, BlochVector):
        x, y, z = r.x, r.y, r.z
    else:
        x, y, z = r
    n2 = x * x + y * y + z * z
    if n2 > 1.0 + STATE_TOL:
        raise ParameterOutOfRange(f"Bloch vector norm^2 = {n2!r} exceeds 1")
    eye = np.eye(2, dtype=complex)
    return 0.5 * (eye + x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def bloch_many(states: np.ndarray) -> np.ndarray:
    """(n, 2, 2) state stack -> (n, 3) array of Bloch coordinates."""
    states = np.asarray(states, dtype=complex)
    if states.shape[-2:] != (2, 2):
        raise DimensionMismatch(f"Bloch map needs 2x2 states, got {states.shape}")
    out = np.empty(states.shape[:-2] + (3,), dtype=float)
    out[..., 0] = 2.0 * states[..., 0, 1].real
    out[..., 1] = -2.0 * states[..., 0, 1].imag
    out[..., 2] = (states[..., 0, 0] - states[..., 1, 1]).real
    return out


def _clip_cos(value: np.ndarray | float) -> np.ndarray | float:
    return np.clip(value, -1.0, 1.0)


def fidelity_root(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shape mismatch {rho.shape} vs {sigma.shape}")
    root = qmat.mat_sqrt_psd(rho)
    w = np.linalg.eigvalsh(qmat.hermitize(root @ sigma @ root))
    f = float(np.sqrt(np.clip(w, 0.0, None)).sum())
    return min(max(f, 0.0), 1.0)


def dist_qfi(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Bures angle arccos(root fidelity); geodesic distance of the QFI metric."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape == (2, 2) and sigma.shape == (2, 2):
        return float(dist_qfi_pairs(rho[None], sigma[None])[0])
    return float(np.arccos(_clip_cos(fidelity_root(rho, sigma))))


def dist_wy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Bhattacharyya angle arccos tr(sqrt(rho) sqrt(sigma)).

    Evaluated as 2 arcsin(||sqrt(rho) - sqrt(sigma)||_HS / 2), the same angle
    written through the chord, which keeps relative accuracy for nearby
    states where the overlap saturates at 1.
    """
    a = qmat.mat_sqrt_psd(np.asarray(rho, dtype=complex))
    b = qmat.mat_sqrt_psd(np.asarray(sigma, dtype=complex))
    return float(dist_wy_pairs_from_roots(a[None], b[None])[0])


def dist_td(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Trace-norm distance ||rho - sigma||_1 (no factor 1/2)."""
    return qmat.trace_norm(np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex))


# -- stacked pair distances ---------------------------------------------------
#
# Used for whole-path work: given stacks a, b of matching shape (n, d, d) the
# functions return the n pairwise distances.  For d = 2 everything reduces to
# closed-form arithmetic (no per-pair eigensolves).


def dist_td_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return qmat.trace_norm_stack(np.asarray(a, complex) - np.asarray(b, complex))


def fidelity_root_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] == 2:
        # for qubits tr sqrt(sqrt(a) b sqrt(a)) = sqrt(tr(ab) + 2 sqrt(det a det b))
        t = np.einsum("...ij,...ji->...", a, b).real
        d = np.clip(qmat._det2(a).real, 0.0, None) * np.clip(qmat._det2(b).real, 0.0, None)
        f = np.sqrt(np.clip(t + 2.0 * np.sqrt(d), 0.0, None))
        return np.clip(f, 0.0, 1.0)
    ra = qmat.sqrt_psd_stack(a)
    w = np.linalg.eigvalsh(qmat.hermitize(ra @ b @ ra))
    return np.clip(np.sqrt(np.clip(w, 0.0, None)).sum(axis=-1), 0.0, 1.0)


def _one_minus_fidelity_sq_bloch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """1 - (root fidelity)^2 for qubit Bloch vectors, cancellation-free.

    With A = 1 - |a|^2, B = 1 - |b|^2 and d = b - a one has
    1 - f^2 = (1 - a.b - sqrt(A B)) / 2; rewriting through
    u = (A - B)/A = (2 a.d + d.d)/A turns the difference of near-equal
    terms into pure products of small quantities, so nearby states keep
    relative accuracy instead of absolute ~1e-16.
    """
    ad = np.einsum("...i,...i->...", a, b - a)
    dd = np.einsum("...i,...i->...", b - a, b - a)
    big_a = np.clip(1.0 - np.einsum("...i,...i->...", a, a), 0.0, None)
    pure = big_a < 1e-28
    safe_a = np.where(pure, 1.0, big_a)
    u = (2.0 * ad + dd) / safe_a
    s = np.sqrt(np.clip(1.0 - u, 0.0, None))
    mixed_val = (ad * u / (1.0 + s) + dd) / (2.0 * (1.0 + s))
    pure_val = 0.5 * (big_a - ad)
    return np.clip(np.where(pure, pure_val, mixed_val), 0.0, 1.0)


def dist_qfi_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1] == 2:
        gap = _one_minus_fidelity_sq_bloch(bloch_many(a), bloch_many(b))
        return np.arcsin(np.sqrt(gap))
    return np.arccos(_clip_cos(fidelity_root_pairs(a, b)))


def dist_wy_pairs_from_roots(ra: np.ndarray, rb: np.ndarray) -> np.ndarray:
    """Bhattacharyya angles from precomputed square roots.

    Uses the chord form 2 arcsin(||ra - rb||_HS / 2); both roots have unit
    Hilbert-Schmidt norm, so the chord and the overlap angle coincide.
    """
    diff = ra - rb
    chord = np.sqrt(np.einsum("...ij,...ij->...", diff, diff.conj()).real)
    return 2.0 * np.arcsin(np.clip(0.5 * chord, 0.0, 1.0))


def dist_wy_pairs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return dist_wy_pairs_from_roots(qmat.sqrt_psd_stack(a), qmat.sqrt_psd_stack(b))
