"""Dense Hermitian linear algebra for small complex matrices.

Everything here works on plain numpy arrays of shape ``(d, d)``; the
``*_stack`` helpers accept stacks ``(..., d, d)`` and are the workhorses for
whole-path computations.  Sized for d = 2 but valid for any small dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianInput, NotPositiveSemiDefinite

HERMITICITY_TOL = 1e-10
PSD_CLAMP = 1e-10


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (M + M^dag)/2."""
    return 0.5 * (m + dagger(m))


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation of M from M^dag."""
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianInput(
            f"max |M - M^dag| = {defect:.3e} exceeds tolerance {tol:.1e}"
        )


@dataclass(frozen=True)
class HermitianEig:
    """Spectral decomposition V diag(w) V^dag, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def eig_hermitian(m: np.ndarray) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    Raises NonHermitianInput if the input deviates from Hermiticity by more
    than 1e-10 entrywise; the residual skew part is dropped before solving.
    """
    m = np.asarray(m, dtype=complex)
    require_hermitian(m)
    w, v = np.linalg.eigh(hermitize(m))
    return HermitianEig(eigenvalues=w, eigenvectors=v)


def mat_sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues in [-1e-10, 0) are treated as round-off and clamped to zero;
    anything more negative raises NotPositiveSemiDefinite.
    """
    dec = eig_hermitian(m)
    w = dec.eigenvalues
    if float(w.min()) < -PSD_CLAMP:
        raise NotPositiveSemiDefinite(
            f"most negative eigenvalue {float(w.min()):.3e} below -{PSD_CLAMP:.1e}"
        )
    root = np.sqrt(np.clip(w, 0.0, None))
    v = dec.eigenvectors
    return (v * root) @ dagger(v)


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    require_hermitian(m)
    w = np.linalg.eigvalsh(hermitize(m))
    return float(np.abs(w).sum())


# -- stacked fast paths -----------------------------------------------------
#
# The helpers below assume Hermitian (PSD where stated) inputs up to round-off
# and clamp negative dust silently; callers validate at their own boundaries.


def _det2(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def _tr(m: np.ndarray) -> np.ndarray:
    return np.einsum("...ii->...", m)


def sqrt_psd_stack(m: np.ndarray) -> np.ndarray:
    """Principal square roots of a stack of PSD Hermitian matrices."""
    m = np.asarray(m, dtype=complex)
    if m.shape[-1] == 2:
        # closed form: sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M))
        det = np.clip(_det2(m).real, 0.0, None)
        tr = _tr(m).real
        root_det = np.sqrt(det)
        denom = np.sqrt(np.clip(tr + 2.0 * root_det, 0.0, None))
        denom = np.where(denom < 1e-150, 1.0, denom)
        eye = np.eye(2, dtype=complex)
        return (m + root_det[..., None, None] * eye) / denom[..., None, None]
    w, v = np.linalg.eigh(hermitize(m))
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root[..., None, :]) @ dagger(v)


def trace_norm_stack(m: np.ndarray) -> np.ndarray:
    """Trace norms of a stack of Hermitian matrices."""
    m = np.asarray(m, dtype=complex)
    if m.shape[-1] == 2:
        tr = _tr(m).real
        det = _det2(m).real
        disc = np.sqrt(np.clip(0.25 * tr * tr - det, 0.0, None))
        return np.abs(0.5 * tr + disc) + np.abs(0.5 * tr - disc)
    w = np.linalg.eigvalsh(hermitize(m))
    return np.abs(w).sum(axis=-1)


def eigvalsh_stack(m: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(hermitize(np.asarray(m, dtype=complex)))
