"""Exception hierarchy shared across the package."""


class QspeedError(Exception):
    """Base class for every error raised by this package."""


class NonHermitianInput(QspeedError):
    """A matrix that must be Hermitian is not, beyond tolerance."""


class NotPositiveSemiDefinite(QspeedError):
    """A matrix that must be PSD has an eigenvalue below -1e-10."""


class DimensionMismatch(QspeedError):
    """Operands have incompatible dimensions (e.g. Bloch ops need d = 2)."""


class ParameterOutOfRange(QspeedError):
    """A scalar parameter is outside its admissible interval."""


class IncompleteKrausSet(QspeedError):
    """Kraus operators do not satisfy sum K^dag K = identity."""


class StepSizeTooCoarse(QspeedError):
    """Integrator step count too small for the requested horizon."""


class RampInvalid(QspeedError):
    """Schedule p(t) violates p(0)=0, p(tau)=1 or monotonicity."""


class DegenerateNormalization(QspeedError):
    """Geodesic normalization vanished; the geodesic is not unique."""


class RegularizationFailure(QspeedError):
    """Geodesic endpoints drifted beyond 1e-6 from the requested states."""


class PathTooShort(QspeedError):
    """Operation needs more path samples than were provided."""


class RankDeficient(QspeedError):
    """SLD is undefined: vanishing eigenvalue pair with nonzero drive."""


class ZeroLengthPath(QspeedError):
    """Path never leaves its initial state; speed-limit ratios undefined."""


class ZeroAction(QspeedError):
    """Action functional is zero; the action bound is undefined."""


class EmptyInput(QspeedError):
    """A collection argument has too few elements."""


class InadmissibleInitial(QspeedError):
    """Initial ramp for the optimizer violates the control constraints."""


class NonConvergence(QspeedError):
    """Optimizer hit the iteration cap while still descending."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history


class ConfigError(QspeedError):
    """Bad configuration file or command-line value."""
