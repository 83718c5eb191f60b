import numpy as np
import pytest

from qspeed.channels import GadcParams, RampProfile


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def params():
    return GadcParams(0.5)


def random_hermitian(rng, dim=2, scale=1.0):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (m + m.conj().T)


def random_density(rng, dim=2):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = m @ m.conj().T
    return m / np.trace(m).real


def random_ramp(rng, n=200, tau=1.0):
    """Monotone schedule from a random family (power / exponential / noisy)."""
    kind = int(rng.integers(0, 3))
    t = np.linspace(0.0, tau, n + 1)
    if kind == 0:
        p = (t / tau) ** rng.uniform(0.3, 3.0)
    elif kind == 1:
        k = rng.uniform(2.0, 15.0)
        p = -np.expm1(-k * t / tau) / -np.expm1(-k)
    else:
        w = rng.random(n) ** rng.uniform(0.5, 2.0)
        p = np.concatenate([[0.0], np.cumsum(w) / w.sum()])
    p[0], p[-1] = 0.0, 1.0
    return RampProfile(t, p)
