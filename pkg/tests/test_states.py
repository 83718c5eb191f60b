import numpy as np
import pytest

from qspeed.channels import apply_channel, gadc_kraus
from qspeed.errors import DimensionMismatch, ParameterOutOfRange
from qspeed.states import (
    dist_qfi,
    dist_qfi_pairs,
    dist_td,
    dist_td_pairs,
    dist_wy,
    dist_wy_pairs,
    fidelity_root,
    from_bloch,
    pure_state_theta,
    to_bloch,
    validate_density_matrix,
)

from conftest import random_density

KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)
MIXED = 0.5 * np.eye(2, dtype=complex)


def test_pure_state_poles():
    assert np.allclose(pure_state_theta(0.0), KET0)
    assert np.allclose(pure_state_theta(np.pi / 2), KET1)


def test_pure_state_third_pi():
    # projector onto (1/2)|0> + (sqrt(3)/2)|1>
    expected = np.array([[0.25, np.sqrt(3) / 4], [np.sqrt(3) / 4, 0.75]])
    assert np.allclose(pure_state_theta(np.pi / 3), expected, atol=1e-15)


def test_pure_state_out_of_range_warns():
    with pytest.warns(UserWarning):
        rho = pure_state_theta(np.pi + 0.25)
    assert np.allclose(rho, pure_state_theta(0.25))


def test_bloch_examples():
    b = to_bloch(MIXED)
    assert (b.x, b.y, b.z) == pytest.approx((0.0, 0.0, 0.0))
    b = to_bloch(KET0)
    assert (b.x, b.y, b.z) == pytest.approx((0.0, 0.0, 1.0))
    b = to_bloch(pure_state_theta(np.pi / 3))
    assert (b.x, b.y, b.z) == pytest.approx((np.sqrt(3) / 2, 0.0, -0.5))


def test_bloch_roundtrip(rng):
    for _ in range(100):
        rho = random_density(rng)
        back = from_bloch(to_bloch(rho))
        assert np.max(np.abs(back - rho)) < 1e-14


def test_bloch_rejects_wrong_dim():
    with pytest.raises(DimensionMismatch):
        to_bloch(np.eye(3) / 3)


def test_from_bloch_rejects_outside_ball():
    with pytest.raises(ParameterOutOfRange):
        from_bloch((1.0, 1.0, 0.0))


def test_validate_density_matrix_catches_bad_trace():
    with pytest.raises(ParameterOutOfRange):
        validate_density_matrix(np.diag([0.6, 0.6]))


def test_fidelity_root_examples(rng):
    rho = random_density(rng)
    assert fidelity_root(rho, rho) == pytest.approx(1.0, abs=1e-10)
    assert fidelity_root(KET0, KET1) == pytest.approx(0.0, abs=1e-10)
    assert fidelity_root(KET0, MIXED) == pytest.approx(1.0 / np.sqrt(2.0))


def test_fidelity_root_symmetric(rng):
    for _ in range(100):
        a, b = random_density(rng), random_density(rng)
        assert abs(fidelity_root(a, b) - fidelity_root(b, a)) < 1e-10


@pytest.mark.parametrize(
    "dist,pair,expected",
    [
        (dist_qfi, (KET0, KET1), np.pi / 2),
        (dist_qfi, (KET0, MIXED), np.pi / 4),
        (dist_wy, (KET0, KET1), np.pi / 2),
        (dist_wy, (KET0, MIXED), np.pi / 4),
        (dist_td, (KET0, KET1), 2.0),
        (dist_td, (np.diag([1.0, 0.0]), np.diag([0.75, 0.25])), 0.5),
    ],
)
def test_distance_examples(dist, pair, expected):
    assert dist(*pair) == pytest.approx(expected, abs=1e-12)


def test_distances_vanish_iff_equal(rng):
    for dist in (dist_qfi, dist_wy, dist_td):
        for _ in range(50):
            a, b = random_density(rng), random_density(rng)
            assert dist(a, a) < 1e-7
            assert dist(a, b) > 1e-7  # random pairs distinct
            assert abs(dist(a, b) - dist(b, a)) < 1e-10


def test_distance_bounds(rng):
    for _ in range(200):
        a, b = random_density(rng), random_density(rng)
        assert 0.0 <= dist_qfi(a, b) <= np.pi / 2 + 1e-12
        assert 0.0 <= dist_td(a, b) <= 2.0 + 1e-12
        assert 0.0 <= dist_wy(a, b) <= np.pi + 1e-12


def test_contractivity_under_damping_channel(rng):
    # defining property of the three metrics: one channel application
    # never increases the distance
    for _ in range(100):
        a, b = random_density(rng), random_density(rng)
        p = rng.uniform(0.05, 1.0)
        c = rng.uniform(0.1, 0.9)
        kraus = gadc_kraus(p, c)
        fa, fb = apply_channel(a, kraus), apply_channel(b, kraus)
        assert dist_qfi(fa, fb) <= dist_qfi(a, b) + 1e-9
        assert dist_wy(fa, fb) <= dist_wy(a, b) + 1e-9
        assert dist_td(fa, fb) <= dist_td(a, b) + 1e-9


def test_pair_kernels_match_scalars(rng):
    a = np.stack([random_density(rng) for _ in range(40)])
    b = np.stack([random_density(rng) for _ in range(40)])
    qfi = dist_qfi_pairs(a, b)
    wy = dist_wy_pairs(a, b)
    td = dist_td_pairs(a, b)
    for i in range(40):
        assert abs(qfi[i] - dist_qfi(a[i], b[i])) < 1e-12
        assert abs(wy[i] - dist_wy(a[i], b[i])) < 1e-12
        assert abs(td[i] - dist_td(a[i], b[i])) < 1e-12


def test_qfi_kernel_accurate_for_nearby_states(rng):
    # relative accuracy at chord scales ~1e-8, where the naive
    # arccos(fidelity) form loses everything to round-off
    rho = random_density(rng)
    direction = random_density(rng) - rho
    for eps in (1e-6, 1e-8):
        sigma = rho + eps * direction
        d2 = dist_qfi_pairs(rho[None], sigma[None])[0]
        d1 = dist_qfi_pairs(rho[None], (rho + 0.5 * eps * direction)[None])[0]
        assert d2 == pytest.approx(2.0 * d1, rel=1e-5)
