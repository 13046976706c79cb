import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import literal_acs, random_hermitian, theoretical_R
from recdft.array_model import electrical_angle
from recdft.covariance import (
    acs_size,
    diagonal_average_acs,
    hermitian,
    is_conjugate_symmetric,
    lag,
    lags,
    sample_covariance,
)
from recdft.spectrum import toeplitz_from_acs


def test_single_snapshot_outer_product():
    R = sample_covariance(np.array([1, 1j]))
    np.testing.assert_allclose(R, [[1, -1j], [1j, 1]])


def test_white_noise_law_of_large_numbers():
    rng = np.random.default_rng(0)
    X = (rng.standard_normal((4, 100_000)) + 1j * rng.standard_normal((4, 100_000))) / np.sqrt(2)
    R = sample_covariance(X)
    off = R - np.diag(np.diag(R))
    assert np.abs(off).max() < 0.02
    np.testing.assert_allclose(np.diag(R).real, 1, atol=0.02)


def test_sample_covariance_is_hermitian_exactly():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
    R = sample_covariance(X)
    np.testing.assert_array_equal(R, R.conj().T)
    assert np.all(np.diag(R).real >= 0)


def test_sample_covariance_rejects_empty():
    with pytest.raises(ValueError):
        sample_covariance(np.zeros((3, 0)))


def test_hermitian_rejects_non_square():
    with pytest.raises(ValueError):
        hermitian(np.zeros((2, 3)))


def test_identity_gives_impulse():
    acs = diagonal_average_acs(np.eye(5))
    expect = np.zeros(9)
    expect[4] = 1
    np.testing.assert_array_equal(acs, expect)


def test_toeplitz_recovers_first_row():
    row = np.array([2, 1 - 1j, 0.5])
    acs = np.concatenate([row[:0:-1].conj(), row])
    T = toeplitz_from_acs(acs)
    np.testing.assert_allclose(T[0], row)
    np.testing.assert_allclose(diagonal_average_acs(T), acs)


def test_matches_double_loop_6x6():
    R = random_hermitian(np.random.default_rng(6), 6)
    assert np.abs(diagonal_average_acs(R) - literal_acs(R)).max() < 1e-12


def test_lag_helpers():
    acs = np.arange(7.0)
    assert acs_size(acs) == 4
    assert lag(acs, 0) == 3 and lag(acs, -3) == 0
    np.testing.assert_array_equal(lags(4), np.arange(-3, 4))
    with pytest.raises(IndexError):
        lag(acs, 4)
    with pytest.raises(ValueError):
        acs_size(np.zeros(4))


def test_rejects_scalar_matrix():
    with pytest.raises(ValueError):
        diagonal_average_acs(np.ones((1, 1)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**31))
def test_conjugate_symmetry_and_real_lag0(n, seed):
    R = random_hermitian(np.random.default_rng(seed), n)
    acs = diagonal_average_acs(R)
    assert is_conjugate_symmetric(acs)
    assert acs[n - 1].imag == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31),
       st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False))
def test_linearity(n, seed, alpha, beta):
    rng = np.random.default_rng(seed)
    R1, R2 = random_hermitian(rng, n), random_hermitian(rng, n)
    lhs = diagonal_average_acs(alpha * R1 + beta * R2)
    rhs = alpha * diagonal_average_acs(R1) + beta * diagonal_average_acs(R2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + np.abs(rhs).max()))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31))
def test_round_trip_through_toeplitz(n, seed):
    rng = np.random.default_rng(seed)
    acs = diagonal_average_acs(random_hermitian(rng, n))
    np.testing.assert_allclose(diagonal_average_acs(toeplitz_from_acs(acs)), acs, atol=1e-13)


def test_theoretical_single_interferer_coefficients_exact():
    N = 30
    ts, tl = electrical_angle(3.0), electrical_angle(40.0)
    _, _, R = theoretical_R(N, ts, tl, 10.0, 1000.0, 1.0)
    acs = diagonal_average_acs(R)
    n = lags(N)
    expect = 10.0 * np.exp(1j * n * ts) + 1000.0 * np.exp(1j * n * tl) + (n == 0)
    np.testing.assert_allclose(acs, expect, atol=1e-10)
