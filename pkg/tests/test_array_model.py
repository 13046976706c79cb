import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recdft.array_model import (
    MismatchModel,
    TrialGeometry,
    apply_mismatch,
    electrical_angle,
    physical_angle,
    steering_matrix,
    steering_vector,
    synthesize_trial,
)
from recdft.covariance import sample_covariance

N = 30


def rng(seed=0):
    return np.random.default_rng(seed)


def test_steering_vector_trivial_cases():
    np.testing.assert_allclose(steering_vector(0.0, 4), np.ones(4))
    np.testing.assert_allclose(steering_vector(np.pi, 2), [1, -1], atol=1e-15)


def test_steering_vector_rejects_small_arrays():
    with pytest.raises(ValueError):
        steering_vector(0.1, 1)


def test_sinc_identity_against_direct_sum():
    t1, t2 = 0.37, 0.27
    direct = abs(np.vdot(steering_vector(t1, N), steering_vector(t2, N))) ** 2
    d = t1 - t2
    closed = np.sin(N * d / 2) ** 2 / np.sin(d / 2) ** 2
    assert direct == pytest.approx(closed, rel=1e-12)


@given(st.floats(-np.pi, np.pi), st.integers(2, 64))
def test_ideal_sv_properties(theta, n):
    a = steering_vector(theta, n)
    np.testing.assert_allclose(np.abs(a), 1.0, atol=1e-14)
    assert a[0] == 1
    assert np.vdot(a, a).real == pytest.approx(n)
    np.testing.assert_allclose(steering_vector(theta + 2 * np.pi, n), a, atol=1e-12)


def test_angle_maps_invert():
    phi = np.linspace(-89, 89, 37)
    np.testing.assert_allclose(physical_angle(electrical_angle(phi)), phi, atol=1e-9)


def test_steering_matrix_columns():
    th = np.array([-0.4, 0.0, 1.1])
    A = steering_matrix(th, 8)
    for k, t in enumerate(th):
        np.testing.assert_allclose(A[:, k], steering_vector(t, 8))


@pytest.mark.parametrize("kwargs", [
    dict(kind="nonsense"),
    dict(kind="random_look_direction", look_halfwidth_deg=-1.0),
    dict(kind="wavefront_distortion", phase_std=np.nan),
    dict(kind="incoherent_scattering", n_paths=-1),
])
def test_mismatch_validation(kwargs):
    with pytest.raises(ValueError):
        MismatchModel(**kwargs)


def test_mismatch_none_is_identity():
    nominal = TrialGeometry.nominal(N, 0.0, [40.0, -50.0])
    out = apply_mismatch(MismatchModel("none"), nominal, rng())
    assert out.soi_doa_deg == nominal.soi_doa_deg
    np.testing.assert_array_equal(out.interferer_doas_deg, nominal.interferer_doas_deg)
    np.testing.assert_array_equal(out.soi_sv, nominal.soi_sv)


def test_wavefront_zero_std_is_ideal():
    nominal = TrialGeometry.nominal(N, 5.0, [40.0])
    out = apply_mismatch(MismatchModel("wavefront_distortion", phase_std=0.0), nominal, rng())
    np.testing.assert_allclose(out.soi_sv, nominal.soi_sv)


def test_wavefront_accumulates_phase():
    nominal = TrialGeometry.nominal(N, 0.0, [])
    g = rng(3)
    out = apply_mismatch(MismatchModel("wavefront_distortion", phase_std=0.04), nominal, g)
    inc = np.random.default_rng(3).normal(0.0, 0.04, N - 1)
    np.testing.assert_allclose(np.angle(out.soi_sv), np.concatenate([[0], np.cumsum(inc)]), atol=1e-12)


def test_random_look_bounds():
    nominal = TrialGeometry.nominal(N, 0.0, [40.0, -50.0])
    mm = MismatchModel("random_look_direction", look_halfwidth_deg=4.0)
    g = rng(1)
    for _ in range(200):
        out = apply_mismatch(mm, nominal, g)
        assert -4 <= out.soi_doa_deg <= 4
        assert 36 <= out.interferer_doas_deg[0] <= 44
        assert -54 <= out.interferer_doas_deg[1] <= -46


def test_coherent_norm_monte_carlo():
    nominal = TrialGeometry.nominal(N, 0.0, [])
    mm = MismatchModel("coherent_scattering", n_paths=4, path_std_deg=2.0)
    g = rng(2024)
    norms = [np.vdot(s, s).real for s in (apply_mismatch(mm, nominal, g).soi_sv for _ in range(10_000))]
    # uniform path phases make the cross terms vanish in expectation
    assert np.mean(norms) == pytest.approx(5 * N, rel=0.02)


def test_synthesize_reproducible():
    mm = MismatchModel("coherent_scattering")
    b1 = synthesize_trial(N, 0, [40, -50], [30, 30], 10, 30, mm, rng(9))
    b2 = synthesize_trial(N, 0, [40, -50], [30, 30], 10, 30, mm, rng(9))
    np.testing.assert_array_equal(b1.samples, b2.samples)
    np.testing.assert_array_equal(b1.truth.R_s, b2.truth.R_s)


def test_default_trial_shapes():
    b = synthesize_trial(N, 0, [40, -50], [30, 30], 10, 30, MismatchModel(), rng())
    assert b.samples.shape == (N, 30)
    R = sample_covariance(b)
    assert np.linalg.matrix_rank(R) <= 30
    assert b.truth.rank_one
    assert np.all(np.linalg.eigvalsh(b.truth.R_ipn) > 0)


def test_noise_only_power_and_identity():
    K = 4000
    b = synthesize_trial(N, 0, [], [], None, K, MismatchModel(), rng(5))
    power = np.mean(np.abs(b.samples) ** 2)
    assert abs(power - 1.0) < 3 / np.sqrt(N * K)
    R = sample_covariance(b)
    assert np.max(np.abs(R - np.eye(N))) < 0.1


def test_single_interferer_noiseless_eigenstructure():
    # powers are relative to the noise floor: sigma_l^2 = 1 over a 1e-10 floor
    b = synthesize_trial(N, 0, [40.0], [100.0], None, 20000, MismatchModel(), rng(6), sigma_n2=1e-10)
    ev = np.linalg.eigvalsh(sample_covariance(b))
    assert ev[-1] == pytest.approx(N * 1.0, rel=0.03)
    assert np.max(np.abs(ev[:-1])) < 1e-8 * ev[-1]


def test_incoherent_rs_rank_and_power():
    mm = MismatchModel("incoherent_scattering", n_paths=4, path_std_deg=2.0)
    b = synthesize_trial(N, 0, [40], [30], 10, 30, mm, rng(8))
    Rs = b.truth.R_s
    ev = np.linalg.eigvalsh(Rs)
    assert np.sum(ev > 1e-8 * np.trace(Rs).real) <= 5
    # total per-sensor power equals sigma_s^2
    assert np.trace(Rs).real / N == pytest.approx(10.0)
    assert not b.truth.rank_one


def test_doa_outside_range_rejected():
    with pytest.raises(ValueError):
        synthesize_trial(N, 95.0, [], [], 10, 5, MismatchModel(), rng())


def test_clipping_is_flagged():
    mm = MismatchModel("random_look_direction", look_halfwidth_deg=4.0)
    flagged = [synthesize_trial(N, 88.0, [], [], 10, 2, mm, rng(s)).truth.clipped for s in range(40)]
    assert any(flagged) and not all(flagged)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_any_seed_reproducible(seed):
    mm = MismatchModel("random_look_direction")
    a = synthesize_trial(8, 0, [40], [20], 0, 4, mm, rng(seed)).samples
    b = synthesize_trial(8, 0, [40], [20], 0, 4, mm, rng(seed)).samples
    np.testing.assert_array_equal(a, b)
