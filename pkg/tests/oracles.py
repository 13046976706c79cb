"""Independent reference implementations used by the tests."""

import numpy as np


def literal_acs(R):
    """Double loop over the diagonal-average cases formula, 1-based indices."""
    N = R.shape[0]
    out = np.zeros(2 * N - 1, dtype=complex)
    for n in range(-(N - 1), N):
        s = 0.0j
        if n < 0:
            for k in range(-n + 1, N + 1):
                s += R[k - 1, n + k - 1]
        else:
            for k in range(1, N - n + 1):
                s += R[k - 1, n + k - 1]
        out[n + N - 1] = s / (N - abs(n))
    return out


def dense_spectrum(acs, thetas):
    """Dirichlet sum evaluated term by term."""
    N = (len(acs) + 1) // 2
    out = []
    for t in np.atleast_1d(thetas):
        out.append(sum(acs[n + N - 1] * np.exp(-1j * n * t) for n in range(-(N - 1), N)))
    return np.array(out)


def random_hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return A + A.conj().T


def random_psd(rng, n, k=None):
    k = n if k is None else k
    X = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return X @ X.conj().T / k


def theoretical_R(n, soi_theta, intf_thetas, sigma_s2, sigma_l2, sigma_n2=1.0):
    """Covariance of ideal sources: R_s, R_ipn, R."""
    from recdft.array_model import steering_matrix, steering_vector

    a = steering_vector(soi_theta, n)
    A = steering_matrix(np.atleast_1d(intf_thetas), n)
    R_ipn = (A * np.broadcast_to(sigma_l2, A.shape[1:])) @ A.conj().T + sigma_n2 * np.eye(n)
    R_s = sigma_s2 * np.outer(a, a.conj())
    return R_s, R_ipn, R_s + R_ipn


def point_truth(sv, sigma_s2, R_ipn):
    """TrialTruth for a point source with signature ``sv``."""
    from recdft.array_model import TrialGeometry, TrialTruth

    n = len(sv)
    geom = TrialGeometry(n_sensors=n, soi_doa_deg=0.0, interferer_doas_deg=np.zeros(0), soi_sv=sv)
    return TrialTruth(R_s=sigma_s2 * np.outer(sv, np.conj(sv)), R_ipn=R_ipn, sigma_s2=sigma_s2,
                      sigma_l2=np.zeros(0), sigma_n2=1.0, soi_sv=sv, geometry=geom)


def residual_model_loss(eps, phi, n=30, intf_deg=40.0, inr=1000.0):
    """
    Measured and predicted relative SINR loss of the DSCM-based SV estimate
    under the residual model ``R_s = eps I + a_s a_s^H``, exact ``R_ipn`` and
    a look error of ``phi`` electrical radians.
    """
    from recdft.array_model import electrical_angle, steering_vector
    from recdft.beamformer import capon_weights, estimate_sv, optimal_sinr, sinr_quotient

    a_s = steering_vector(phi, n)
    a_bar = steering_vector(0.0, n)
    a_l = steering_vector(electrical_angle(intf_deg), n)
    R_ipn = inr * np.outer(a_l, a_l.conj()) + np.eye(n)
    truth = point_truth(a_s, 1.0, R_ipn)
    sv = estimate_sv(eps * np.eye(n) + np.outer(a_s, a_s.conj()), a_bar)
    w = capon_weights(R_ipn, sv)
    opt = optimal_sinr(truth)
    # linear domain throughout: the losses of interest are far below dB rounding
    measured = 1.0 - sinr_quotient(w, truth.R_s, R_ipn) / opt
    return measured, eps**2 * phi**2 / 12.0


def aligned_grid(n, theta_l, sector=(-4.0, 4.0)):
    """``n`` electrical bins spaced ``2 pi / n`` with one bin exactly on ``theta_l``."""
    from recdft.array_model import physical_angle
    from recdft.spectrum import AngularGrid

    theta = np.angle(np.exp(1j * (theta_l + 2 * np.pi * np.arange(n) / n)))
    phys = physical_angle(theta)
    soi = (phys >= sector[0]) & (phys <= sector[1])
    return AngularGrid(n_sensors=n, n_dft=n, electrical_angles=theta, physical_deg=phys,
                       soi_sector=sector, soi_mask=soi, ipn_mask=~soi, convention="electrical")


def capon_scaling_error(grid, R_c, delta_theta=None):
    """Relative Frobenius distance between the Capon NPICM and ``(2 pi / N) R_c``."""
    from recdft.baselines import capon_npicm

    n = R_c.shape[0]
    C = capon_npicm(R_c, grid, delta_theta=delta_theta)
    target = 2 * np.pi / n * R_c
    return float(np.linalg.norm(C - target) / np.linalg.norm(target))
