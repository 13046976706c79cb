"""
Desired-signal covariance extraction, steering-vector estimation, Capon
weights and output-SINR scoring.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .covariance import hermitian
from .spectrum import AngularGrid, reconstruct_npicm

__all__ = [
    "ConditioningError",
    "SinrReport",
    "RecDftResult",
    "MAX_CONDITION",
    "hermitian_solve",
    "dscm",
    "estimate_sv",
    "capon_weights",
    "sinr_quotient",
    "optimal_sinr",
    "optimal_weights",
    "output_sinr",
    "predicted_sinr_loss",
    "epsilon_model",
    "rec_dft",
    "to_db",
]

MAX_CONDITION = 1e13


class ConditioningError(np.linalg.LinAlgError):
    """A covariance matrix was too ill-conditioned to solve against."""

    def __init__(self, message, condition=np.inf):
        super().__init__(message)
        self.condition = condition


def to_db(x):
    return 10.0 * np.log10(x)


def hermitian_solve(R, b, max_condition: float = MAX_CONDITION) -> np.ndarray:
    """
    Solve ``R x = b`` for Hermitian ``R`` without forming an inverse.

    The condition number is estimated from the eigenvalues (cheap at the
    array sizes used here). Positive definite matrices go through Cholesky,
    indefinite ones through a symmetric-indefinite solve.
    """
    R = hermitian(R)
    eig = la.eigvalsh(R)
    amax = np.abs(eig).max()
    amin = np.abs(eig).min()
    cond = np.inf if amin == 0 else amax / amin
    if not np.isfinite(cond) or cond > max_condition:
        raise ConditioningError(f"matrix is ill-conditioned (condition ~ {cond:.3g})", cond)
    if eig[0] > 0:
        return la.cho_solve(la.cho_factor(R, lower=True), b)
    return la.solve(R, b, assume_a="her")


def dscm(R_hat, R_ipn_rec) -> np.ndarray:
    """Desired-signal covariance estimate ``R_hat - R_ipn``. Not forced PSD."""
    R_hat = np.asarray(R_hat)
    R_ipn_rec = np.asarray(R_ipn_rec)
    if R_hat.shape != R_ipn_rec.shape:
        raise ValueError(f"shape mismatch {R_hat.shape} vs {R_ipn_rec.shape}")
    return hermitian(R_hat - R_ipn_rec)


def estimate_sv(R_s, a_bar, normalize: bool = False) -> np.ndarray:
    """
    Steering-vector estimate ``R_s @ a_bar``.

    The product is returned unscaled; ``normalize=True`` rescales it to norm
    ``sqrt(N)``, which leaves every SINR unchanged.
    """
    R_s = np.asarray(R_s)
    a_bar = np.asarray(a_bar)
    if R_s.shape[1] != a_bar.shape[0]:
        raise ValueError(f"shape mismatch {R_s.shape} vs {a_bar.shape}")
    a = R_s @ a_bar
    nrm = np.linalg.norm(a)
    scale = np.linalg.norm(R_s) * np.linalg.norm(a_bar)
    if nrm == 0 or nrm <= 1e-14 * scale:
        raise ValueError("steering-vector estimate vanished (R_s annihilates a_bar)")
    if normalize:
        a = a * (np.sqrt(a.size) / nrm)
    return a


def capon_weights(R_ipn, sv) -> np.ndarray:
    """MVDR weights ``R^-1 a / (a^H R^-1 a)``; raises :class:`ConditioningError`."""
    sv = np.asarray(sv, dtype=complex)
    Ra = hermitian_solve(R_ipn, sv)
    return Ra / np.vdot(sv, Ra)


@dataclass(frozen=True)
class SinrReport:
    output_sinr_db: float
    optimal_sinr_db: float

    @property
    def deviation_db(self) -> float:
        return self.optimal_sinr_db - self.output_sinr_db


def sinr_quotient(w, R_s, R_ipn) -> float:
    """``w^H R_s w / w^H R_ipn w`` (linear)."""
    w = np.asarray(w)
    return float(np.real(np.vdot(w, R_s @ w)) / np.real(np.vdot(w, R_ipn @ w)))


def optimal_sinr(truth) -> float:
    """
    Best achievable output SINR (linear).

    Point sources: ``sigma_s^2 a_s^H R_ipn^-1 a_s``. Otherwise the largest
    generalized eigenvalue of ``(R_s, R_ipn)``.
    """
    if truth.soi_sv is not None:
        a = truth.soi_sv
        return float(truth.sigma_s2 * np.real(np.vdot(a, hermitian_solve(truth.R_ipn, a))))
    return float(la.eigh(hermitian(truth.R_s), hermitian(truth.R_ipn), eigvals_only=True)[-1])


def optimal_weights(truth) -> np.ndarray:
    """Weights attaining :func:`optimal_sinr` (up to scale)."""
    if truth.soi_sv is not None:
        return capon_weights(truth.R_ipn, truth.soi_sv)
    _, vecs = la.eigh(hermitian(truth.R_s), hermitian(truth.R_ipn))
    return vecs[:, -1]


def output_sinr(w, truth, optimal: float = None) -> SinrReport:
    """
    Score weights against a trial's true statistics.

    ``optimal`` (linear) may be passed to avoid recomputing it per method.
    """
    w = np.asarray(w)
    if truth.soi_sv is not None:
        a = truth.soi_sv
        sinr = truth.sigma_s2 * abs(np.vdot(w, a)) ** 2 / np.real(np.vdot(w, truth.R_ipn @ w))
    else:
        sinr = sinr_quotient(w, truth.R_s, truth.R_ipn)
    if optimal is None:
        optimal = optimal_sinr(truth)
    return SinrReport(output_sinr_db=float(to_db(sinr)), optimal_sinr_db=float(to_db(optimal)))


def predicted_sinr_loss(epsilon: float, phi: float, optimal_sinr: float) -> float:
    """
    Second-order prediction of the SINR reached with the DSCM-based
    steering-vector estimate: ``optimal * (1 - epsilon^2 phi^2 / 12)``.

    ``phi`` is the electrical look error in radians. A warning is issued
    outside the small-parameter regime (``epsilon >= 0.5`` or
    ``|phi| >= 0.2``).
    """
    if epsilon >= 0.5 or abs(phi) >= 0.2:
        warnings.warn(
            f"loss expansion not valid for epsilon={epsilon:.3g}, phi={phi:.3g}",
            RuntimeWarning,
            stacklevel=2,
        )
    return optimal_sinr * (1.0 - epsilon**2 * phi**2 / 12.0)


def epsilon_model(n_s_bins: int, n_dft: int, snr_linear: float) -> float:
    """Residual-noise to signal ratio ``N_s / (N_DFT * SNR)``."""
    if not 0 < n_s_bins < n_dft:
        raise ValueError(f"need 0 < n_s_bins < n_dft, got {n_s_bins}, {n_dft}")
    if snr_linear <= 0:
        raise ValueError("snr must be positive")
    return n_s_bins / (n_dft * snr_linear)


@dataclass
class RecDftResult:
    weights: np.ndarray
    R_ipn: np.ndarray
    R_s: np.ndarray
    sv: np.ndarray
    loaded: bool


def rec_dft(R_hat, a_bar, grid: AngularGrid, lag_window: str = "bartlett") -> RecDftResult:
    """
    Full REC-DFT beamformer: NPICM reconstruction, DSCM, steering-vector
    estimate and Capon weights.
    """
    R_hat = hermitian(R_hat)
    R_ipn, info = reconstruct_npicm(R_hat, grid, lag_window=lag_window, return_info=True)
    R_s = dscm(R_hat, R_ipn)
    sv = estimate_sv(R_s, a_bar)
    w = capon_weights(R_ipn, sv)
    return RecDftResult(weights=w, R_ipn=R_ipn, R_s=R_s, sv=sv, loaded=info.loaded)
