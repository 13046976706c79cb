"""
Reference beamformers: diagonally loaded SMI-MVDR and Capon-spectrum
NPICM reconstruction.
"""

from __future__ import annotations

import numpy as np

from .array_model import steering_matrix
from .beamformer import capon_weights, hermitian_solve
from .covariance import hermitian
from .spectrum import AngularGrid, build_grid

__all__ = [
    "smi_mvdr",
    "capon_spectrum",
    "capon_grid",
    "grid_step",
    "capon_npicm",
    "capon_rec",
]


def smi_mvdr(R_hat, a_bar, loading: float = 0.0) -> np.ndarray:
    """
    Sample-matrix-inversion MVDR weights with diagonal loading ``loading``.

    With ``loading=0`` and fewer snapshots than sensors the SCM is singular;
    :class:`~recdft.beamformer.ConditioningError` is raised and the caller
    has to pick ``loading > 0``.
    """
    if loading < 0:
        raise ValueError(f"loading must be >= 0, got {loading}")
    R = hermitian(R_hat)
    return capon_weights(R + loading * np.eye(R.shape[0]), a_bar)


def capon_spectrum(R, theta):
    """
    Capon power ``1 / (a^H R^-1 a)`` at electrical angle(s) ``theta``.

    Returns a float for scalar ``theta``, otherwise an array.
    """
    R = hermitian(R)
    scalar = np.ndim(theta) == 0
    A = steering_matrix(theta, R.shape[0])
    X = hermitian_solve(R, A)
    p = 1.0 / np.real(np.sum(A.conj() * X, axis=0))
    return float(p[0]) if scalar else p


def capon_grid(n_points: int, soi_sector, n_sensors: int) -> AngularGrid:
    """``n_points`` angles uniform in physical angle over [-90, 90)."""
    return build_grid(n_points, soi_sector, n_sensors, convention="physical")


def grid_step(grid: AngularGrid) -> np.ndarray:
    """
    Electrical-angle integration weight of every bin: ``2 pi / n_dft`` for a
    uniform electrical grid, ``pi cos(phi) dphi`` for a physical one.
    """
    if grid.convention == "electrical":
        return np.full(grid.n_dft, 2 * np.pi / grid.n_dft)
    dphi = np.pi / grid.n_dft
    return np.pi * np.cos(np.deg2rad(grid.physical_deg)) * dphi


def capon_npicm(R, grid: AngularGrid, delta_theta=None) -> np.ndarray:
    """
    NPICM as a Capon-weighted sum over the noise-plus-interference bins,
    ``sum_p a_p a_p^H / (a_p^H R^-1 a_p) * delta_theta``.

    ``delta_theta`` may be a scalar or one weight per bin; by default
    :func:`grid_step` is used.
    """
    mask = grid.ipn_mask
    if not mask.any():
        raise ValueError("noise-plus-interference mask selects no bins")
    if delta_theta is None:
        delta_theta = grid_step(grid)
    delta = np.broadcast_to(np.asarray(delta_theta, dtype=float), (grid.n_dft,))[mask]
    theta = grid.electrical_angles[mask]
    p = capon_spectrum(R, theta)
    A = steering_matrix(theta, grid.n_sensors)
    return hermitian((A * (p * delta)) @ A.conj().T)


def capon_rec(R_hat, a_bar, grid: AngularGrid, loading: float = 0.0) -> np.ndarray:
    """
    Capon weights built from the Capon-reconstructed NPICM and the presumed
    SV. ``loading`` is added to ``R_hat`` before the spectrum is evaluated.
    """
    R = hermitian(R_hat)
    return capon_weights(capon_npicm(R + loading * np.eye(R.shape[0]), grid), a_bar)
