"""
DFT spatial spectrum of an ACS and Toeplitz reconstruction of the
noise-plus-interference covariance matrix (NPICM).

The pipeline in :func:`reconstruct_npicm` is::

    R_hat -> diagonal-averaged ACS -> (lag window) -> spectrum on the grid
          -> IDFT over noise-plus-interference bins -> Hermitian Toeplitz
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg as la

from .array_model import electrical_angle, physical_angle
from .covariance import acs_size, diagonal_average_acs, hermitian, lags

__all__ = [
    "GRID_CONVENTIONS",
    "LAG_WINDOWS",
    "AngularGrid",
    "AngularSpectrum",
    "NpicmDiagnostics",
    "build_grid",
    "power_spectrum",
    "ipn_correlation_sequence",
    "toeplitz_from_acs",
    "apply_lag_window",
    "reconstruct_npicm",
]

GRID_CONVENTIONS = ("electrical", "physical")
LAG_WINDOWS = ("none", "bartlett")

# relative imaginary residue tolerated in a spectrum of a conjugate-symmetric ACS
_IMAG_RTOL = 1e-9
_LOADING_RTOL = 1e-8


@dataclass(frozen=True)
class AngularGrid:
    """
    Angle bins for the DFT spectrum together with the sector masks.

    ``electrical_angles`` are the bin centres; ``physical_deg`` the matching
    arrival angles. ``soi_mask`` and ``ipn_mask`` are disjoint and together
    cover every bin.
    """

    n_sensors: int
    n_dft: int
    electrical_angles: np.ndarray
    physical_deg: np.ndarray
    soi_sector: Tuple[float, float]
    soi_mask: np.ndarray
    ipn_mask: np.ndarray
    convention: str = "electrical"

    @property
    def n_soi_bins(self) -> int:
        return int(self.soi_mask.sum())

    @property
    def n_ipn_bins(self) -> int:
        return int(self.ipn_mask.sum())


@dataclass(frozen=True)
class AngularSpectrum:
    values: np.ndarray
    grid: AngularGrid


@dataclass(frozen=True)
class NpicmDiagnostics:
    loaded: bool
    loading: float
    min_eigenvalue: float


def build_grid(
    n_dft: int,
    soi_sector,
    n_sensors: int,
    convention: str = "electrical",
) -> AngularGrid:
    """
    Build the spectrum grid and sector masks.

    Parameters
    ----------
    n_dft : int
        Number of bins; even and at least ``n_sensors``.
    soi_sector : (float, float)
        Desired-signal sector ``[lo, hi]`` in physical degrees, strictly
        inside (-90, 90). Every other bin is noise-plus-interference.
    n_sensors : int
    convention : {"electrical", "physical"}
        ``"electrical"``: ``theta_i = 2 pi i / n_dft``,
        ``i = -n_dft/2 .. n_dft/2 - 1``. ``"physical"``: physical angles
        ``-90 + i * 180 / n_dft`` deg, ``i = 0 .. n_dft - 1``, mapped to
        electrical angles.
    """
    if convention not in GRID_CONVENTIONS:
        raise ValueError(f"unknown grid convention {convention!r}")
    if n_sensors < 2:
        raise ValueError(f"n_sensors must be >= 2, got {n_sensors}")
    if n_dft % 2 or n_dft < n_sensors:
        raise ValueError(f"n_dft must be even and >= n_sensors ({n_sensors}), got {n_dft}")
    lo, hi = (float(v) for v in soi_sector)
    if hi - lo >= 180.0:
        raise ValueError(f"SOI sector [{lo}, {hi}] is 180 deg or wider")
    if not (-90.0 < lo <= hi < 90.0):
        raise ValueError(f"SOI sector [{lo}, {hi}] must lie inside (-90, 90)")
    if n_dft < 2 * n_sensors - 1:
        warnings.warn(
            f"n_dft={n_dft} < 2N-1={2 * n_sensors - 1}: the IDFT aliases the ACS lags",
            stacklevel=2,
        )

    if convention == "electrical":
        theta = 2 * np.pi * np.arange(-n_dft // 2, n_dft // 2) / n_dft
        phys = physical_angle(theta)
    else:
        phys = -90.0 + np.arange(n_dft) * 180.0 / n_dft
        theta = electrical_angle(phys)

    soi = (phys >= lo) & (phys <= hi)
    return AngularGrid(
        n_sensors=n_sensors,
        n_dft=n_dft,
        electrical_angles=theta,
        physical_deg=phys,
        soi_sector=(lo, hi),
        soi_mask=soi,
        ipn_mask=~soi,
        convention=convention,
    )


def _synthesis_matrix(thetas, n_sensors):
    # rows: angles, columns: lags; exp(-j n theta)
    return np.exp(-1j * np.outer(thetas, lags(n_sensors)))


def power_spectrum(acs, grid: AngularGrid) -> AngularSpectrum:
    """
    Sample ``P(theta) = sum_n r(n) exp(-j n theta)`` at the grid bins.

    Negative values (sidelobes of a truncated ACS) are kept.
    """
    acs = np.asarray(acs, dtype=complex)
    if acs_size(acs) != grid.n_sensors:
        raise ValueError(f"ACS length {len(acs)} does not match grid N={grid.n_sensors}")
    P = _synthesis_matrix(grid.electrical_angles, grid.n_sensors) @ acs
    resid = np.abs(P.imag).max(initial=0.0)
    if resid > _IMAG_RTOL * max(np.abs(acs).sum(), np.finfo(float).tiny):
        raise ValueError(f"spectrum is not real (residue {resid:.3g}); ACS not conjugate-symmetric")
    return AngularSpectrum(values=P.real.copy(), grid=grid)


def ipn_correlation_sequence(spectrum: AngularSpectrum, mask=None) -> np.ndarray:
    """
    Inverse DFT of the spectrum restricted to the noise-plus-interference
    bins: ``r(n) = (1/n_dft) sum_{i in ipn} P(theta_i) exp(+j n theta_i)``.

    ``mask`` overrides ``grid.ipn_mask``.
    """
    grid = spectrum.grid
    mask = grid.ipn_mask if mask is None else np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("noise-plus-interference mask selects no bins")
    th = grid.electrical_angles[mask]
    r = np.exp(1j * np.outer(lags(grid.n_sensors), th)) @ spectrum.values[mask] / grid.n_dft
    # a real spectrum gives r(-n) = conj(r(n)); enforce it exactly
    r = 0.5 * (r + r[::-1].conj())
    return r


def toeplitz_from_acs(acs) -> np.ndarray:
    """
    Hermitian Toeplitz matrix with ``T[k, k+n] = acs(n)``.

    This is the layout that :func:`~recdft.covariance.diagonal_average_acs`
    inverts exactly, and it turns ``acs(n) = exp(j n theta)`` into
    ``a(theta) a(theta)^H``.
    """
    acs = np.asarray(acs, dtype=complex)
    N = acs_size(acs)
    first_row = acs[N - 1:]          # lags 0 .. N-1
    first_col = acs[N - 1::-1]       # lags 0 .. -(N-1)
    return la.toeplitz(first_col, first_row)


def apply_lag_window(acs, kind: str = "bartlett") -> np.ndarray:
    """
    Taper an ACS before the DFT.

    ``"bartlett"`` scales lag ``n`` by ``(N-|n|)/N``; applied to diagonal
    averages this gives the biased ACS, whose spectrum is
    ``a(theta)^H R a(theta) / N`` and hence never negative.
    """
    if kind not in LAG_WINDOWS:
        raise ValueError(f"unknown lag window {kind!r}; expected one of {LAG_WINDOWS}")
    acs = np.asarray(acs, dtype=complex)
    if kind == "none":
        return acs.copy()
    N = acs_size(acs)
    return acs * (N - np.abs(lags(N))) / N


def reconstruct_npicm(
    R_hat,
    grid: AngularGrid,
    lag_window: str = "bartlett",
    return_info: bool = False,
):
    """
    Reconstruct the NPICM from a covariance estimate.

    If the smallest eigenvalue of the Toeplitz reconstruction falls below
    ``1e-8 * trace/N`` the matrix is shifted so that it equals that floor;
    the returned diagnostics record when this happened.

    Parameters
    ----------
    R_hat : ndarray, shape (N, N)
    grid : AngularGrid
    lag_window : {"bartlett", "none"}
        ``"none"`` uses the raw diagonal averages.
    return_info : bool
        Also return a :class:`NpicmDiagnostics`.
    """
    acs = apply_lag_window(diagonal_average_acs(hermitian(R_hat)), lag_window)
    spec = power_spectrum(acs, grid)
    T = toeplitz_from_acs(ipn_correlation_sequence(spec))

    N = T.shape[0]
    eig = la.eigvalsh(T)
    tr = float(np.real(np.trace(T)))
    floor = _LOADING_RTOL * (tr / N if tr > 0 else np.abs(eig).max(initial=1.0))
    loading = 0.0
    if eig[0] < floor:
        loading = floor - eig[0]
        T = T + loading * np.eye(N)
    if return_info:
        return T, NpicmDiagnostics(loaded=loading > 0, loading=float(loading), min_eigenvalue=float(eig[0]))
    return T
