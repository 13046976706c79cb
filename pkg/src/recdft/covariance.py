"""
Sample covariance and autocorrelation-sequence (ACS) estimation.

An ACS for an ``N``-element array is stored as a length ``2N-1`` array
ordered by lag ``n = -(N-1), ..., N-1``; ``acs[N-1]`` is lag zero. Use
:func:`lag` / :func:`lags` rather than indexing by hand.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "hermitian",
    "sample_covariance",
    "diagonal_average_acs",
    "lags",
    "lag",
    "acs_size",
    "is_conjugate_symmetric",
]


def hermitian(R) -> np.ndarray:
    """Return ``(R + R^H) / 2`` as a complex array."""
    R = np.asarray(R, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {R.shape}")
    return 0.5 * (R + R.conj().T)


def sample_covariance(samples) -> np.ndarray:
    """
    Sample covariance matrix ``(1/K) sum_k x(k) x(k)^H``.

    Parameters
    ----------
    samples : array_like, shape (N, K)
        One snapshot per column. A :class:`~recdft.array_model.SnapshotBatch`
        is accepted as well.
    """
    X = getattr(samples, "samples", samples)
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] < 1:
        raise ValueError("need at least one snapshot")
    return hermitian(X @ X.conj().T / X.shape[1])


def acs_size(acs) -> int:
    """Number of sensors ``N`` that an ACS of length ``2N-1`` belongs to."""
    m = len(acs)
    if m % 2 == 0:
        raise ValueError(f"ACS length must be odd (2N-1), got {m}")
    return (m + 1) // 2


def lags(n_sensors: int) -> np.ndarray:
    return np.arange(-(n_sensors - 1), n_sensors)


def lag(acs, n: int):
    """Value of ``acs`` at lag ``n``."""
    N = acs_size(acs)
    if abs(n) > N - 1:
        raise IndexError(f"lag {n} outside +-{N - 1}")
    return acs[N - 1 + n]


def diagonal_average_acs(R) -> np.ndarray:
    """
    Estimate the ACS by averaging the diagonals of a Hermitian matrix.

    For ``n >= 0`` the value is the mean of the ``n``-th superdiagonal,
    ``mean_k R[k, k+n]``; negative lags are the conjugates, which equals the
    subdiagonal average whenever ``R`` is Hermitian.

    Returns
    -------
    acs : ndarray, shape (2N-1,)
    """
    R = np.asarray(R, dtype=complex)
    N = R.shape[0]
    if R.ndim != 2 or R.shape[1] != N:
        raise ValueError(f"expected a square matrix, got shape {R.shape}")
    if N < 2:
        raise ValueError("need N >= 2")
    pos = np.array([np.diagonal(R, offset=n).mean() for n in range(N)])
    pos[0] = pos[0].real
    return np.concatenate([pos[:0:-1].conj(), pos])


def is_conjugate_symmetric(acs, rtol: float = 1e-12) -> bool:
    acs = np.asarray(acs)
    scale = max(np.abs(acs).max(), np.finfo(float).tiny)
    return bool(np.abs(acs - acs[::-1].conj()).max() <= rtol * scale)
