"""
Uniform linear array model: steering vectors, mismatch models and snapshot
synthesis.

Angles come in two flavours. Physical angles ``phi`` (degrees) are measured
from broadside; electrical angles ``theta = pi * sin(phi)`` (radians) assume
half-wavelength spacing. Steering vectors use the ``exp(-j n theta)`` phase
convention throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "MISMATCH_KINDS",
    "MismatchModel",
    "TrialGeometry",
    "TrialTruth",
    "SnapshotBatch",
    "electrical_angle",
    "physical_angle",
    "steering_vector",
    "steering_matrix",
    "apply_mismatch",
    "synthesize_trial",
    "db_to_linear",
]

MISMATCH_KINDS = (
    "none",
    "random_look_direction",
    "incoherent_scattering",
    "wavefront_distortion",
    "coherent_scattering",
)

# DoAs are kept strictly inside the visible region.
_DOA_LIMIT_DEG = 90.0 - 1e-9


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def electrical_angle(phi_deg):
    """Map physical angle(s) in degrees to electrical angle(s) ``pi*sin(phi)``."""
    return np.pi * np.sin(np.deg2rad(phi_deg))


def physical_angle(theta):
    """Inverse of :func:`electrical_angle`, in degrees."""
    return np.rad2deg(np.arcsin(np.clip(np.asarray(theta) / np.pi, -1.0, 1.0)))


def steering_vector(theta: float, n_sensors: int) -> np.ndarray:
    """
    Ideal ULA steering vector.

    Parameters
    ----------
    theta : float
        Electrical angle in radians.
    n_sensors : int
        Number of array elements, at least 2.

    Returns
    -------
    a : ndarray, shape (n_sensors,)
        ``a[n] = exp(-1j * n * theta)``.
    """
    if n_sensors < 2:
        raise ValueError(f"n_sensors must be >= 2, got {n_sensors}")
    return np.exp(-1j * np.arange(n_sensors) * theta)


def steering_matrix(thetas, n_sensors: int) -> np.ndarray:
    """Steering vectors for several electrical angles stacked as columns."""
    if n_sensors < 2:
        raise ValueError(f"n_sensors must be >= 2, got {n_sensors}")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    return np.exp(-1j * np.outer(np.arange(n_sensors), thetas))


@dataclass(frozen=True)
class MismatchModel:
    """
    Steering-vector / DoA mismatch applied per Monte Carlo trial.

    ``look_halfwidth_deg`` is used by ``random_look_direction``;
    ``n_paths`` and ``path_std_deg`` by both scattering kinds;
    ``phase_std`` (radians) by ``wavefront_distortion``.
    """

    kind: str = "none"
    look_halfwidth_deg: float = 4.0
    n_paths: int = 4
    path_std_deg: float = 2.0
    phase_std: float = 0.04

    def __post_init__(self):
        if self.kind not in MISMATCH_KINDS:
            raise ValueError(
                f"unknown mismatch kind {self.kind!r}; expected one of {MISMATCH_KINDS}"
            )
        for name in ("look_halfwidth_deg", "path_std_deg", "phase_std"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if self.n_paths < 0:
            raise ValueError(f"n_paths must be >= 0, got {self.n_paths}")


@dataclass
class TrialGeometry:
    """
    Per-trial source geometry, nominal or after mismatch.

    ``soi_sv`` is the actual desired-signal steering vector (possibly
    non-ideal). ``scatter_svs`` holds the extra incoherent paths, one per
    column, and is ``None`` for point sources.
    """

    n_sensors: int
    soi_doa_deg: float
    interferer_doas_deg: np.ndarray
    soi_sv: np.ndarray
    scatter_svs: Optional[np.ndarray] = None
    clipped: bool = False

    @classmethod
    def nominal(cls, n_sensors, soi_doa_deg, interferer_doas_deg):
        return cls(
            n_sensors=n_sensors,
            soi_doa_deg=float(soi_doa_deg),
            interferer_doas_deg=np.asarray(interferer_doas_deg, dtype=float),
            soi_sv=steering_vector(electrical_angle(soi_doa_deg), n_sensors),
        )

    @property
    def interferer_svs(self) -> np.ndarray:
        return steering_matrix(electrical_angle(self.interferer_doas_deg), self.n_sensors)


@dataclass
class TrialTruth:
    """Actual second-order statistics of one trial, used for scoring."""

    R_s: np.ndarray
    R_ipn: np.ndarray
    sigma_s2: float
    sigma_l2: np.ndarray
    sigma_n2: float
    soi_sv: Optional[np.ndarray]
    geometry: TrialGeometry

    @property
    def rank_one(self) -> bool:
        return self.soi_sv is not None

    @property
    def clipped(self) -> bool:
        return self.geometry.clipped


@dataclass
class SnapshotBatch:
    samples: np.ndarray  # (N, K)
    truth: TrialTruth

    @property
    def n_sensors(self) -> int:
        return self.samples.shape[0]

    @property
    def n_snapshots(self) -> int:
        return self.samples.shape[1]


def _clip_doas(doas):
    doas = np.asarray(doas, dtype=float)
    clipped = np.clip(doas, -_DOA_LIMIT_DEG, _DOA_LIMIT_DEG)
    return clipped, bool(np.any(clipped != doas))


def apply_mismatch(
    model: MismatchModel, nominal: TrialGeometry, rng: np.random.Generator
) -> TrialGeometry:
    """
    Draw one trial's mismatched geometry from ``nominal``.

    All random quantities are drawn here, once per trial, so they stay fixed
    across the snapshots of that trial.
    """
    n = nominal.n_sensors
    kind = model.kind
    if kind == "none":
        return TrialGeometry(
            n_sensors=n,
            soi_doa_deg=nominal.soi_doa_deg,
            interferer_doas_deg=nominal.interferer_doas_deg.copy(),
            soi_sv=nominal.soi_sv.copy(),
            scatter_svs=None if nominal.scatter_svs is None else nominal.scatter_svs.copy(),
            clipped=nominal.clipped,
        )

    if kind == "random_look_direction":
        hw = model.look_halfwidth_deg
        soi = nominal.soi_doa_deg + rng.uniform(-hw, hw)
        intf = nominal.interferer_doas_deg + rng.uniform(-hw, hw, nominal.interferer_doas_deg.size)
        (soi,), c1 = _clip_doas([soi])
        intf, c2 = _clip_doas(intf)
        return TrialGeometry(
            n_sensors=n,
            soi_doa_deg=float(soi),
            interferer_doas_deg=intf,
            soi_sv=steering_vector(electrical_angle(soi), n),
            clipped=nominal.clipped or c1 or c2,
        )

    if kind == "wavefront_distortion":
        # element 0 is the phase reference; increments accumulate along the array
        increments = rng.normal(0.0, model.phase_std, n - 1) if model.phase_std > 0 else np.zeros(n - 1)
        phase = np.concatenate([[0.0], np.cumsum(increments)])
        return TrialGeometry(
            n_sensors=n,
            soi_doa_deg=nominal.soi_doa_deg,
            interferer_doas_deg=nominal.interferer_doas_deg.copy(),
            soi_sv=nominal.soi_sv * np.exp(1j * phase),
            clipped=nominal.clipped,
        )

    # scattering kinds share the path-angle law
    path_doas = nominal.soi_doa_deg + rng.normal(0.0, 1.0, model.n_paths) * model.path_std_deg
    path_doas, c = _clip_doas(path_doas)
    paths = steering_matrix(electrical_angle(path_doas), n)

    if kind == "incoherent_scattering":
        return TrialGeometry(
            n_sensors=n,
            soi_doa_deg=nominal.soi_doa_deg,
            interferer_doas_deg=nominal.interferer_doas_deg.copy(),
            soi_sv=nominal.soi_sv.copy(),
            scatter_svs=paths,
            clipped=nominal.clipped or c,
        )

    # coherent_scattering
    phases = rng.uniform(0.0, 2 * np.pi, model.n_paths)
    sv = nominal.soi_sv + paths @ np.exp(1j * phases)
    return TrialGeometry(
        n_sensors=n,
        soi_doa_deg=nominal.soi_doa_deg,
        interferer_doas_deg=nominal.interferer_doas_deg.copy(),
        soi_sv=sv,
        clipped=nominal.clipped or c,
    )


def _cgauss(rng, shape):
    """Unit-variance circular complex Gaussian samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def synthesize_trial(
    n_sensors: int,
    soi_doa_deg: float,
    interferer_doas_deg: Sequence[float],
    inr_db: Sequence[float],
    snr_db: Optional[float],
    n_snapshots: int,
    mismatch: MismatchModel,
    rng: np.random.Generator,
    sigma_n2: float = 1.0,
) -> SnapshotBatch:
    """
    Draw one Monte Carlo trial.

    Mismatch parameters are drawn first, then the waveforms in a fixed order
    (desired, scatter paths, interferers, noise); each source is drawn as a
    unit-variance stream and scaled afterwards, so runs with the same
    seed at different SNRs share their random draws.

    ``snr_db=None`` removes the desired signal. Powers are per sensor and
    relative to ``sigma_n2``; for scattered sources the SNR counts all paths.
    """
    if n_snapshots < 1:
        raise ValueError(f"n_snapshots must be >= 1, got {n_snapshots}")
    interferer_doas_deg = np.asarray(interferer_doas_deg, dtype=float)
    inr_db = np.broadcast_to(np.asarray(inr_db, dtype=float), interferer_doas_deg.shape)
    for d in np.concatenate([[soi_doa_deg], interferer_doas_deg]):
        if not -90.0 < d < 90.0:
            raise ValueError(f"DoA {d} deg outside (-90, 90)")

    nominal = TrialGeometry.nominal(n_sensors, soi_doa_deg, interferer_doas_deg)
    geom = apply_mismatch(mismatch, nominal, rng)

    K = n_snapshots
    sigma_s2 = 0.0 if snr_db is None else float(db_to_linear(snr_db)) * sigma_n2
    sigma_l2 = db_to_linear(inr_db) * sigma_n2
    n_scatter = 0 if geom.scatter_svs is None else geom.scatter_svs.shape[1]

    s0 = _cgauss(rng, K)
    s_scatter = _cgauss(rng, (n_scatter, K))
    s_intf = _cgauss(rng, (interferer_doas_deg.size, K))
    noise = _cgauss(rng, (n_sensors, K))

    A_l = geom.interferer_svs
    R_ipn = (A_l * sigma_l2) @ A_l.conj().T + sigma_n2 * np.eye(n_sensors)
    x_l = A_l @ (np.sqrt(sigma_l2)[:, None] * s_intf)

    if geom.scatter_svs is not None:
        # equal power per path, total sigma_s2
        paths = np.column_stack([geom.soi_sv, geom.scatter_svs])
        p = sigma_s2 / paths.shape[1]
        x_s = np.sqrt(p) * (paths @ np.vstack([s0, s_scatter]))
        R_s = p * paths @ paths.conj().T
        soi_sv = None
        sigma_s2_eff = sigma_s2
    else:
        sv = geom.soi_sv
        # SNR is counted over the whole (possibly non-ideal) signature
        sigma_s2_eff = sigma_s2 * n_sensors / np.real(np.vdot(sv, sv))
        x_s = np.sqrt(sigma_s2_eff) * np.outer(sv, s0)
        R_s = sigma_s2_eff * np.outer(sv, sv.conj())
        soi_sv = sv

    samples = x_s + x_l + np.sqrt(sigma_n2) * noise
    truth = TrialTruth(
        R_s=R_s,
        R_ipn=R_ipn,
        sigma_s2=float(sigma_s2_eff),
        sigma_l2=sigma_l2,
        sigma_n2=float(sigma_n2),
        soi_sv=soi_sv,
        geometry=geom,
    )
    return SnapshotBatch(samples=samples, truth=truth)
