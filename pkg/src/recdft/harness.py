"""
Seeded Monte Carlo sweeps and CSV emission.

Trial ``t`` draws from its own substream seeded by ``(master_seed, t)``; the
same substream is reused at every axis point, so curves are computed with
common random numbers, and results do not depend on how trials are spread
over worker processes.
"""

from __future__ import annotations

import csv
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .array_model import electrical_angle, steering_vector, synthesize_trial
from .baselines import capon_grid, capon_rec, smi_mvdr
from .beamformer import (
    optimal_sinr,
    optimal_weights,
    output_sinr,
    rec_dft,
)
from .config import ScenarioConfig
from .covariance import sample_covariance
from .spectrum import build_grid

__all__ = [
    "CSV_HEADER",
    "TrialRecord",
    "CellStats",
    "SweepResult",
    "trial_rng",
    "run_trial",
    "run_sweep",
    "emit_csv",
    "emit_trials_csv",
]

log = logging.getLogger(__name__)

CSV_HEADER = ("axis", "beamformer", "mean_sinr_db", "mean_dev_db", "std_db", "n_ok", "n_failed")


@dataclass(frozen=True)
class TrialRecord:
    axis_value: float
    trial: int
    method: str
    sinr_db: float
    optimal_db: float
    ok: bool
    error: str = ""
    loaded: bool = False
    clipped: bool = False

    @property
    def deviation_db(self) -> float:
        return self.optimal_db - self.sinr_db


@dataclass(frozen=True)
class CellStats:
    """
    Summary of one (axis value, beamformer) cell over its successful trials.

    ``mean_sinr_db`` is the mean of linear SINR, expressed in dB.
    ``mean_dev_db`` is the mean of per-trial ``optimal - achieved`` in dB and
    ``std_db`` the population std of per-trial SINR in dB.
    """

    mean_sinr_db: float
    mean_dev_db: float
    std_db: float
    n_ok: int
    n_failed: int

    @classmethod
    def from_records(cls, records: List[TrialRecord]) -> "CellStats":
        ok = [r for r in records if r.ok]
        n_failed = len(records) - len(ok)
        if not ok:
            return cls(np.nan, np.nan, np.nan, 0, n_failed)
        sinr_db = np.array([r.sinr_db for r in ok])
        dev_db = np.array([r.deviation_db for r in ok])
        # mean SINR is averaged in linear power, deviation per trial in dB
        mean_lin = np.mean(10.0 ** (sinr_db / 10.0))
        return cls(
            mean_sinr_db=float(10.0 * np.log10(mean_lin)),
            mean_dev_db=float(dev_db.mean()),
            std_db=float(sinr_db.std()),
            n_ok=len(ok),
            n_failed=n_failed,
        )


@dataclass
class SweepResult:
    axis: str
    axis_values: Tuple
    methods: Tuple[str, ...]
    cells: Dict[Tuple[float, str], CellStats] = field(default_factory=dict)
    records: List[TrialRecord] = field(default_factory=list)
    name: str = "sweep"

    def series(self, method: str, stat: str = "mean_sinr_db") -> np.ndarray:
        return np.array([getattr(self.cells[(v, method)], stat) for v in self.axis_values])

    @property
    def n_loaded(self) -> int:
        return sum(r.loaded for r in self.records)


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def _weights(method, cfg, R_hat, a_bar, grids, truth):
    if method == "rec_dft":
        res = rec_dft(R_hat, a_bar, grids["dft"], lag_window=cfg.lag_window)
        return res.weights, res.loaded
    if method == "rec_dft_raw":
        res = rec_dft(R_hat, a_bar, grids["dft"], lag_window="none")
        return res.weights, res.loaded
    if method == "smi":
        return smi_mvdr(R_hat, a_bar, cfg.smi_loading), False
    if method == "capon_rec":
        return capon_rec(R_hat, a_bar, grids["capon"], cfg.capon_loading), False
    if method == "optimal":
        return optimal_weights(truth), False
    raise ValueError(f"unknown method {method!r}")


def _grids(cfg, n_dft):
    with warnings.catch_warnings():
        # the default n_dft=38 is below 2N-1 on purpose
        warnings.simplefilter("ignore", UserWarning)
        return {
            "dft": build_grid(n_dft, cfg.soi_sector, cfg.n_sensors, cfg.grid_convention),
            "capon": capon_grid(cfg.capon_points, cfg.soi_sector, cfg.n_sensors),
        }


def run_trial(cfg: ScenarioConfig, axis_value, trial: int) -> List[TrialRecord]:
    """Synthesize one trial at one axis point and score every configured method."""
    p = cfg.point(axis_value)
    rng = trial_rng(cfg.master_seed, trial)
    batch = synthesize_trial(
        n_sensors=cfg.n_sensors,
        soi_doa_deg=cfg.soi_doa_deg,
        interferer_doas_deg=cfg.interferer_doas_deg,
        inr_db=cfg.inr_db,
        snr_db=p["snr_db"],
        n_snapshots=int(p["snapshots"]),
        mismatch=cfg.mismatch,
        rng=rng,
    )
    truth = batch.truth
    R_hat = sample_covariance(batch.samples)
    a_bar = steering_vector(electrical_angle(cfg.soi_doa_deg), cfg.n_sensors)
    grids = _grids(cfg, int(p["n_dft"]))
    opt = optimal_sinr(truth)
    opt_db = float(10.0 * np.log10(opt))

    out = []
    for method in cfg.methods:
        try:
            w, loaded = _weights(method, cfg, R_hat, a_bar, grids, truth)
            report = output_sinr(w, truth, optimal=opt)
            if not np.isfinite(report.output_sinr_db):
                raise FloatingPointError("non-finite output SINR")
            out.append(TrialRecord(axis_value, trial, method, report.output_sinr_db, opt_db,
                                   True, loaded=loaded, clipped=truth.clipped))
        except (np.linalg.LinAlgError, ValueError, FloatingPointError) as exc:
            out.append(TrialRecord(axis_value, trial, method, np.nan, opt_db, False,
                                   error=f"{type(exc).__name__}: {exc}", clipped=truth.clipped))
    return out


def _run_trial_star(args):
    return run_trial(*args)


def run_sweep(cfg: ScenarioConfig, workers: Optional[int] = None, trial_order=None) -> SweepResult:
    """
    Run every trial at every axis point of ``cfg``.

    Parameters
    ----------
    workers : int, optional
        Process count; defaults to ``cfg.workers``.
    trial_order : sequence of int, optional
        Permutation of ``range(n_trials)`` to execute trials in; the result
        is identical for every order.
    """
    workers = cfg.workers if workers is None else workers
    order = list(range(cfg.n_trials)) if trial_order is None else list(trial_order)
    if sorted(order) != list(range(cfg.n_trials)):
        raise ValueError("trial_order must be a permutation of range(n_trials)")
    jobs = [(cfg, v, t) for v in cfg.axis_values for t in order]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_run_trial_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [_run_trial_star(j) for j in jobs]

    records = sorted((r for c in chunks for r in c), key=lambda r: (cfg.axis_values.index(r.axis_value), r.trial, r.method))
    result = SweepResult(axis=cfg.axis, axis_values=tuple(cfg.axis_values), methods=tuple(cfg.methods),
                         records=records, name=cfg.name)
    for v in cfg.axis_values:
        for m in cfg.methods:
            cell = [r for r in records if r.axis_value == v and r.method == m]
            result.cells[(v, m)] = CellStats.from_records(cell)
            if result.cells[(v, m)].n_failed:
                log.warning("%s @ %s=%s: %d failed trials", m, cfg.axis, v, result.cells[(v, m)].n_failed)
    return result


def _g(x) -> str:
    return f"{x:.6g}"


def emit_csv(result: SweepResult, path) -> None:
    """
    Write one row per (axis value, beamformer), sorted by axis value then
    beamformer name. Floats carry 6 significant digits.
    """
    rows = sorted(result.cells.items(), key=lambda kv: (float(kv[0][0]), kv[0][1]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for (axis_value, method), c in rows:
            w.writerow([_g(axis_value), method, _g(c.mean_sinr_db), _g(c.mean_dev_db),
                        _g(c.std_db), c.n_ok, c.n_failed])


def emit_trials_csv(result: SweepResult, path) -> None:
    """Per-trial records, so other averaging conventions can be recomputed."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("axis", "trial", "beamformer", "sinr_db", "optimal_db", "ok", "loaded", "clipped", "error"))
        for r in result.records:
            w.writerow([_g(r.axis_value), r.trial, r.method, _g(r.sinr_db), _g(r.optimal_db),
                        int(r.ok), int(r.loaded), int(r.clipped), r.error])
