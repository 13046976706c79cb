"""
Scenario configuration, built-in presets and the INI-style config file.

A config file has up to five sections::

    [scenario]      name, n_sensors, soi_doa_deg, interferer_doas_deg, inr_db
    [mismatch]      kind, look_halfwidth_deg, n_paths, path_std_deg, phase_std
    [sweep]         axis, snr_db, snapshots, n_dft, n_trials, master_seed, workers
    [beamformers]   methods, soi_sector_halfwidth_deg, lag_window,
                    grid_convention, smi_loading, capon_points, capon_loading
    [output]        dir

Lists are comma separated; ``start:stop:step`` expands to an inclusive
range. See ``configs/`` in the repository for complete examples.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import numpy as np

from .array_model import MismatchModel
from .spectrum import GRID_CONVENTIONS, LAG_WINDOWS

__all__ = [
    "AXES",
    "METHODS",
    "ConfigError",
    "ScenarioConfig",
    "PRESETS",
    "preset",
    "load_config",
    "parse_config",
    "dump_config",
]

AXES = ("snr", "snapshots", "n_dft")
METHODS = ("rec_dft", "rec_dft_raw", "smi", "capon_rec", "optimal")


class ConfigError(ValueError):
    def __init__(self, message, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "custom"
    n_sensors: int = 30
    soi_doa_deg: float = 0.0
    interferer_doas_deg: Tuple[float, ...] = (40.0, -50.0)
    inr_db: Tuple[float, ...] = (30.0, 30.0)
    mismatch: MismatchModel = field(default_factory=MismatchModel)
    axis: str = "snr"
    snr_db: Tuple[float, ...] = tuple(float(v) for v in range(-30, 31, 5))
    snapshots: Tuple[int, ...] = (30,)
    n_dft: Tuple[int, ...] = (38,)
    n_trials: int = 100
    master_seed: int = 1
    workers: int = 1
    methods: Tuple[str, ...] = ("rec_dft", "smi", "capon_rec", "optimal")
    soi_sector_halfwidth_deg: float = 4.0
    lag_window: str = "bartlett"
    grid_convention: str = "electrical"
    smi_loading: float = 10.0
    capon_points: int = 300
    capon_loading: float = 1.0
    output_dir: str = "results"

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.n_sensors < 2:
            raise ConfigError(f"n_sensors must be >= 2, got {self.n_sensors}")
        if len(self.interferer_doas_deg) != len(self.inr_db):
            raise ConfigError("interferer_doas_deg and inr_db must have the same length")
        for d in (self.soi_doa_deg, *self.interferer_doas_deg):
            if not -90.0 < d < 90.0:
                raise ConfigError(f"DoA {d} deg outside (-90, 90)")
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        for name in ("snr_db", "snapshots", "n_dft"):
            values = getattr(self, name)
            if len(values) == 0:
                raise ConfigError(f"{name} is empty")
            if name != self._axis_field and len(values) != 1:
                raise ConfigError(f"{name} must be a single value when axis={self.axis}")
        if min(self.snapshots) < 1:
            raise ConfigError("snapshots must be >= 1")
        for q in self.n_dft:
            if q % 2 or q < self.n_sensors:
                raise ConfigError(f"n_dft must be even and >= n_sensors, got {q}")
        if self.n_trials < 1:
            raise ConfigError("n_trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.methods:
            raise ConfigError("methods is empty")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown beamformer {m!r}; expected one of {METHODS}")
        hw = self.soi_sector_halfwidth_deg
        if not hw > 0:
            raise ConfigError("soi_sector_halfwidth_deg must be > 0")
        if not -90.0 < self.soi_doa_deg - hw <= self.soi_doa_deg + hw < 90.0:
            raise ConfigError("SOI sector must lie inside (-90, 90)")
        if self.lag_window not in LAG_WINDOWS:
            raise ConfigError(f"lag_window must be one of {LAG_WINDOWS}")
        if self.grid_convention not in GRID_CONVENTIONS:
            raise ConfigError(f"grid_convention must be one of {GRID_CONVENTIONS}")
        if self.smi_loading < 0 or self.capon_loading < 0:
            raise ConfigError("loading levels must be >= 0")
        if self.capon_points < self.n_sensors or self.capon_points % 2:
            raise ConfigError("capon_points must be even and >= n_sensors")

    @property
    def _axis_field(self) -> str:
        return {"snr": "snr_db", "snapshots": "snapshots", "n_dft": "n_dft"}[self.axis]

    @property
    def axis_values(self) -> Tuple:
        return getattr(self, self._axis_field)

    @property
    def soi_sector(self) -> Tuple[float, float]:
        hw = self.soi_sector_halfwidth_deg
        return (self.soi_doa_deg - hw, self.soi_doa_deg + hw)

    def point(self, value) -> Dict:
        """Concrete ``snr_db``, ``snapshots`` and ``n_dft`` at one axis value."""
        p = {"snr_db": self.snr_db[0], "snapshots": self.snapshots[0], "n_dft": self.n_dft[0]}
        p[self._axis_field] = value
        return p


_K_SWEEP = tuple(range(10, 101, 10))

PRESETS: Dict[str, ScenarioConfig] = {
    "random-look": ScenarioConfig(
        name="random-look",
        mismatch=MismatchModel("random_look_direction", look_halfwidth_deg=4.0),
    ),
    "incoherent": ScenarioConfig(
        name="incoherent",
        mismatch=MismatchModel("incoherent_scattering", n_paths=4, path_std_deg=2.0),
    ),
    "wavefront": ScenarioConfig(
        name="wavefront",
        mismatch=MismatchModel("wavefront_distortion", phase_std=0.04),
    ),
    "coherent": ScenarioConfig(
        name="coherent",
        mismatch=MismatchModel("coherent_scattering", n_paths=4, path_std_deg=2.0),
    ),
}


def preset(name: str, axis: str = "snr", **overrides) -> ScenarioConfig:
    """
    Built-in scenario by name. ``axis="snapshots"`` switches to the
    ``K = 10..100`` sweep at 10 dB SNR.
    """
    try:
        cfg = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}") from None
    if axis == "snapshots":
        cfg = replace(cfg, axis="snapshots", snr_db=(10.0,), snapshots=_K_SWEEP)
    elif axis == "n_dft":
        cfg = replace(cfg, axis="n_dft", snr_db=(10.0,), n_dft=(38, 64, 128))
    elif axis != "snr":
        raise ConfigError(f"axis must be one of {AXES}")
    return replace(cfg, **overrides) if overrides else cfg


# -- file format -------------------------------------------------------------

_FLOAT_LIST = "floats"
_INT_LIST = "ints"
_SCHEMA = {
    "scenario": {
        "name": ("name", str),
        "n_sensors": ("n_sensors", int),
        "soi_doa_deg": ("soi_doa_deg", float),
        "interferer_doas_deg": ("interferer_doas_deg", _FLOAT_LIST),
        "inr_db": ("inr_db", _FLOAT_LIST),
    },
    "mismatch": {
        "kind": ("kind", str),
        "look_halfwidth_deg": ("look_halfwidth_deg", float),
        "n_paths": ("n_paths", int),
        "path_std_deg": ("path_std_deg", float),
        "phase_std": ("phase_std", float),
    },
    "sweep": {
        "axis": ("axis", str),
        "snr_db": ("snr_db", _FLOAT_LIST),
        "snapshots": ("snapshots", _INT_LIST),
        "n_dft": ("n_dft", _INT_LIST),
        "n_trials": ("n_trials", int),
        "master_seed": ("master_seed", int),
        "workers": ("workers", int),
    },
    "beamformers": {
        "methods": ("methods", "names"),
        "soi_sector_halfwidth_deg": ("soi_sector_halfwidth_deg", float),
        "lag_window": ("lag_window", str),
        "grid_convention": ("grid_convention", str),
        "smi_loading": ("smi_loading", float),
        "capon_points": ("capon_points", int),
        "capon_loading": ("capon_loading", float),
    },
    "output": {
        "dir": ("output_dir", str),
    },
}


def _expand(text: str, kind):
    out = []
    for item in (s.strip() for s in text.split(",")):
        if not item:
            continue
        if ":" in item:
            parts = [float(p) for p in item.split(":")]
            if len(parts) != 3 or parts[2] == 0:
                raise ValueError(f"bad range {item!r}; expected start:stop:step")
            start, stop, step = parts
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            if n < 1:
                raise ValueError(f"empty range {item!r}")
            out.extend(start + step * np.arange(n))
        else:
            out.append(float(item))
    if kind == _INT_LIST:
        ints = [int(round(v)) for v in out]
        if any(abs(i - v) > 1e-9 for i, v in zip(ints, out)):
            raise ValueError("expected integers")
        return tuple(ints)
    return tuple(float(v) for v in out)


def _convert(text: str, kind):
    if kind in (_FLOAT_LIST, _INT_LIST):
        return _expand(text, kind)
    if kind == "names":
        return tuple(s.strip() for s in text.split(",") if s.strip())
    if kind is int:
        return int(text)
    if kind is float:
        return float(text)
    return text.strip()


def _line_index(text: str):
    """Map (section, key) and section names to 1-based line numbers."""
    where = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            where.setdefault((section, None), no)
            continue
        m = re.match(r"([^=:]+)[=:]", line)
        if m and section is not None:
            where.setdefault((section, m.group(1).strip().lower()), no)
    return where


def parse_config(text: str, base: Optional[ScenarioConfig] = None) -> ScenarioConfig:
    """
    Parse config-file text into a :class:`ScenarioConfig`.

    Keys missing from the file keep their value from ``base`` (the defaults
    when ``base`` is None). Errors carry the offending line number.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        # subclass of ParsingError, so it has to be caught first
        raise ConfigError("key outside of any [section]", exc.lineno) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", line) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(exc.message if hasattr(exc, "message") else str(exc), exc.lineno) from None

    where = _line_index(text)
    base = base or ScenarioConfig()
    values = {}
    mismatch = {}
    last_line = None
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]", where.get((section, None)))
        for key, raw in parser.items(section):
            line = where.get((section, key))
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]", line)
            target, kind = _SCHEMA[section][key]
            try:
                value = _convert(raw, kind)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}", line) from None
            (mismatch if section == "mismatch" else values)[target] = (value, line)
            last_line = line

    try:
        mm = replace(base.mismatch, **{k: v for k, (v, _) in mismatch.items()})
    except (ValueError, TypeError) as exc:
        line = mismatch.get("kind", (None, None))[1]
        raise ConfigError(str(exc), line) from None
    try:
        return replace(base, mismatch=mm, **{k: v for k, (v, _) in values.items()})
    except ConfigError as exc:
        line = _guess_line(str(exc), values) or last_line
        raise ConfigError(str(exc), line) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), last_line) from None


def _guess_line(message, values):
    # the key named first in the message is the one being complained about
    hits = [(message.find(key), line) for key, (_, line) in values.items() if key in message]
    return min(hits)[1] if hits else None


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt(v):
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    if isinstance(v, float):
        return f"{v:g}"
    return str(v)


def dump_config(cfg: ScenarioConfig) -> str:
    """Render ``cfg`` in the config-file format (round-trips through :func:`parse_config`)."""
    lines = []
    for section, keys in _SCHEMA.items():
        lines.append(f"[{section}]")
        for key, (target, _) in keys.items():
            src = cfg.mismatch if section == "mismatch" else cfg
            lines.append(f"{key} = {_fmt(getattr(src, target))}")
        lines.append("")
    return "\n".join(lines)
