"""Run configuration: a flat ``section.key = value`` text file.

Lines starting with ``#`` are comments.  Lists are comma separated.  Unknown
keys are rejected so typos surface as usage errors.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .interface import DetectorSpec, FilterSpec


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(x) for x in text.split(","))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, tuple):
        return ",".join(_fmt(v) for v in x)
    return str(x)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "auto", "none") else float(text)


def _optional_floats(text: str) -> tuple[float, ...] | None:
    return None if text.strip().lower() in ("auto", "none") else _floats(text)


@dataclass(frozen=True)
class RunConfig:
    detector: DetectorSpec = field(default_factory=DetectorSpec)
    filter: FilterSpec = field(default_factory=FilterSpec)
    # phase scan / visibility
    scan_beta: float = 0.15
    scan_gamma: float = 100.0  # dark rate of the interference experiment's detectors
    scan_alpha0: float | None = None  # None: tuned to scan_peak_rate
    scan_peak_rate: float = 1e4
    scan_n_phi: int = 360
    scan_phis: tuple[float, ...] | None = None
    vis_betas: tuple[float, ...] = (0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0, 1.2, 1.5, 2.0)
    vis_first_order_only: bool = False
    # tomography
    tomo_duration: float = 10.0
    tomo_seed: int = 0
    tomo_alpha0: float = 0.15
    tomo_beta: float = 0.15
    tomo_v_phase_offset: float = 0.0
    # key rate
    losses_db: tuple[float, ...] = tuple(float(x) for x in range(0, 61, 5))
    key_alpha0: float = 0.5
    key_beta: float = 0.5
    f_ec: float = 1.25
    opt_alpha0_max: float = 4.0
    opt_beta_max: float = 1.5
    opt_grid: int = 32
    opt_warm_start: bool = True
    # output
    out_dir: str = "out"
    out_format: str = "csv"

    def __post_init__(self):
        if self.out_format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.out_format!r}")
        if any(x < 0 for x in self.losses_db):
            raise ConfigError("losses must be >= 0 dB")
        if any(b < 0 for b in self.vis_betas) or self.scan_beta < 0:
            raise ConfigError("modulation depths must be >= 0")
        if self.scan_gamma < 0:
            raise ConfigError("dark count rate must be >= 0")
        if self.tomo_duration <= 0:
            raise ConfigError("tomography duration must be positive")
        if self.scan_n_phi < 1:
            raise ConfigError("scan.n_phi must be >= 1")
        for name in ("scan_alpha0", "key_alpha0", "key_beta", "tomo_alpha0", "tomo_beta", "f_ec"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ConfigError(f"{name} must be finite")

    def phis(self) -> list[float]:
        if self.scan_phis is not None:
            return list(self.scan_phis)
        return [2 * math.pi * k / self.scan_n_phi for k in range(self.scan_n_phi)]


# dotted key -> (attribute path, parser)
_KEYS = {
    "detector.epsilon": (("detector", "epsilon"), float),
    "detector.gamma": (("detector", "gamma"), float),
    "detector.dt": (("detector", "dt"), float),
    "detector.T": (("detector", "T"), float),
    "filter.r": (("filter", "r"), float),
    "filter.rho": (("filter", "rho"), float),
    "scan.beta": (("scan_beta",), float),
    "scan.gamma": (("scan_gamma",), float),
    "scan.alpha0": (("scan_alpha0",), _optional_float),
    "scan.peak_rate": (("scan_peak_rate",), float),
    "scan.n_phi": (("scan_n_phi",), int),
    "scan.phis": (("scan_phis",), _optional_floats),
    "visibility.betas": (("vis_betas",), _floats),
    "visibility.first_order_only": (("vis_first_order_only",), _bool),
    "tomography.duration": (("tomo_duration",), float),
    "tomography.seed": (("tomo_seed",), int),
    "tomography.alpha0": (("tomo_alpha0",), float),
    "tomography.beta": (("tomo_beta",), float),
    "tomography.v_phase_offset": (("tomo_v_phase_offset",), float),
    "keyrate.losses_db": (("losses_db",), _floats),
    "keyrate.alpha0": (("key_alpha0",), float),
    "keyrate.beta": (("key_beta",), float),
    "keyrate.f_ec": (("f_ec",), float),
    "optimize.alpha0_max": (("opt_alpha0_max",), float),
    "optimize.beta_max": (("opt_beta_max",), float),
    "optimize.grid": (("opt_grid",), int),
    "optimize.warm_start": (("opt_warm_start",), _bool),
    "output.dir": (("out_dir",), str),
    "output.format": (("out_format",), str),
}


def _get(cfg: RunConfig, path):
    obj = cfg
    for p in path:
        obj = getattr(obj, p)
    return obj


def apply_overrides(cfg: RunConfig, values: dict[str, str]) -> RunConfig:
    """Return ``cfg`` with dotted-key string values parsed and applied."""
    top: dict = {}
    nested: dict[str, dict] = {}
    for key, raw in values.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        path, parse = _KEYS[key]
        try:
            value = parse(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from None
        if len(path) == 2:
            nested.setdefault(path[0], {})[path[1]] = value
        else:
            top[path[0]] = value
    try:
        for name, fields in nested.items():
            top[name] = dataclasses.replace(getattr(cfg, name), **fields)
        return dataclasses.replace(cfg, **top)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return apply_overrides(base or RunConfig(), values)


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text())


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for key, (path, _) in _KEYS.items():
        value = _get(cfg, path)
        if value is None:
            value = "auto"
        lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"
