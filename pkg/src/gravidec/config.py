"""Run configuration: defaults, config-file grammar, env and flag overrides.

The config file is flat sectioned ``key = value`` text::

    # comment
    [physical]
    sigma0_m = 1e-9
    dx_m = 1e-9

    [spectrum]
    model = exponential
    pc_inv_m = 1e9

Precedence, lowest to highest: built-in defaults, config file, environment
variables, command-line flags. Environment overrides use the prefix
``GRAVIDEC_`` with uppercase underscore-joined section and key, e.g.
``GRAVIDEC_PHYSICAL_DX_M=2e-9`` or ``GRAVIDEC_RUN_SEED=7``.

The fully resolved configuration is echoed into every output so a run can
be reproduced from its own artifact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .decoherence import (
    PAPER_ELECTRON_DX,
    PAPER_ELECTRON_I0V,
    PAPER_ELECTRON_PC,
    PAPER_ELECTRON_SIGMA0,
)
from .units import CODATA

ENV_PREFIX = "GRAVIDEC_"


class ConfigError(ValueError):
    """Malformed configuration file, flag, or environment override."""


@dataclass(frozen=True)
class RunConfig:
    # [physical]
    m_f_kg: float = CODATA.m_e
    sigma0_m: float = PAPER_ELECTRON_SIGMA0
    dx_m: float = PAPER_ELECTRON_DX
    volume_m3: float = 1.0
    # [spectrum] - defaults reproduce the paper-electron calibration.
    model: str = "exponential"
    i0: float = PAPER_ELECTRON_I0V
    pc_inv_m: float = PAPER_ELECTRON_PC
    csv_path: str = ""
    # [kernel]
    mode: str = "normalized"
    # [tolerances]
    rel_tol: float = 1e-8
    # [run]
    seed: int = 20240601
    horizon_s: float = 1.0
    tau0_s: float = -1.0       # negative means stationary (no window)
    threads: int = 1
    # [output]
    path: str = "-"
    format: str = "json"


# (section, key) -> dataclass field; key name conventions carry the unit.
_SECTIONS: dict[tuple[str, str], str] = {
    ("physical", "m_f_kg"): "m_f_kg",
    ("physical", "sigma0_m"): "sigma0_m",
    ("physical", "dx_m"): "dx_m",
    ("physical", "volume_m3"): "volume_m3",
    ("spectrum", "model"): "model",
    ("spectrum", "i0"): "i0",
    ("spectrum", "pc_inv_m"): "pc_inv_m",
    ("spectrum", "csv_path"): "csv_path",
    ("kernel", "mode"): "mode",
    ("tolerances", "rel_tol"): "rel_tol",
    ("run", "seed"): "seed",
    ("run", "horizon_s"): "horizon_s",
    ("run", "tau0_s"): "tau0_s",
    ("run", "threads"): "threads",
    ("output", "path"): "path",
    ("output", "format"): "format",
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(attr: str, raw: str):
    kind = _FIELD_TYPES[attr]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"cannot parse {raw!r} as {kind} for {attr}") from None


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse the sectioned key=value grammar on top of ``base``."""
    cfg = base or RunConfig()
    section = None
    updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if section is None:
            raise ConfigError(f"line {lineno}: key {key!r} before any [section]")
        attr = _SECTIONS.get((section, key))
        if attr is None:
            raise ConfigError(f"line {lineno}: unknown key [{section}] {key}")
        updates[attr] = _convert(attr, raw)
    return replace(cfg, **updates)


def parse_config_file(path: str, base: RunConfig | None = None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text, base)


def apply_env(cfg: RunConfig, environ=None) -> RunConfig:
    """Apply GRAVIDEC_SECTION_KEY environment overrides."""
    environ = os.environ if environ is None else environ
    updates = {}
    for (section, key), attr in _SECTIONS.items():
        name = f"{ENV_PREFIX}{section.upper()}_{key.upper()}"
        if name in environ:
            updates[attr] = _convert(attr, environ[name])
    return replace(cfg, **updates) if updates else cfg


def resolve(config_path: str | None = None, environ=None, **flag_overrides) -> RunConfig:
    """Defaults -> file -> environment -> flags, in that order."""
    cfg = RunConfig()
    if config_path:
        cfg = parse_config_file(config_path, cfg)
    cfg = apply_env(cfg, environ)
    updates = {k: v for k, v in flag_overrides.items() if v is not None}
    if updates:
        cfg = replace(cfg, **updates)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if cfg.model not in ("exponential", "tabulated"):
        raise ConfigError(f"unknown spectrum model {cfg.model!r}")
    if cfg.model == "tabulated" and not cfg.csv_path:
        raise ConfigError("tabulated spectrum needs [spectrum] csv_path")
    if cfg.mode not in ("normalized", "raw"):
        raise ConfigError(f"unknown kernel mode {cfg.mode!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"unknown output format {cfg.format!r}")
    if not (1e-13 <= cfg.rel_tol <= 1e-2):
        raise ConfigError(f"rel_tol {cfg.rel_tol} outside [1e-13, 1e-2]")
    if cfg.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {cfg.threads}")
    for name in ("m_f_kg", "sigma0_m", "volume_m3", "pc_inv_m", "horizon_s"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive, got {getattr(cfg, name)}")
    if cfg.dx_m < 0:
        raise ConfigError(f"dx_m must be nonnegative, got {cfg.dx_m}")
    if cfg.i0 < 0:
        raise ConfigError(f"i0 must be nonnegative, got {cfg.i0}")


def echo(cfg: RunConfig) -> dict:
    """Resolved config as a section -> key -> value mapping, for output."""
    out: dict[str, dict] = {}
    for (section, key), attr in _SECTIONS.items():
        out.setdefault(section, {})[key] = getattr(cfg, attr)
    return out


def to_text(cfg: RunConfig) -> str:
    """Render a config in the file grammar (round-trips through the parser)."""
    lines = []
    sections = echo(cfg)
    for section in sections:
        lines.append(f"[{section}]")
        for key, value in sections[section].items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)
