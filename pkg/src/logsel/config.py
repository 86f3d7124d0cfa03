"""Run configuration and the flat ``key = value`` config-file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from datetime import date
from pathlib import Path
from typing import Any, Mapping

from .errors import UsageError


@dataclass(frozen=True)
class RunConfig:
    """Every knob of a pipeline run.

    ``fraction`` and ``target_count`` default to 20% and 40 features.  The
    remaining defaults are choices of this toolkit: ``k`` for KNN, the
    ``window`` (days) within which a top-scoring day before the replacement
    still counts as a detection, sample-vs-population ``ddof``, tau variant,
    aggregation over sensor positions, and the redundancy threshold ``rho``.
    """

    logs: str | None = None
    sensors: str | None = None
    labels: str | None = None
    out: str = "out"
    machine: str | None = None
    robot: str = "Load"
    span_start: date | None = None
    span_end: date | None = None
    fraction: float = 0.20
    target_count: int = 40
    rho: float = 0.8
    k: int = 5
    window: int = 14
    ddof: int = 1
    tau_variant: str = "b"
    aggregate: str = "max"
    redundancy_basis: str = "scores"
    n_positions: int | None = None
    strict: bool = False
    selection: str | None = None
    seed: int = 0

    @property
    def span(self) -> tuple[date, date] | None:
        if self.span_start is None and self.span_end is None:
            return None
        return (self.span_start, self.span_end)

    def replace(self, **changes: Any) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v.isoformat() if isinstance(v, date) else v
        return out


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def coerce(key: str, raw: Any) -> Any:
    """Convert a string (or passthrough value) to the field's type."""
    if key not in _FIELD_TYPES:
        raise UsageError(f"unknown config key {key!r}")
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    kind = _FIELD_TYPES[key]
    if text.lower() in ("", "none", "null") and "None" in kind:
        return None
    try:
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            return float(text)
        if kind.startswith("bool"):
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind.startswith("date"):
            return date.fromisoformat(text)
    except ValueError:
        raise UsageError(f"bad value for {key}: {raw!r}") from None
    return text


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = coerce(key, value)
    return values


def resolve_config(
    flags: Mapping[str, Any] | None = None,
    config_file: str | Path | None = None,
    base: RunConfig | None = None,
) -> RunConfig:
    """Merge with precedence flags > config file > defaults.

    ``flags`` entries whose value is None are treated as unset.
    """
    merged: dict[str, Any] = {}
    if config_file is not None:
        merged.update(read_config_file(config_file))
    for key, value in (flags or {}).items():
        if value is not None:
            merged[key] = coerce(key, value)
    cfg = (base or RunConfig()).replace(**merged)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if not 0.0 < cfg.fraction <= 1.0:
        raise UsageError(f"fraction must be in (0, 1], got {cfg.fraction}")
    if cfg.target_count < 1:
        raise UsageError("target_count must be >= 1")
    if not 0.0 < cfg.rho <= 1.0:
        raise UsageError(f"rho must be in (0, 1], got {cfg.rho}")
    if cfg.k < 1:
        raise UsageError("k must be >= 1")
    if cfg.window < 0:
        raise UsageError("window must be >= 0")
    if cfg.ddof not in (0, 1):
        raise UsageError("ddof must be 0 or 1")
    if cfg.tau_variant not in ("a", "b"):
        raise UsageError("tau_variant must be 'a' or 'b'")
    if cfg.aggregate not in ("max", "mean"):
        raise UsageError("aggregate must be 'max' or 'mean'")
    if cfg.redundancy_basis not in ("scores", "counts"):
        raise UsageError("redundancy_basis must be 'scores' or 'counts'")
    if cfg.robot.lower() not in ("load", "unload"):
        raise UsageError(f"robot must be Load or Unload, got {cfg.robot!r}")
    if (cfg.span_start is None) != (cfg.span_end is None):
        raise UsageError("span_start and span_end must be given together")
    if cfg.span_start is not None and cfg.span_end < cfg.span_start:
        raise UsageError("span_end precedes span_start")
