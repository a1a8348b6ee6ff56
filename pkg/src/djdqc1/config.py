"""Run configuration: defaults, a key=value file, and command-line overrides."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError

CONFIG_ENV = "DJDQC1_CONFIG"
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    discord_zero: float = 1e-8
    classical_residual: float = 1e-8
    matrix_eq: float = 1e-10
    max_qubits_pure: int = 12
    max_qubits_mixed: int = 8
    format: str | None = None
    output: str | None = None

    def __post_init__(self):
        if not -(2**63) <= self.seed < 2**64:
            raise ValidationError(f"seed {self.seed} does not fit in 64 bits")
        for name in ("discord_zero", "classical_residual", "matrix_eq"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        for name in ("max_qubits_pure", "max_qubits_mixed"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")
        if self.format is not None and self.format not in FORMATS:
            raise ValidationError(f"format must be one of {FORMATS}, got {self.format!r}")

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(name: str, raw: str):
    kind = _FIELDS[name].type
    try:
        if kind == "int":
            return int(raw, 0)
        if kind == "float":
            return float(raw)
    except ValueError as exc:
        raise ValidationError(f"config key {name}: cannot parse {raw!r}") from exc
    return raw


def parse_config(text: str) -> dict:
    """Parse `key = value` lines; '#' starts a comment, blank lines are skipped."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _FIELDS:
            raise ValidationError(f"config line {lineno}: expected one of {sorted(_FIELDS)} = value")
        values[key] = _coerce(key, value)
    return values


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Defaults, overlaid with `path` or else the file named by $DJDQC1_CONFIG."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from exc
    return RunConfig(**parse_config(text))
