from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

DEFAULT_SETTINGS_PATH = Path("data/raw/penalty_settings.json")


def _coerce(name: str, value: object, kind: type) -> int | float:
    if isinstance(value, bool):
        raise ConfigError(f"Setting {name}: expected a number, got {value!r}")
    if kind is int:
        # 1e6 is fine, 2.7 is not
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if not isinstance(value, int):
            raise ConfigError(f"Setting {name}: expected an integer, got {value!r}")
        return value
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Setting {name}: {exc}") from exc


@dataclass(frozen=True)
class SolverSettings:
    lp_tolerance: float = 1e-9
    max_enumeration_bits: int = 24
    max_lp_bits: int = 12
    max_group_order: int = 10**6
    chunk_bits: int = 16
    max_pivots: int = 200_000

    @classmethod
    def from_json(cls, path: Path | str | None) -> "SolverSettings":
        if path is None:
            return cls()
        path = Path(path)
        if not path.exists():
            return cls()
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Settings file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"Settings file {path} must hold a JSON object")
        defaults = cls()
        values = {}
        for f in fields(cls):
            default = getattr(defaults, f.name)
            values[f.name] = _coerce(f.name, data.get(f.name, default), type(default))
        return cls(**values)


DEFAULT_SETTINGS = SolverSettings()


def resolve(settings: SolverSettings | None) -> SolverSettings:
    return DEFAULT_SETTINGS if settings is None else settings
