from __future__ import annotations

import json
import re
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional

from .analysis import PermutationGroupSpec
from .builders import CoefficientBounds
from .errors import DimensionError, DomainError, ModelFormatError
from .models import IsingModel, Model, Pair, Qubo

RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")
SYMMETRIC_GROUP_PATTERN = re.compile(r"^S_(n|\d+)$")


class SpinConvention(str, Enum):
    """plus: bit 1 <-> spin +1 (internal). minus: bit 1 <-> spin -1."""

    PLUS = "plus"
    MINUS = "minus"


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_rational(raw: object, where: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ModelFormatError(f"{where}: expected a 'p/q' string, got {raw!r}")
    text = str(raw).strip()
    if not RATIONAL_PATTERN.match(text):
        raise ModelFormatError(f"{where}: malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ModelFormatError(f"{where}: zero denominator in {text!r}") from exc


def _flip_biases(model: Model, convention: SpinConvention) -> Model:
    if convention is SpinConvention.MINUS and isinstance(model, IsingModel):
        return model.replace(linear=tuple(-h for h in model.linear))
    return model


def model_to_dict(model: Model, convention: SpinConvention = SpinConvention.PLUS) -> Dict[str, object]:
    model = _flip_biases(model, SpinConvention(convention))
    return {
        "kind": model.kind,
        "n": model.n,
        "offset": format_rational(model.offset),
        "linear": [format_rational(v) for v in model.linear],
        "quadratic": [
            {"i": j, "j": k, "value": format_rational(v)}
            for (j, k), v in sorted(model.quadratic.items())
            if v != 0
        ],
    }


def model_to_json(model: Model, convention: SpinConvention = SpinConvention.PLUS) -> str:
    return json.dumps(model_to_dict(model, convention), indent=2) + "\n"


def _require_int(data: Mapping[str, object], key: str, where: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFormatError(f"{where}: '{key}' must be an integer, got {value!r}")
    return value


def model_from_dict(
    data: Mapping[str, object], convention: SpinConvention = SpinConvention.PLUS
) -> Model:
    if not isinstance(data, Mapping):
        raise ModelFormatError("Model file must hold a JSON object")
    missing = {"kind", "n", "offset", "linear", "quadratic"} - set(data)
    if missing:
        raise ModelFormatError(f"Model is missing fields: {sorted(missing)}")
    kind = data["kind"]
    if kind not in ("qubo", "ising"):
        raise ModelFormatError(f"Unknown model kind {kind!r}")
    n = _require_int(data, "n", "model")
    if n < 1:
        raise ModelFormatError(f"Model needs n >= 1, got {n}")
    linear_raw = data["linear"]
    if not isinstance(linear_raw, list) or len(linear_raw) != n:
        raise ModelFormatError(f"'linear' must be a list of {n} rationals")
    offset = parse_rational(data["offset"], "offset")
    linear = tuple(parse_rational(v, f"linear[{j}]") for j, v in enumerate(linear_raw))

    entries = data["quadratic"]
    if not isinstance(entries, list):
        raise ModelFormatError("'quadratic' must be a list of {i, j, value} entries")
    quadratic: Dict[Pair, Fraction] = {}
    for idx, entry in enumerate(entries):
        where = f"quadratic[{idx}]"
        if not isinstance(entry, Mapping):
            raise ModelFormatError(f"{where}: expected an object")
        i = _require_int(entry, "i", where)
        j = _require_int(entry, "j", where)
        if not 0 <= i < j < n:
            raise ModelFormatError(f"{where}: indices ({i}, {j}) must satisfy 0 <= i < j < {n}")
        if (i, j) in quadratic:
            raise ModelFormatError(f"{where}: duplicate pair ({i}, {j})")
        quadratic[(i, j)] = parse_rational(entry.get("value"), where)

    cls = Qubo if kind == "qubo" else IsingModel
    return _flip_biases(cls(n=n, offset=offset, linear=linear, quadratic=quadratic), SpinConvention(convention))


def _load_json(path: Path | str, what: str) -> object:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"Cannot read {what} file {path}: {exc}") from exc


def read_model(path: Path | str, convention: SpinConvention = SpinConvention.PLUS) -> Model:
    return model_from_dict(_load_json(path, "model"), convention)


def write_model(
    model: Model, path: Optional[Path | str], convention: SpinConvention = SpinConvention.PLUS
) -> str:
    """Serialize the model; write it to path when one is given."""
    text = model_to_json(model, convention)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text


def read_bounds(path: Path | str) -> List[CoefficientBounds]:
    return CoefficientBounds.from_json(path)


def group_from_data(data: object) -> PermutationGroupSpec:
    """{"n": 4, "generators": [[1, 0, 2, 3], ...] | "S_n"} or the bare string "S_4"."""
    if isinstance(data, str):
        match = SYMMETRIC_GROUP_PATTERN.match(data.strip())
        if not match or match.group(1) == "n":
            raise ModelFormatError(f"Group shorthand must look like 'S_4', got {data!r}")
        return PermutationGroupSpec.full_symmetric(int(match.group(1)))
    if not isinstance(data, Mapping) or "generators" not in data:
        raise ModelFormatError("Group must be an object with 'n' and 'generators'")
    n = _require_int(data, "n", "group")
    generators = data["generators"]
    if isinstance(generators, str):
        match = SYMMETRIC_GROUP_PATTERN.match(generators.strip())
        if not match or match.group(1) not in ("n", str(n)):
            raise ModelFormatError(f"Unknown group shorthand {generators!r} for n={n}")
        generators = None
    elif not isinstance(generators, list) or not all(isinstance(g, list) for g in generators):
        raise ModelFormatError("'generators' must be a list of permutations in one-line notation")
    else:
        for g in generators:
            if any(isinstance(p, bool) or not isinstance(p, int) for p in g):
                raise ModelFormatError(f"Generator {g} must list integers")
    try:
        if generators is None:
            return PermutationGroupSpec.full_symmetric(n)
        return PermutationGroupSpec(n=n, generators=tuple(tuple(g) for g in generators))
    except (DimensionError, DomainError) as exc:
        raise ModelFormatError(str(exc)) from exc


def read_group(path: Path | str) -> PermutationGroupSpec:
    return group_from_data(_load_json(path, "group"))
