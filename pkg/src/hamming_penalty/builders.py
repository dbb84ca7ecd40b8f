from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import DomainError, ModelFormatError, UnsupportedWeightError
from .models import IsingModel, Qubo, RationalLike, as_rational


class BoundKind(str, Enum):
    QUBO = "qubo"
    ISING = "ising"


class Binding(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    TIE = "tie"


@dataclass(frozen=True)
class CoefficientBounds:
    """
    Coefficient bound profile.

    qubo:  b_j >= -B and c_jk <= C.
    ising: -h_min <= h_j <= h_max and J_jk <= J_max (optionally J_jk >= -J_min).
    """

    kind: BoundKind
    B: Optional[Fraction] = None
    C: Optional[Fraction] = None
    h_min: Optional[Fraction] = None
    h_max: Optional[Fraction] = None
    J_max: Optional[Fraction] = None
    J_min: Optional[Fraction] = None

    def __post_init__(self):
        kind = BoundKind(self.kind)
        object.__setattr__(self, "kind", kind)
        required = ("B", "C") if kind is BoundKind.QUBO else ("h_min", "h_max", "J_max")
        optional = () if kind is BoundKind.QUBO else ("J_min",)
        for name in ("B", "C", "h_min", "h_max", "J_max", "J_min"):
            value = getattr(self, name)
            if name not in required and name not in optional:
                if value is not None:
                    raise DomainError(f"Bound {name} does not apply to {kind.value} profiles")
                continue
            if value is None:
                if name in required:
                    raise DomainError(f"{kind.value} bounds require {name}")
                continue
            value = as_rational(value)
            if value <= 0:
                raise DomainError(f"Bound {name} must be strictly positive, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def qubo(cls, B: RationalLike, C: RationalLike) -> "CoefficientBounds":
        return cls(kind=BoundKind.QUBO, B=as_rational(B), C=as_rational(C))

    @classmethod
    def ising(
        cls,
        h_min: RationalLike,
        h_max: RationalLike,
        J_max: RationalLike,
        J_min: Optional[RationalLike] = None,
    ) -> "CoefficientBounds":
        return cls(
            kind=BoundKind.ISING,
            h_min=as_rational(h_min),
            h_max=as_rational(h_max),
            J_max=as_rational(J_max),
            J_min=None if J_min is None else as_rational(J_min),
        )

    def values(self) -> Dict[str, Fraction]:
        names = ("B", "C") if self.kind is BoundKind.QUBO else ("h_min", "h_max", "J_max", "J_min")
        return {k: getattr(self, k) for k in names if getattr(self, k) is not None}

    def scaled(self, factor: RationalLike) -> "CoefficientBounds":
        factor = as_rational(factor)
        return CoefficientBounds(kind=self.kind, **{k: v * factor for k, v in self.values().items()})

    def to_dict(self) -> Dict[str, str]:
        out = {"kind": self.kind.value}
        out.update({k: str(v) for k, v in self.values().items()})
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "CoefficientBounds":
        if not isinstance(data, Mapping) or "kind" not in data:
            raise ModelFormatError("Bounds entry must be an object with a 'kind' field")
        kind = data["kind"]
        if kind not in ("qubo", "ising"):
            raise ModelFormatError(f"Unknown bounds kind {kind!r}")
        known = {"kind", "B", "C", "h_min", "h_max", "J_max", "J_min"}
        unknown = set(data) - known
        if unknown:
            raise ModelFormatError(f"Unknown bounds fields: {sorted(unknown)}")
        values = {}
        for name, raw in data.items():
            if name == "kind":
                continue
            if isinstance(raw, bool) or not isinstance(raw, (int, str)):
                raise ModelFormatError(f"Bound {name} must be an integer or 'p/q' string, got {raw!r}")
            try:
                values[name] = Fraction(raw)
            except (ValueError, ZeroDivisionError) as exc:
                raise ModelFormatError(f"Bound {name}: {exc}") from exc
        try:
            return cls(kind=BoundKind(kind), **values)
        except DomainError as exc:
            raise ModelFormatError(str(exc)) from exc

    @classmethod
    def from_json(cls, path: Path | str) -> List["CoefficientBounds"]:
        """Load one profile or a list of profiles."""
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"Cannot read bounds file {path}: {exc}") from exc
        entries = data if isinstance(data, list) else [data]
        if not entries:
            raise ModelFormatError(f"Bounds file {path} holds no profiles")
        return [cls.from_dict(entry) for entry in entries]


@dataclass(frozen=True)
class ScaleResult:
    E: Fraction
    gap: Fraction
    binding: Binding

    def to_dict(self) -> Dict[str, str]:
        return {"E": str(self.E), "gap": str(self.gap), "binding": self.binding.value}


def _check_build(n: int, r: int, E: RationalLike, min_n: int = 1) -> Fraction:
    if n < min_n:
        raise DomainError(f"Need n >= {min_n}, got n={n}")
    if not 0 <= r <= n:
        raise DomainError(f"Target weight r={r} outside 0..{n}")
    E = as_rational(E)
    if E <= 0:
        raise DomainError(f"Energy scale must be positive, got E={E}")
    return E


def _check_interior(n: int, r: int) -> None:
    if r in (0, n):
        raise UnsupportedWeightError(
            f"Optimal scale is only established for 1 <= r <= n-1 (got n={n}, r={r})"
        )
    if not 0 < r < n:
        raise DomainError(f"Target weight r={r} outside 0..{n}")


def build_qubo_hamming(n: int, r: int, E: RationalLike) -> Qubo:
    """Q_r with value E (r - |x|)^2."""
    E = _check_build(n, r, E)
    quadratic = {(j, k): 2 * E for j in range(n) for k in range(j + 1, n)}
    return Qubo(n=n, offset=r * r * E, linear=(-(2 * r - 1) * E,) * n, quadratic=quadratic)


def optimal_qubo_scale(n: int, r: int, bounds: CoefficientBounds) -> ScaleResult:
    """Largest gap of a QUBO with b_j >= -B, c_jk <= C vanishing exactly on weight r."""
    _check_interior(n, r)
    if bounds.kind is not BoundKind.QUBO:
        raise DomainError("optimal_qubo_scale needs qubo bounds")
    linear_cap = bounds.B / (2 * r - 1)
    quadratic_cap = bounds.C / 2
    if linear_cap < quadratic_cap:
        return ScaleResult(E=linear_cap, gap=linear_cap, binding=Binding.LINEAR)
    if quadratic_cap < linear_cap:
        return ScaleResult(E=quadratic_cap, gap=quadratic_cap, binding=Binding.QUADRATIC)
    return ScaleResult(E=linear_cap, gap=linear_cap, binding=Binding.TIE)


def build_ising_hamming(n: int, r: int, E: RationalLike) -> IsingModel:
    """H_r: value 2E (r - |x|)^2 under s = 2x - 1."""
    E = _check_build(n, r, E, min_n=2)
    d = n - 2 * r
    couplings = {(j, k): E for j in range(n) for k in range(j + 1, n)}
    return IsingModel(n=n, offset=E * (n + d * d) / 2, linear=(d * E,) * n, quadratic=couplings)


def alternate_ising_offset(n: int, r: int, E: RationalLike) -> Fraction:
    """
    The constant E (n/2 - 3 (n - 2r)^2 / 2) sometimes quoted for H_r.

    It differs from the exact offset E (n + (n - 2r)^2) / 2 whenever
    n != 2r, so H_r built with it does not vanish on the weight-r class.
    """
    E = as_rational(E)
    d = n - 2 * r
    return E * (Fraction(n, 2) - Fraction(3, 2) * d * d)


def optimal_ising_scale(n: int, r: int, bounds: CoefficientBounds) -> ScaleResult:
    """E for H_r under -h_min <= h_j <= h_max, J_jk <= J_max; gap is 2E."""
    _check_interior(n, r)
    if bounds.kind is not BoundKind.ISING:
        raise DomainError("optimal_ising_scale needs ising bounds")
    d = n - 2 * r
    if d == 0:
        E, binding = bounds.J_max, Binding.QUADRATIC
    else:
        # r < n/2 pushes biases up against h_max, r > n/2 down against -h_min
        bias_cap = bounds.h_max / d if d > 0 else bounds.h_min / (-d)
        if bias_cap < bounds.J_max:
            E, binding = bias_cap, Binding.LINEAR
        elif bounds.J_max < bias_cap:
            E, binding = bounds.J_max, Binding.QUADRATIC
        else:
            E, binding = bounds.J_max, Binding.TIE
    return ScaleResult(E=E, gap=2 * E, binding=binding)


def optimal_scale(n: int, r: int, bounds: CoefficientBounds) -> ScaleResult:
    if bounds.kind is BoundKind.QUBO:
        return optimal_qubo_scale(n, r, bounds)
    return optimal_ising_scale(n, r, bounds)


def build_optimal(n: int, r: int, bounds: CoefficientBounds) -> Tuple[Qubo | IsingModel, ScaleResult]:
    """Q_r or H_r at the optimal scale for the given bounds."""
    scale = optimal_scale(n, r, bounds)
    if bounds.kind is BoundKind.QUBO:
        return build_qubo_hamming(n, r, scale.E), scale
    return build_ising_hamming(n, r, scale.E), scale


def build_hamming(kind: str, n: int, r: int, E: RationalLike) -> Qubo | IsingModel:
    if kind == BoundKind.QUBO.value:
        return build_qubo_hamming(n, r, E)
    if kind == BoundKind.ISING.value:
        return build_ising_hamming(n, r, E)
    raise DomainError(f"Unknown model kind {kind!r}")


def within_bounds(model: Qubo | IsingModel, bounds: CoefficientBounds) -> bool:
    """Exact check of every coefficient slot (absent couplings count as zero)."""
    couplings = [model.coupling(j, k) for j, k in model.pairs()]
    if bounds.kind is BoundKind.QUBO:
        return all(b >= -bounds.B for b in model.linear) and all(c <= bounds.C for c in couplings)
    ok = all(-bounds.h_min <= h <= bounds.h_max for h in model.linear)
    ok = ok and all(J <= bounds.J_max for J in couplings)
    if bounds.J_min is not None:
        ok = ok and all(J >= -bounds.J_min for J in couplings)
    return ok


def symmetric_weight_values(
    kind: str, n: int, offset: Fraction, linear: Fraction, quadratic: Fraction
) -> List[Fraction]:
    """Value on each weight class of a model with all-equal biases and couplings."""
    values = []
    for w in range(n + 1):
        if kind == BoundKind.QUBO.value:
            values.append(offset + linear * w + quadratic * Fraction(w * (w - 1), 2))
        else:
            p1 = 2 * w - n
            values.append(offset + linear * p1 + quadratic * Fraction(p1 * p1 - n, 2))
    return values
