from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import DimensionError, DomainError

Rational = Fraction
Pair = Tuple[int, int]
RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, bool):
        raise DomainError(f"Not a rational coefficient: {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class Bitstring:
    """Fixed-length bit sequence; position 0 is the leftmost character."""

    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DomainError(f"Bitstring entries must be 0 or 1: {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "Bitstring":
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise DomainError(f"Not a bitstring: {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def zeros(cls, n: int) -> "Bitstring":
        return cls((0,) * n)

    @classmethod
    def basis(cls, n: int, j: int) -> "Bitstring":
        """delta_j: one at position j, zero elsewhere."""
        if not 0 <= j < n:
            raise DomainError(f"Basis index {j} outside 0..{n - 1}")
        return cls(tuple(1 if i == j else 0 for i in range(n)))

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Bitstring":
        return cls(tuple((mask >> (n - 1 - j)) & 1 for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def mask(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def support(self) -> Tuple[int, ...]:
        return tuple(j for j, b in enumerate(self.bits) if b)

    def complement(self) -> "Bitstring":
        return Bitstring(tuple(1 - b for b in self.bits))

    def spins(self) -> Tuple[int, ...]:
        return tuple(2 * b - 1 for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def _normalize_pairs(n: int, entries: Mapping[Pair, RationalLike]) -> Dict[Pair, Fraction]:
    out: Dict[Pair, Fraction] = {}
    for key, value in entries.items():
        j, k = (int(key[0]), int(key[1]))
        if not 0 <= j < k < n:
            raise DimensionError(f"Quadratic key {key} must satisfy 0 <= j < k < {n}")
        value = as_rational(value)
        if value != 0:
            out[(j, k)] = value
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class QuadraticModel:
    """Shared storage for both model kinds; zero couplings are never stored."""

    n: int
    offset: Fraction = Fraction(0)
    linear: Tuple[Fraction, ...] = ()
    quadratic: Dict[Pair, Fraction] = field(default_factory=dict)

    kind: ClassVar[str] = ""

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise DomainError(f"Model needs at least one variable, got n={n}")
        linear = tuple(as_rational(v) for v in self.linear) if self.linear else (Fraction(0),) * n
        if len(linear) != n:
            raise DimensionError(f"Expected {n} linear coefficients, got {len(linear)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "offset", as_rational(self.offset))
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quadratic", _normalize_pairs(n, self.quadratic))

    def coupling(self, j: int, k: int) -> Fraction:
        if j > k:
            j, k = k, j
        return self.quadratic.get((j, k), Fraction(0))

    def pairs(self) -> Iterable[Pair]:
        n = self.n
        return ((j, k) for j in range(n) for k in range(j + 1, n))

    def is_constant(self) -> bool:
        return not self.quadratic and all(v == 0 for v in self.linear)

    def replace(self, **changes) -> "QuadraticModel":
        data = {"n": self.n, "offset": self.offset, "linear": self.linear, "quadratic": self.quadratic}
        data.update(changes)
        return type(self)(**data)


@dataclass(frozen=True)
class Qubo(QuadraticModel):
    kind: ClassVar[str] = "qubo"


@dataclass(frozen=True)
class IsingModel(QuadraticModel):
    kind: ClassVar[str] = "ising"

    @property
    def biases(self) -> Tuple[Fraction, ...]:
        return self.linear

    @property
    def couplings(self) -> Dict[Pair, Fraction]:
        return self.quadratic


Model = Union[Qubo, IsingModel]


def _as_bits(model: QuadraticModel, assignment: Union[Bitstring, Sequence[int], str]) -> Tuple[int, ...]:
    if isinstance(assignment, str):
        bits = Bitstring.parse(assignment).bits
    elif isinstance(assignment, Bitstring):
        bits = assignment.bits
    else:
        bits = Bitstring(tuple(assignment)).bits
    if len(bits) != model.n:
        raise DimensionError(f"Assignment of length {len(bits)} for a model on n={model.n} variables")
    return bits


def evaluate(model: Model, assignment: Union[Bitstring, Sequence[int], str]) -> Fraction:
    """Exact objective value; Ising models read bit b as spin 2b - 1."""
    bits = _as_bits(model, assignment)
    if isinstance(model, IsingModel):
        vals = tuple(2 * b - 1 for b in bits)
    else:
        vals = bits
    total = model.offset
    for j, coef in enumerate(model.linear):
        if vals[j]:
            total += coef * vals[j]
    for (j, k), coef in model.quadratic.items():
        prod = vals[j] * vals[k]
        if prod:
            total += coef * prod
    return total


def qubo_to_ising(q: Qubo) -> IsingModel:
    """Substitute x = (s + 1) / 2."""
    n = q.n
    row_sums = [Fraction(0)] * n
    for (j, k), c in q.quadratic.items():
        row_sums[j] += c
        row_sums[k] += c
    biases = tuple(q.linear[j] / 2 + row_sums[j] / 4 for j in range(n))
    couplings = {pair: c / 4 for pair, c in q.quadratic.items()}
    offset = q.offset + sum(q.linear, Fraction(0)) / 2 + sum(q.quadratic.values(), Fraction(0)) / 4
    return IsingModel(n=n, offset=offset, linear=biases, quadratic=couplings)


def ising_to_qubo(m: IsingModel) -> Qubo:
    """Substitute s = 2x - 1."""
    n = m.n
    row_sums = [Fraction(0)] * n
    for (j, k), J in m.quadratic.items():
        row_sums[j] += J
        row_sums[k] += J
    linear = tuple(2 * m.linear[j] - 2 * row_sums[j] for j in range(n))
    quadratic = {pair: 4 * J for pair, J in m.quadratic.items()}
    offset = m.offset - sum(m.linear, Fraction(0)) + sum(m.quadratic.values(), Fraction(0))
    return Qubo(n=n, offset=offset, linear=linear, quadratic=quadratic)


def convert(model: Model) -> Model:
    return qubo_to_ising(model) if isinstance(model, Qubo) else ising_to_qubo(model)


def check_permutation(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise DimensionError(f"{list(perm)} is not a permutation of 0..{n - 1}")
    return perm


def permute_model(model: Model, perm: Sequence[int]) -> Model:
    """g.H: the coefficient on index j moves to index perm[j]; offset unchanged."""
    perm = check_permutation(perm, model.n)
    linear = [Fraction(0)] * model.n
    for j, coef in enumerate(model.linear):
        linear[perm[j]] = coef
    quadratic: Dict[Pair, Fraction] = {}
    for (j, k), coef in model.quadratic.items():
        a, b = perm[j], perm[k]
        quadratic[(min(a, b), max(a, b))] = coef
    return model.replace(linear=tuple(linear), quadratic=quadratic)


def complement_qubo(q: Qubo) -> Qubo:
    """QUBO of x -> Q(1 - x)."""
    n = q.n
    row_sums = [Fraction(0)] * n
    for (j, k), c in q.quadratic.items():
        row_sums[j] += c
        row_sums[k] += c
    offset = q.offset + sum(q.linear, Fraction(0)) + sum(q.quadratic.values(), Fraction(0))
    linear = tuple(-q.linear[j] - row_sums[j] for j in range(n))
    return Qubo(n=n, offset=offset, linear=linear, quadratic=dict(q.quadratic))


def zero_model(kind: str, n: int) -> Model:
    return Qubo(n=n) if kind == "qubo" else IsingModel(n=n)
