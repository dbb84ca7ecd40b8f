from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .config import SolverSettings, resolve
from .errors import CapacityError, DimensionError, DomainError, InapplicableError, PreconditionError
from .landscape import WeightProfile, ground_states, weight_profile
from .models import Bitstring, Model, Pair, check_permutation, permute_model

LOG = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


@dataclass(frozen=True)
class InteractionGraph:
    n: int
    edges: FrozenSet[Pair]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def missing_edges(self) -> List[Pair]:
        return [(j, k) for j in range(self.n) for k in range(j + 1, self.n) if (j, k) not in self.edges]

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for j, k in self.edges:
            deg[j] += 1
            deg[k] += 1
        return deg

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "edges": len(self.edges),
            "complete": self.is_complete,
            "missing_edges": [list(e) for e in self.missing_edges()],
            "degrees": self.degrees(),
        }


def interaction_graph(model: Model) -> InteractionGraph:
    """Edge (j, k) for each nonzero quadratic coefficient."""
    return InteractionGraph(n=model.n, edges=frozenset(p for p, v in model.quadratic.items() if v != 0))


@dataclass(frozen=True)
class ZeroWitness:
    """Bitstring of weight r +- 1 whose value is <= 0 (== 0 when the model is nonnegative)."""

    bits: Bitstring
    value: Fraction
    nonnegative: bool
    missing_edge: Pair

    def to_dict(self) -> Dict[str, object]:
        return {
            "witness": str(self.bits),
            "weight": self.bits.weight,
            "value": str(self.value),
            "nonnegative": self.nonnegative,
            "missing_edge": list(self.missing_edge),
        }


def sparse_zero_witness(
    model: Model,
    r: int,
    jobs: int = 1,
    settings: Optional[SolverSettings] = None,
    profile: Optional[WeightProfile] = None,
) -> ZeroWitness:
    """
    A model vanishing on the weight-r class with a missing interaction edge
    cannot separate that class: some string of weight r-1 or r+1 has value <= 0.
    """
    n = model.n
    if not 1 <= r <= n - 1:
        raise DomainError(f"Target weight r={r} must satisfy 1 <= r <= n-1 (n={n})")
    graph = interaction_graph(model)
    if graph.is_complete:
        raise InapplicableError("Interaction graph is complete; no missing edge to exploit")
    if profile is None:
        profile = weight_profile(model, jobs=jobs, settings=settings)
    elif profile.n != n:
        raise DimensionError(f"Profile covers n={profile.n}, model has n={n}")
    if profile.minima[r] != 0 or profile.maxima[r] != 0:
        raise PreconditionError(
            f"Model does not vanish on every weight-{r} string "
            f"(min={profile.minima[r]}, max={profile.maxima[r]})"
        )
    adjacent = [w for w in (r - 1, r + 1) if 0 <= w <= n]
    best = min(adjacent, key=lambda w: (profile.minima[w], profile.witnesses[w].mask))
    nonnegative = min(profile.minima) >= 0
    value = profile.minima[best]
    if value > 0:
        # a missing edge forces some adjacent value <= 0 when the class vanishes
        raise PreconditionError(f"Adjacent classes stay positive ({value}); model is not quadratic?")
    LOG.debug("Zero witness %s value=%s (nonnegative=%s)", profile.witnesses[best], value, nonnegative)
    return ZeroWitness(
        bits=profile.witnesses[best],
        value=value,
        nonnegative=nonnegative,
        missing_edge=graph.missing_edges()[0],
    )


def _compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply p, then q."""
    return tuple(q[i] for i in p)


@dataclass(frozen=True)
class PermutationGroupSpec:
    """Permutation group on {0..n-1} given by generators in one-line notation."""

    n: int
    generators: Tuple[Permutation, ...]
    symmetric: bool = False
    _closure: List[Permutation] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(check_permutation(g, self.n) for g in self.generators)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def full_symmetric(cls, n: int) -> "PermutationGroupSpec":
        """S_n from a transposition and an n-cycle."""
        if n < 1:
            raise DomainError(f"Group degree must be positive, got {n}")
        gens: List[Permutation] = []
        if n >= 2:
            gens.append((1, 0) + tuple(range(2, n)))
        if n >= 3:
            gens.append(tuple((i + 1) % n for i in range(n)))
        return cls(n=n, generators=tuple(gens), symmetric=True)

    @classmethod
    def trivial(cls, n: int) -> "PermutationGroupSpec":
        return cls(n=n, generators=())

    def order_hint(self) -> Optional[int]:
        return math.factorial(self.n) if self.symmetric else None

    def closure(self, settings: Optional[SolverSettings] = None) -> List[Permutation]:
        """All group elements by breadth-first products of generators."""
        if self._closure:
            return list(self._closure)
        settings = resolve(settings)
        limit = settings.max_group_order
        if self.symmetric and math.factorial(self.n) > limit:
            raise CapacityError(f"S_{self.n} has {math.factorial(self.n)} elements (limit {limit})")
        identity = tuple(range(self.n))
        seen = {identity}
        elements = [identity]
        queue = deque([identity])
        while queue:
            current = queue.popleft()
            for g in self.generators:
                nxt = _compose(current, g)
                if nxt not in seen:
                    seen.add(nxt)
                    elements.append(nxt)
                    if len(elements) > limit:
                        raise CapacityError(f"Group closure exceeds {limit} elements")
                    queue.append(nxt)
        self._closure.extend(elements)
        return elements

    def to_dict(self) -> Dict[str, object]:
        if self.symmetric:
            return {"n": self.n, "generators": "S_n"}
        return {"n": self.n, "generators": [list(g) for g in self.generators]}


def _check_degree(model: Model, group: PermutationGroupSpec) -> None:
    if group.n != model.n:
        raise DimensionError(f"Group acts on {group.n} indices, model has n={model.n}")


def symmetrize(
    model: Model, group: PermutationGroupSpec, settings: Optional[SolverSettings] = None
) -> Model:
    """Group average (1/|G|) sum_g g.H; the offset is left unchanged."""
    _check_degree(model, group)
    n = model.n
    if group.symmetric:
        mean_linear = sum(model.linear, Fraction(0)) / n
        n_pairs = n * (n - 1) // 2
        mean_quad = sum(model.quadratic.values(), Fraction(0)) / n_pairs if n_pairs else Fraction(0)
        quadratic = {pair: mean_quad for pair in model.pairs()}
        return model.replace(linear=(mean_linear,) * n, quadratic=quadratic)

    elements = group.closure(settings)
    linear = [Fraction(0)] * n
    quadratic: Dict[Pair, Fraction] = {}
    for g in elements:
        moved = permute_model(model, g)
        for j, v in enumerate(moved.linear):
            linear[j] += v
        for pair, v in moved.quadratic.items():
            quadratic[pair] = quadratic.get(pair, Fraction(0)) + v
    order = len(elements)
    return model.replace(
        linear=tuple(v / order for v in linear),
        quadratic={pair: v / order for pair, v in quadratic.items()},
    )


def is_invariant(model: Model, group: PermutationGroupSpec) -> bool:
    """Coefficients unchanged by every generator."""
    _check_degree(model, group)
    return all(permute_model(model, g) == model for g in group.generators)


def permute_masks(masks: np.ndarray, perm: Sequence[int], n: int) -> np.ndarray:
    """Move bit position j to position perm[j] (position 0 is the top bit)."""
    out = np.zeros_like(masks)
    for j, target in enumerate(perm):
        out |= ((masks >> (n - 1 - j)) & 1) << (n - 1 - target)
    return out


def check_ground_invariance(
    model: Model,
    group: PermutationGroupSpec,
    jobs: int = 1,
    settings: Optional[SolverSettings] = None,
) -> bool:
    """True iff every generator maps the exact ground set onto itself."""
    _check_degree(model, group)
    ground = np.sort(ground_states(model, jobs=jobs, settings=settings))
    for g in group.generators:
        moved = np.sort(permute_masks(ground, g, model.n))
        if not np.array_equal(moved, ground):
            return False
    return True
