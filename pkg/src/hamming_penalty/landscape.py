from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .config import SolverSettings, resolve
from .errors import CapacityError, DomainError, NoGapError
from .models import Bitstring, IsingModel, Model

LOG = logging.getLogger(__name__)

INT64_SAFE = 2**62


@dataclass(frozen=True)
class IntegerForm:
    """Model scaled to integer coefficients: value = (offset + ...) / denominator."""

    n: int
    spin: bool
    denominator: int
    offset: object
    linear: np.ndarray
    upper: np.ndarray


def integer_form(model: Model) -> IntegerForm:
    coefs = [model.offset, *model.linear, *model.quadratic.values()]
    denominator = math.lcm(*(c.denominator for c in coefs))

    def scaled(c: Fraction) -> int:
        return c.numerator * (denominator // c.denominator)

    bound = sum(abs(scaled(c)) for c in coefs)
    dtype = np.int64 if bound < INT64_SAFE else object
    n = model.n
    linear = np.array([scaled(c) for c in model.linear], dtype=dtype)
    upper = np.zeros((n, n), dtype=dtype)
    for (j, k), c in model.quadratic.items():
        upper[j, k] = scaled(c)
    offset = np.int64(scaled(model.offset)) if dtype is np.int64 else scaled(model.offset)
    return IntegerForm(
        n=n,
        spin=isinstance(model, IsingModel),
        denominator=denominator,
        offset=offset,
        linear=linear,
        upper=upper,
    )


def _bits_of(masks: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return (masks[:, None] >> shifts) & 1


def _values(form: IntegerForm, masks: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    bits = _bits_of(masks, form.n)
    variables = 2 * bits - 1 if form.spin else bits
    variables = variables.astype(form.linear.dtype)
    values = form.offset + variables @ form.linear + ((variables @ form.upper) * variables).sum(axis=1)
    return values, bits.sum(axis=1)


def _check_enumerable(n: int, settings: SolverSettings) -> None:
    if n > settings.max_enumeration_bits:
        raise CapacityError(
            f"Exhaustive enumeration limited to n <= {settings.max_enumeration_bits}, got n={n}"
        )


def _chunks(n: int, settings: SolverSettings) -> List[Tuple[int, int]]:
    total = 1 << n
    size = 1 << max(0, min(settings.chunk_bits, n))
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _map_chunks(fn, args: List[tuple], jobs: int) -> list:
    if jobs <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=min(jobs, len(args))) as pool:
        return list(pool.map(fn, args))


def exact_energies(
    model: Model,
    masks: Optional[Sequence[int]] = None,
    settings: Optional[SolverSettings] = None,
) -> Tuple[np.ndarray, int]:
    """Energy numerators (in mask order) and their common denominator."""
    settings = resolve(settings)
    form = integer_form(model)
    if masks is None:
        _check_enumerable(model.n, settings)
        masks = np.arange(1 << model.n, dtype=np.int64)
    else:
        masks = np.asarray(masks, dtype=np.int64)
        if masks.size and (masks.min() < 0 or masks.max() >= (1 << model.n)):
            raise DomainError(f"Masks outside 0..2**{model.n} - 1")
    values, _ = _values(form, masks)
    return values, form.denominator


# Per weight: (min, max, count attaining min, smallest mask attaining min)
ClassStats = Tuple[int, int, int, int]


@dataclass
class _ChunkScan:
    classes: Dict[int, ClassStats]
    lowest: List[int]


def _scan_chunk(args: Tuple[IntegerForm, int, int]) -> _ChunkScan:
    form, start, stop = args
    masks = np.arange(start, stop, dtype=np.int64)
    values, weights = _values(form, masks)
    classes: Dict[int, ClassStats] = {}
    for w in np.unique(weights):
        sel = weights == w
        vals = values[sel]
        lo = vals.min()
        at_min = vals == lo
        first = masks[sel][int(np.argmax(at_min))]
        classes[int(w)] = (int(lo), int(vals.max()), int(at_min.sum()), int(first))
    lowest = [int(v) for v in np.unique(values)[:2]]
    return _ChunkScan(classes=classes, lowest=lowest)


def _merge(scans: List[_ChunkScan]) -> _ChunkScan:
    classes: Dict[int, ClassStats] = {}
    lowest: set = set()
    for scan in scans:
        lowest.update(scan.lowest)
        for w, (lo, hi, count, first) in scan.classes.items():
            if w not in classes:
                classes[w] = (lo, hi, count, first)
                continue
            plo, phi, pcount, pfirst = classes[w]
            if lo < plo:
                classes[w] = (lo, max(hi, phi), count, first)
            elif lo == plo:
                classes[w] = (lo, max(hi, phi), count + pcount, min(first, pfirst))
            else:
                classes[w] = (plo, max(hi, phi), pcount, pfirst)
    return _ChunkScan(classes=classes, lowest=sorted(lowest)[:2])


@dataclass(frozen=True)
class WeightProfile:
    """Exact per-weight-class minima with lexicographically smallest witnesses."""

    n: int
    minima: Tuple[Fraction, ...]
    witnesses: Tuple[Bitstring, ...]
    maxima: Tuple[Fraction, ...]
    minimizer_counts: Tuple[int, ...]

    def class_size(self, w: int) -> int:
        return math.comb(self.n, w)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "weight": list(range(self.n + 1)),
                "class_size": [self.class_size(w) for w in range(self.n + 1)],
                "min": [str(v) for v in self.minima],
                "max": [str(v) for v in self.maxima],
                "minimizers": list(self.minimizer_counts),
                "witness": [str(b) for b in self.witnesses],
            }
        )


@dataclass(frozen=True)
class _Scan:
    profile: WeightProfile
    lowest: Tuple[Fraction, ...]


def _scan(model: Model, jobs: int, settings: Optional[SolverSettings]) -> _Scan:
    settings = resolve(settings)
    _check_enumerable(model.n, settings)
    form = integer_form(model)
    chunks = _chunks(model.n, settings)
    LOG.debug("Scanning %d assignments in %d chunks (jobs=%d)", 1 << model.n, len(chunks), jobs)
    merged = _merge(_map_chunks(_scan_chunk, [(form, s, e) for s, e in chunks], jobs))
    den = form.denominator
    n = model.n
    stats = [merged.classes[w] for w in range(n + 1)]
    profile = WeightProfile(
        n=n,
        minima=tuple(Fraction(s[0], den) for s in stats),
        witnesses=tuple(Bitstring.from_mask(s[3], n) for s in stats),
        maxima=tuple(Fraction(s[1], den) for s in stats),
        minimizer_counts=tuple(s[2] for s in stats),
    )
    return _Scan(profile=profile, lowest=tuple(Fraction(v, den) for v in merged.lowest))


def weight_profile(
    model: Model, jobs: int = 1, settings: Optional[SolverSettings] = None
) -> WeightProfile:
    """Minimum (and maximum) value over each Hamming-weight class."""
    return _scan(model, jobs, settings).profile


@dataclass(frozen=True)
class PenaltyReport:
    target_weight: int
    ground_energy: Fraction
    ground_set_size: int
    gap: Fraction
    witness: Bitstring
    exact_penalty: bool
    profile: WeightProfile = field(repr=False, compare=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "r": self.target_weight,
            "ground_energy": str(self.ground_energy),
            "ground_set_size": self.ground_set_size,
            "gap": str(self.gap),
            "witness": str(self.witness),
            "witness_weight": self.witness.weight,
            "exact_penalty": self.exact_penalty,
        }


def _check_weight(r: int, n: int) -> None:
    if not 0 <= r <= n:
        raise DomainError(f"Target weight r={r} outside 0..{n}")


def penalty_report(profile: WeightProfile, r: int) -> PenaltyReport:
    n = profile.n
    _check_weight(r, n)
    target = profile.minima[r]
    others = [w for w in range(n + 1) if w != r]
    # ties across classes go to the lexicographically smallest witness
    best = min(others, key=lambda w: (profile.minima[w], profile.witnesses[w].mask))
    gap = profile.minima[best] - target
    ground = min(profile.minima)
    ground_set_size = sum(
        profile.minimizer_counts[w] for w in range(n + 1) if profile.minima[w] == ground
    )
    exact = gap > 0 and profile.minimizer_counts[r] == profile.class_size(r)
    return PenaltyReport(
        target_weight=r,
        ground_energy=target,
        ground_set_size=ground_set_size,
        gap=gap,
        witness=profile.witnesses[best],
        exact_penalty=exact,
        profile=profile,
    )


def min_penalty(
    model: Model, r: int, jobs: int = 1, settings: Optional[SolverSettings] = None
) -> PenaltyReport:
    """Gap between the best string of weight != r and the best string of weight r."""
    _check_weight(r, model.n)
    return penalty_report(weight_profile(model, jobs=jobs, settings=settings), r)


def spectral_gap(model: Model, jobs: int = 1, settings: Optional[SolverSettings] = None) -> Fraction:
    """Difference between the two lowest distinct energies (diagonal Hamiltonian)."""
    lowest = _scan(model, jobs, settings).lowest
    if len(lowest) < 2:
        raise NoGapError("Model is constant on every assignment; no gap exists")
    return lowest[1] - lowest[0]


def _collect_chunk(args: Tuple[IntegerForm, int, int, object]) -> np.ndarray:
    form, start, stop, target = args
    masks = np.arange(start, stop, dtype=np.int64)
    values, _ = _values(form, masks)
    return masks[values == target]


def ground_states(
    model: Model, jobs: int = 1, settings: Optional[SolverSettings] = None
) -> np.ndarray:
    """Sorted masks of all global minimizers."""
    settings = resolve(settings)
    scan = _scan(model, jobs, settings)
    form = integer_form(model)
    target = scan.lowest[0] * form.denominator
    target = int(target)
    args = [(form, s, e, target) for s, e in _chunks(model.n, settings)]
    parts = _map_chunks(_collect_chunk, args, jobs)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
