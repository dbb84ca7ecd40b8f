from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import DomainError
from .models import IsingModel, Model, Pair, Qubo, qubo_to_ising

# Affine form c0 + sum_j c_j x_j over bit variables.
Affine = Tuple[Fraction, Tuple[Fraction, ...]]


def random_rational(rng: np.random.Generator, max_num: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(int(rng.integers(-max_num, max_num + 1)), int(rng.integers(1, max_den + 1)))


def _positive_rational(rng: np.random.Generator, max_num: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(int(rng.integers(1, max_num + 1)), int(rng.integers(1, max_den + 1)))


def random_masks(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random assignments as masks (position 0 is the top bit)."""
    return rng.integers(0, 1 << n, size=count, dtype=np.int64)


def _random_coefficients(n: int, rng: np.random.Generator, density: float, max_num: int, max_den: int):
    offset = random_rational(rng, max_num, max_den)
    linear = tuple(random_rational(rng, max_num, max_den) for _ in range(n))
    quadratic = {}
    for j in range(n):
        for k in range(j + 1, n):
            if rng.random() < density:
                quadratic[(j, k)] = random_rational(rng, max_num, max_den)
    return offset, linear, quadratic


def random_qubo(
    n: int, rng: np.random.Generator, density: float = 1.0, max_num: int = 5, max_den: int = 4
) -> Qubo:
    offset, linear, quadratic = _random_coefficients(n, rng, density, max_num, max_den)
    return Qubo(n=n, offset=offset, linear=linear, quadratic=quadratic)


def random_ising(
    n: int, rng: np.random.Generator, density: float = 1.0, max_num: int = 5, max_den: int = 4
) -> IsingModel:
    offset, linear, quadratic = _random_coefficients(n, rng, density, max_num, max_den)
    return IsingModel(n=n, offset=offset, linear=linear, quadratic=quadratic)


def _affine_product(n: int, left: Affine, right: Affine, scale: Fraction = Fraction(1)) -> Qubo:
    """scale * left(x) * right(x) as a QUBO, using x_j^2 = x_j."""
    c0, c = left
    d0, d = right
    linear = tuple(scale * (c0 * d[j] + d0 * c[j] + c[j] * d[j]) for j in range(n))
    quadratic = {
        (j, k): scale * (c[j] * d[k] + c[k] * d[j]) for j in range(n) for k in range(j + 1, n)
    }
    return Qubo(n=n, offset=scale * c0 * d0, linear=linear, quadratic=quadratic)


def add_models(first: Qubo, *rest: Qubo) -> Qubo:
    offset = first.offset
    linear = list(first.linear)
    quadratic = dict(first.quadratic)
    for model in rest:
        offset += model.offset
        for j, v in enumerate(model.linear):
            linear[j] += v
        for pair, v in model.quadratic.items():
            quadratic[pair] = quadratic.get(pair, Fraction(0)) + v
    return Qubo(n=first.n, offset=offset, linear=tuple(linear), quadratic=quadratic)


def _weight_offset(n: int, r: int) -> Affine:
    """p1 - r."""
    return Fraction(-r), (Fraction(1),) * n


def _check_family(n: int, r: int, missing: Optional[Pair]) -> Pair:
    if n < 2 or not 0 <= r <= n:
        raise DomainError(f"Need n >= 2 and 0 <= r <= n, got n={n}, r={r}")
    u, v = missing if missing is not None else (0, 1)
    if not 0 <= u < v < n:
        raise DomainError(f"Missing edge {missing} must satisfy 0 <= u < v < {n}")
    return u, v


def vanishing_with_missing_edge(
    n: int, r: int, rng: np.random.Generator, missing: Optional[Pair] = None
) -> Qubo:
    """
    mu (p1 - r)^2 + (p1 - r)(alpha + sum_j beta_j x_j) with beta_v picked so
    that c_uv = 2 mu + beta_u + beta_v = 0. Zero on the weight-r class.
    """
    u, v = _check_family(n, r, missing)
    mu = random_rational(rng)
    alpha = random_rational(rng)
    beta = [random_rational(rng) for _ in range(n)]
    beta[v] = -2 * mu - beta[u]
    q = _weight_offset(n, r)
    square = _affine_product(n, q, q, scale=mu)
    tilt = _affine_product(n, q, (alpha, tuple(beta)))
    return add_models(square, tilt)


def nonnegative_with_missing_edge(
    n: int, r: int, rng: np.random.Generator, missing: Optional[Pair] = None
) -> Qubo:
    """t (p1 - r)(p1 - x_u - x_v - r + 1), t > 0: nonnegative, zero on weight r, c_uv = 0."""
    u, v = _check_family(n, r, missing)
    t = _positive_rational(rng)
    right = tuple(Fraction(0) if j in (u, v) else Fraction(1) for j in range(n))
    return _affine_product(n, _weight_offset(n, r), (Fraction(1 - r), right), scale=t)


def zero_ground_model(n: int, r: int, rng: np.random.Generator) -> Qubo:
    """
    mu (p1 - r)^2 + (p1 - r) sum_j beta_j x_j with sum_j |beta_j| < mu.

    The minimum value 0 is attained exactly on the weight-r class, a set
    fixed by every permutation of the indices.
    """
    if n < 1 or not 0 <= r <= n:
        raise DomainError(f"Need n >= 1 and 0 <= r <= n, got n={n}, r={r}")
    beta = tuple(random_rational(rng) for _ in range(n))
    mu = sum((abs(b) for b in beta), Fraction(0)) + _positive_rational(rng)
    q = _weight_offset(n, r)
    return add_models(_affine_product(n, q, q, scale=mu), _affine_product(n, q, (Fraction(0), beta)))


def zero_ground_ising(n: int, r: int, rng: np.random.Generator) -> IsingModel:
    return qubo_to_ising(zero_ground_model(n, r, rng))


def sample_models(kind: str, n: int, count: int, seed: int = 0) -> List[Model]:
    rng = np.random.default_rng(seed)
    make = random_qubo if kind == "qubo" else random_ising
    return [make(n, rng) for _ in range(count)]

