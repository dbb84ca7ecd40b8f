from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import linprog

from .builders import (
    BoundKind,
    CoefficientBounds,
    build_optimal,
    optimal_scale,
    symmetric_weight_values,
    within_bounds,
)
from .config import SolverSettings, resolve
from .errors import CapacityError, DomainError, SolverError, UnsupportedWeightError
from .landscape import _bits_of
from .models import IsingModel, Qubo
from .simplex import LpStatus, simplex_maximize

LOG = logging.getLogger(__name__)

BACKENDS = ("simplex", "highs")


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective.x  s.t.  eq_matrix x = eq_rhs,  ub_matrix x <= ub_rhs,  x free."""

    kind: BoundKind
    n: int
    r: int
    bounds: CoefficientBounds
    variables: Tuple[str, ...]
    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    ub_matrix: np.ndarray
    ub_rhs: np.ndarray
    eq_supports: Tuple[Tuple[int, ...], ...]
    value_supports: Tuple[Tuple[int, ...], ...]
    n_bound_rows: int
    symmetric: bool = False
    two_sided: bool = False

    @property
    def row_count(self) -> int:
        return self.eq_matrix.shape[0] + self.ub_matrix.shape[0]

    @property
    def n_value_rows(self) -> int:
        return self.eq_matrix.shape[0] + len(self.value_supports)

    def _terms(self, row: np.ndarray) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(self.variables, row) if v != 0}

    def equality_row(self, support: Sequence[int]) -> Dict[str, float]:
        """Coefficients of 'value(support) = 0'."""
        idx = self.eq_supports.index(tuple(sorted(support)))
        return self._terms(self.eq_matrix[idx])

    def inequality_row(self, support: Sequence[int]) -> Dict[str, float]:
        """Coefficients of 'value(support) - g >= 0'."""
        idx = self.value_supports.index(tuple(sorted(support)))
        return self._terms(-self.ub_matrix[idx])

    def max_violation(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.eq_matrix.size:
            worst = max(worst, float(np.abs(self.eq_matrix @ x - self.eq_rhs).max()))
        if self.ub_matrix.size:
            worst = max(worst, float((self.ub_matrix @ x - self.ub_rhs).max(initial=0.0)))
        return worst

    def feasibility_scale(self) -> float:
        rhs = np.concatenate([self.eq_rhs, self.ub_rhs])
        return max(1.0, float(np.abs(rhs).max(initial=0.0)))


def _variable_names(kind: BoundKind, n: int, symmetric: bool) -> Tuple[str, ...]:
    off, lin, quad = ("a", "b", "c") if kind is BoundKind.QUBO else ("E0", "h", "J")
    if symmetric:
        return (off, lin, quad, "g")
    names = [off]
    names += [f"{lin}_{j}" for j in range(n)]
    names += [f"{quad}_{j}_{k}" for j in range(n) for k in range(j + 1, n)]
    names.append("g")
    return tuple(names)


def _bound_rows(
    bounds: CoefficientBounds,
    lin_cols: Sequence[int],
    quad_cols: Sequence[int],
    nvars: int,
    two_sided: bool,
) -> Tuple[np.ndarray, np.ndarray]:
    rows: List[np.ndarray] = []
    rhs: List[float] = []

    def add(col: int, sign: float, limit: Fraction) -> None:
        row = np.zeros(nvars)
        row[col] = sign
        rows.append(row)
        rhs.append(float(limit))

    if bounds.kind is BoundKind.QUBO:
        for col in lin_cols:
            add(col, -1.0, bounds.B)
            if two_sided:
                add(col, 1.0, bounds.B)
        for col in quad_cols:
            add(col, 1.0, bounds.C)
            if two_sided:
                add(col, -1.0, bounds.C)
    else:
        for col in lin_cols:
            add(col, 1.0, bounds.h_max)
            add(col, -1.0, bounds.h_min)
        for col in quad_cols:
            add(col, 1.0, bounds.J_max)
            if bounds.J_min is not None:
                add(col, -1.0, bounds.J_min)
    return np.array(rows).reshape(-1, nvars), np.array(rhs)


def build_gap_lp(
    n: int,
    r: int,
    bounds: CoefficientBounds,
    two_sided: bool = False,
    symmetric: bool = False,
    settings: Optional[SolverSettings] = None,
) -> LinearProgram:
    """
    Gap-maximization LP over bounded models vanishing on the weight-r class.

    With symmetric=True only S_n-invariant models are considered: one value row
    per weight class instead of one per bitstring. Averaging over S_n keeps the
    bounds, the zero set and never lowers the gap, so both optima coincide.
    """
    settings = resolve(settings)
    if n < 2:
        raise DomainError(f"Gap LP needs n >= 2, got n={n}")
    if not symmetric and n > settings.max_lp_bits:
        raise CapacityError(f"Gap LP limited to n <= {settings.max_lp_bits} (2**n value rows), got n={n}")
    if r in (0, n):
        raise UnsupportedWeightError(f"Gap LP requires 1 <= r <= n-1 (got n={n}, r={r})")
    if not 0 < r < n:
        raise DomainError(f"Target weight r={r} outside 0..{n}")
    if two_sided and bounds.kind is not BoundKind.QUBO:
        raise DomainError("two_sided applies to qubo bounds only")

    kind = bounds.kind
    variables = _variable_names(kind, n, symmetric)
    nvars = len(variables)

    if symmetric:
        weights = np.arange(n + 1)
        # value on weight w is offset*1 + lin*t1(w) + quad*t2(w)
        t1 = symmetric_weight_values(kind.value, n, Fraction(0), Fraction(1), Fraction(0))
        t2 = symmetric_weight_values(kind.value, n, Fraction(0), Fraction(0), Fraction(1))
        value_rows = np.array([[1.0, float(t1[w]), float(t2[w]), 0.0] for w in range(n + 1)])
        supports = [tuple(range(w)) for w in weights]
        class_weights = weights
        lin_cols, quad_cols = [1], [2]
    else:
        masks = np.arange(1 << n, dtype=np.int64)
        bits = _bits_of(masks, n)
        spins = 2 * bits - 1 if kind is BoundKind.ISING else bits
        pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
        quad = (
            np.stack([spins[:, j] * spins[:, k] for j, k in pairs], axis=1)
            if pairs
            else np.zeros((masks.size, 0))
        )
        value_rows = np.hstack(
            [np.ones((masks.size, 1)), spins, quad, np.zeros((masks.size, 1))]
        ).astype(float)
        supports = [tuple(int(j) for j in np.flatnonzero(row)) for row in bits]
        class_weights = bits.sum(axis=1)
        lin_cols = list(range(1, n + 1))
        quad_cols = list(range(n + 1, n + 1 + len(pairs)))

    on_target = class_weights == r
    eq_matrix = value_rows[on_target]
    eq_supports = tuple(s for s, t in zip(supports, on_target) if t)
    off_rows = value_rows[~on_target].copy()
    # value - g >= 0  ->  -value + g <= 0
    off_rows *= -1.0
    off_rows[:, -1] = 1.0
    value_supports = tuple(s for s, t in zip(supports, on_target) if not t)

    bound_matrix, bound_rhs = _bound_rows(bounds, lin_cols, quad_cols, nvars, two_sided)
    objective = np.zeros(nvars)
    objective[-1] = 1.0
    return LinearProgram(
        kind=kind,
        n=n,
        r=r,
        bounds=bounds,
        variables=variables,
        objective=objective,
        eq_matrix=eq_matrix,
        eq_rhs=np.zeros(eq_matrix.shape[0]),
        ub_matrix=np.vstack([off_rows, bound_matrix]),
        ub_rhs=np.concatenate([np.zeros(off_rows.shape[0]), bound_rhs]),
        eq_supports=eq_supports,
        value_supports=value_supports,
        n_bound_rows=bound_matrix.shape[0],
        symmetric=symmetric,
        two_sided=two_sided,
    )


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    objective: float
    x: np.ndarray
    backend: str = "simplex"
    pivots: int = 0
    max_violation: float = 0.0


def solve_lp(
    lp: LinearProgram, backend: str = "simplex", settings: Optional[SolverSettings] = None
) -> LpSolution:
    """Solve with the built-in dense simplex, or cross-check with HiGHS."""
    settings = resolve(settings)
    tol = settings.lp_tolerance
    if backend == "simplex":
        result = simplex_maximize(
            lp.objective,
            lp.eq_matrix,
            lp.eq_rhs,
            lp.ub_matrix,
            lp.ub_rhs,
            tol=tol,
            max_pivots=settings.max_pivots,
        )
        status, x, objective, pivots = result.status, result.x, result.objective, result.pivots
    elif backend == "highs":
        res = linprog(
            -lp.objective,
            A_ub=lp.ub_matrix,
            b_ub=lp.ub_rhs,
            A_eq=lp.eq_matrix if lp.eq_matrix.size else None,
            b_eq=lp.eq_rhs if lp.eq_matrix.size else None,
            bounds=[(None, None)] * len(lp.variables),
            method="highs",
        )
        statuses = {0: LpStatus.OPTIMAL, 2: LpStatus.INFEASIBLE, 3: LpStatus.UNBOUNDED}
        if res.status not in statuses:
            raise SolverError(f"HiGHS failed: {res.message}")
        status = statuses[res.status]
        x = np.asarray(res.x) if res.x is not None else np.full(len(lp.variables), np.nan)
        objective = float(-res.fun) if status is LpStatus.OPTIMAL else float("nan")
        pivots = int(getattr(res, "nit", 0))
    else:
        raise DomainError(f"Unknown LP backend {backend!r}; choose from {BACKENDS}")

    violation = 0.0
    if status is LpStatus.OPTIMAL:
        violation = lp.max_violation(x)
        # HiGHS works to its own primal feasibility tolerance of 1e-7
        limit = tol if backend == "simplex" else max(tol, 1e-7)
        if violation > limit * lp.feasibility_scale():
            raise SolverError(
                f"{backend} returned a point violating constraints by {violation:.3e} "
                f"(n={lp.n}, r={lp.r}, kind={lp.kind.value})"
            )
    return LpSolution(
        status=status,
        objective=objective,
        x=x,
        backend=backend,
        pivots=pivots,
        max_violation=violation,
    )


def model_vector(lp: LinearProgram, model: Qubo | IsingModel, gap: Fraction) -> np.ndarray:
    """Embed a model's coefficients (and a gap value) as an LP point."""
    if lp.symmetric:
        pair = model.coupling(0, 1) if model.n > 1 else Fraction(0)
        coefs = [model.offset, model.linear[0], pair]
    else:
        coefs = [model.offset, *model.linear]
        coefs += [model.coupling(j, k) for j, k in model.pairs()]
    return np.array([float(v) for v in coefs] + [float(gap)])


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass(frozen=True)
class OptimalityCertificate:
    n: int
    r: int
    kind: BoundKind
    bounds: CoefficientBounds
    lp_gap: float
    closed_form: Fraction
    abs_diff: float
    tolerance: float
    status: LpStatus = LpStatus.OPTIMAL
    witness_feasible: bool = False
    witness_attains: bool = False
    symmetric: bool = False
    two_sided: bool = False
    backend: str = "simplex"
    pivots: int = field(default=0, compare=False)

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.abs_diff <= self.tolerance else Verdict.FAIL

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_dict(self) -> Dict[str, object]:
        finite = math.isfinite(self.lp_gap)
        return {
            "n": self.n,
            "r": self.r,
            "kind": self.kind.value,
            "bounds": {k: str(v) for k, v in self.bounds.values().items()},
            "lp_gap": self.lp_gap if finite else None,
            "closed_form": str(self.closed_form),
            "abs_diff": self.abs_diff if math.isfinite(self.abs_diff) else None,
            "verdict": self.verdict.value,
        }


def _witness_gap(kind: BoundKind, n: int, r: int, model: Qubo | IsingModel) -> Tuple[Fraction, Fraction]:
    """(value on weight r, min over other weights - value on r) for an S_n-invariant model."""
    pair = model.coupling(0, 1)
    values = symmetric_weight_values(kind.value, n, model.offset, model.linear[0], pair)
    target = values[r]
    return target, min(v for w, v in enumerate(values) if w != r) - target


def certify_optimality(
    n: int,
    r: int,
    bounds: CoefficientBounds,
    two_sided: bool = False,
    symmetric: bool = False,
    backend: str = "simplex",
    settings: Optional[SolverSettings] = None,
) -> OptimalityCertificate:
    settings = resolve(settings)
    tol = settings.lp_tolerance
    scale = optimal_scale(n, r, bounds)
    closed_form = scale.gap
    lp = build_gap_lp(n, r, bounds, two_sided=two_sided, symmetric=symmetric, settings=settings)
    solution = solve_lp(lp, backend=backend, settings=settings)

    if solution.status is LpStatus.OPTIMAL:
        lp_gap = solution.objective
        abs_diff = abs(lp_gap - float(closed_form))
    else:
        lp_gap = float("inf") if solution.status is LpStatus.UNBOUNDED else float("nan")
        abs_diff = float("inf")

    model, _ = build_optimal(n, r, bounds)
    point = model_vector(lp, model, closed_form)
    witness_feasible = lp.max_violation(point) <= tol * lp.feasibility_scale()
    target, exact_gap = _witness_gap(bounds.kind, n, r, model)
    bounds_ok = within_bounds(model, bounds)
    if two_sided:
        bounds_ok = bounds_ok and all(abs(b) <= bounds.B for b in model.linear)
    witness_attains = bounds_ok and target == 0 and exact_gap == closed_form and abs_diff <= tol

    return OptimalityCertificate(
        n=n,
        r=r,
        kind=bounds.kind,
        bounds=bounds,
        lp_gap=lp_gap,
        closed_form=closed_form,
        abs_diff=abs_diff,
        tolerance=tol,
        status=solution.status,
        witness_feasible=bool(witness_feasible),
        witness_attains=bool(witness_attains),
        symmetric=symmetric,
        two_sided=two_sided,
        backend=backend,
        pivots=solution.pivots,
    )


@dataclass(frozen=True)
class GridTask:
    n: int
    r: int
    bounds: CoefficientBounds
    two_sided: bool = False
    symmetric: bool = False
    backend: str = "simplex"


def certification_grid(
    bounds_profiles: Sequence[CoefficientBounds],
    n_values: Iterable[int] = range(3, 8),
    include_tie: bool = True,
    two_sided: bool = False,
    symmetric: bool = False,
    backend: str = "simplex",
) -> List[GridTask]:
    """Every (n, r, profile) with 1 <= r <= n-1; qubo grids may add (B, C) = (2r-1, 2)."""
    tasks: List[GridTask] = []
    for n in n_values:
        for r in range(1, n):
            profiles = list(bounds_profiles)
            if include_tie and profiles and profiles[0].kind is BoundKind.QUBO:
                tie = CoefficientBounds.qubo(2 * r - 1, 2)
                if tie not in profiles:
                    profiles.append(tie)
            for profile in profiles:
                tasks.append(GridTask(n, r, profile, two_sided, symmetric, backend))
    return tasks


def _run_task(args: Tuple[GridTask, SolverSettings]) -> OptimalityCertificate:
    task, settings = args
    return certify_optimality(
        task.n,
        task.r,
        task.bounds,
        two_sided=task.two_sided,
        symmetric=task.symmetric,
        backend=task.backend,
        settings=settings,
    )


@dataclass
class GridSummary:
    total: int
    passed: int
    failed: int
    witness_failures: int
    failures: List[Tuple[int, int, Dict[str, str]]]

    @property
    def all_passed(self) -> bool:
        return self.failed == 0


def certificates_frame(certificates: Sequence[OptimalityCertificate]) -> pd.DataFrame:
    records = []
    for cert in certificates:
        record = {
            "kind": cert.kind.value,
            "n": cert.n,
            "r": cert.r,
        }
        record.update({k: str(v) for k, v in cert.bounds.values().items()})
        record.update(
            {
                "lp_gap": cert.lp_gap,
                "closed_form": str(cert.closed_form),
                "abs_diff": cert.abs_diff,
                "verdict": cert.verdict.value,
                "witness_feasible": cert.witness_feasible,
                "witness_attains": cert.witness_attains,
                "pivots": cert.pivots,
            }
        )
        records.append(record)
    return pd.DataFrame.from_records(records)


def run_certification_grid(
    tasks: Sequence[GridTask],
    jobs: int = 1,
    settings: Optional[SolverSettings] = None,
    logger: Optional[logging.Logger] = None,
) -> Tuple[List[OptimalityCertificate], pd.DataFrame, GridSummary]:
    """Certify every task; output order follows task order regardless of jobs."""
    settings = resolve(settings)
    log = logger if logger is not None else LOG
    args = [(task, settings) for task in tasks]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(args))) as pool:
            certificates = list(pool.map(_run_task, args))
    else:
        certificates = [_run_task(a) for a in args]

    failures = []
    for cert in certificates:
        tag = "[PASS]" if cert.passed else "[FAIL]"
        log.info(
            "%s kind=%s n=%d r=%d bounds=%s lp_gap=%.12g closed_form=%s abs_diff=%.3e witness=%s",
            tag,
            cert.kind.value,
            cert.n,
            cert.r,
            cert.bounds.to_dict(),
            cert.lp_gap,
            cert.closed_form,
            cert.abs_diff,
            "attains" if cert.witness_attains else "MISSES",
        )
        if not cert.passed:
            failures.append((cert.n, cert.r, cert.bounds.to_dict()))

    summary = GridSummary(
        total=len(certificates),
        passed=len(certificates) - len(failures),
        failed=len(failures),
        witness_failures=sum(1 for c in certificates if not c.witness_attains),
        failures=failures,
    )
    log.info(
        "[SUMMARY_CERT] passed=%d failed=%d witness_failures=%d total=%d",
        summary.passed,
        summary.failed,
        summary.witness_failures,
        summary.total,
    )
    return certificates, certificates_frame(certificates), summary
