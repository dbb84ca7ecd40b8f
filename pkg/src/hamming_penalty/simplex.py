from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from .errors import SolverError

LOG = logging.getLogger(__name__)


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass
class SimplexResult:
    status: LpStatus
    x: np.ndarray
    objective: float
    pivots: int


def _pivot(T: np.ndarray, row: int, col: int, tol: float) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    rhs = T[:-1, -1]
    rhs[np.abs(rhs) < tol] = 0.0


def _iterate(
    T: np.ndarray, basis: List[int], ncols: int, tol: float, max_pivots: int, pivots: int
) -> Tuple[LpStatus, int]:
    while True:
        costs = T[-1, :ncols]
        entering = np.flatnonzero(costs < -tol)
        if entering.size == 0:
            return LpStatus.OPTIMAL, pivots
        col = int(entering[0])
        column = T[:-1, col]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return LpStatus.UNBOUNDED, pivots
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol * max(1.0, abs(best))]
        row = min((int(i) for i in tied), key=lambda i: basis[i])
        _pivot(T, row, col, tol)
        basis[row] = col
        pivots += 1
        if pivots > max_pivots:
            raise SolverError(f"Simplex exceeded {max_pivots} pivots without reaching optimality")
        if pivots % 256 == 0 and not np.isfinite(T).all():
            raise SolverError(f"Non-finite tableau entries after {pivots} pivots")


def simplex_maximize(
    c: np.ndarray,
    A_eq: np.ndarray,
    b_eq: np.ndarray,
    A_ub: np.ndarray,
    b_ub: np.ndarray,
    tol: float = 1e-9,
    max_pivots: int = 200_000,
) -> SimplexResult:
    """maximize c.x s.t. A_eq x = b_eq, A_ub x <= b_ub, x free (split as p - q)."""
    c = np.asarray(c, dtype=float)
    nv = c.size
    A_eq = np.asarray(A_eq, dtype=float).reshape(-1, nv)
    A_ub = np.asarray(A_ub, dtype=float).reshape(-1, nv)
    b_eq = np.asarray(b_eq, dtype=float).ravel()
    b_ub = np.asarray(b_ub, dtype=float).ravel()
    m_eq, m_ub = A_eq.shape[0], A_ub.shape[0]
    m = m_eq + m_ub
    base = 2 * nv + m_ub

    A = np.zeros((m, base))
    A[:m_eq, :nv] = A_eq
    A[:m_eq, nv : 2 * nv] = -A_eq
    A[m_eq:, :nv] = A_ub
    A[m_eq:, nv : 2 * nv] = -A_ub
    A[m_eq:, 2 * nv :] = np.eye(m_ub)
    b = np.concatenate([b_eq, b_ub])
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    basis: List[int] = [-1] * m
    artificial_rows: List[int] = []
    for i in range(m):
        if i >= m_eq and not flip[i]:
            basis[i] = 2 * nv + (i - m_eq)
        else:
            artificial_rows.append(i)

    ncols = base + len(artificial_rows)
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :base] = A
    T[:m, -1] = b
    for k, i in enumerate(artificial_rows):
        T[i, base + k] = 1.0
        basis[i] = base + k

    pivots = 0
    if artificial_rows:
        T[-1, base:ncols] = 1.0
        for i in artificial_rows:
            T[-1] -= T[i]
        infeasibility = -T[-1, -1]
        if infeasibility > tol:
            status, pivots = _iterate(T, basis, ncols, tol, max_pivots, pivots)
            infeasibility = -T[-1, -1]
            if status is not LpStatus.OPTIMAL:
                raise SolverError("Phase 1 did not terminate at an optimum")
        scale = max(1.0, float(np.abs(b).max(initial=0.0)))
        if infeasibility > tol * scale:
            LOG.debug("Phase 1 residual infeasibility %.3e", infeasibility)
            return SimplexResult(LpStatus.INFEASIBLE, np.full(nv, np.nan), float("nan"), pivots)

        keep: List[int] = []
        for i in range(m):
            if basis[i] < base:
                keep.append(i)
                continue
            candidates = np.flatnonzero(np.abs(T[i, :base]) > tol)
            if candidates.size == 0:
                continue  # redundant row
            _pivot(T, i, int(candidates[0]), tol)
            basis[i] = int(candidates[0])
            keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.hstack([T[:, :base], T[:, -1:]])
        basis = [basis[i] for i in keep]
        LOG.debug("Phase 1 done after %d pivots; dropped %d redundant rows", pivots, m - len(keep))

    cost = np.concatenate([-c, c, np.zeros(m_ub)])
    T[-1, :] = 0.0
    T[-1, :base] = cost
    for i, var in enumerate(basis):
        if cost[var] != 0.0:
            T[-1] -= cost[var] * T[i]

    status, pivots = _iterate(T, basis, base, tol, max_pivots, pivots)
    if status is LpStatus.UNBOUNDED:
        return SimplexResult(status, np.full(nv, np.nan), float("inf"), pivots)

    full = np.zeros(base)
    for i, var in enumerate(basis):
        full[var] = T[i, -1]
    x = full[:nv] - full[nv : 2 * nv]
    return SimplexResult(LpStatus.OPTIMAL, x, float(c @ x), pivots)
