"""
Dense two-phase tableau simplex for

    minimize    c^T x + offset
    subject to  A_ub x <= b_ub
                A_eq x == b_eq
                x >= 0

The entering column is the most negative reduced cost, ties going to the column with
the fewest nonzeros when the phase starts, then the lowest index. After
DEGENERATE_STREAK pivots in a row that do not move the objective, the solver switches
to Bland's rule (lowest-index entering column) until the objective moves again, so it
cannot cycle. The leaving row is always the lowest-index basic variable among ratio
ties, which keeps every run deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from core.errors import MalformedProgramError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERS = 50_000
DEGENERATE_STREAK = 50


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"


def _as_matrix(value, n: int, name: str) -> np.ndarray:
    if value is None:
        return np.zeros((0, n))
    matrix = np.asarray(value, dtype=float)
    if matrix.ndim == 1 and n == matrix.size:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2 or matrix.shape[1] != n:
        raise MalformedProgramError(f"{name} has shape {matrix.shape}, expected (*, {n})")
    return matrix


def _as_vector(value, k: int, name: str) -> np.ndarray:
    vector = np.zeros(0) if value is None else np.asarray(value, dtype=float).reshape(-1)
    if vector.size != k:
        raise MalformedProgramError(f"{name} has {vector.size} entries, expected {k}")
    return vector


@dataclass(frozen=True)
class LPProblem:
    c: np.ndarray
    A_ub: Optional[np.ndarray] = None
    b_ub: Optional[np.ndarray] = None
    A_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    offset: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        n = c.size
        A_ub = _as_matrix(self.A_ub, n, "A_ub")
        b_ub = _as_vector(self.b_ub, A_ub.shape[0], "b_ub")
        A_eq = _as_matrix(self.A_eq, n, "A_eq")
        b_eq = _as_vector(self.b_eq, A_eq.shape[0], "b_eq")
        for name, value in (("c", c), ("A_ub", A_ub), ("b_ub", b_ub), ("A_eq", A_eq), ("b_eq", b_eq)):
            if not np.all(np.isfinite(value)):
                raise MalformedProgramError(f"{name} has non-finite entries")
        if not np.isfinite(self.offset):
            raise MalformedProgramError("offset is not finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A_ub", A_ub)
        object.__setattr__(self, "b_ub", b_ub)
        object.__setattr__(self, "A_eq", A_eq)
        object.__setattr__(self, "b_eq", b_eq)

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_ub(self) -> int:
        return self.A_ub.shape[0]

    @property
    def n_eq(self) -> int:
        return self.A_eq.shape[0]

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x + self.offset)

    def max_violation(self, x: np.ndarray) -> float:
        """Largest constraint or sign violation of x (0 when feasible)."""
        parts = [np.zeros(1), -x]
        if self.n_ub:
            parts.append(self.A_ub @ x - self.b_ub)
        if self.n_eq:
            parts.append(np.abs(self.A_eq @ x - self.b_eq))
        return float(max(np.max(p) for p in parts))


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    x: np.ndarray
    value: float
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


@dataclass
class _Tableau:
    """Constraint rows [B^-1 A | B^-1 b] plus the reduced-cost row at the bottom."""

    T: np.ndarray
    basis: List[int]
    iterations: int = 0

    @property
    def m(self) -> int:
        return self.T.shape[0] - 1

    def set_cost(self, cost: np.ndarray) -> None:
        body = self.T[:-1, :-1]
        rhs = self.T[:-1, -1]
        cb = cost[self.basis]
        self.T[-1, :-1] = cost - cb @ body
        self.T[-1, -1] = -(cb @ rhs)

    def pivot(self, i: int, j: int) -> None:
        self.T[i] /= self.T[i, j]
        column = self.T[:, j].copy()
        column[i] = 0.0
        rows = np.flatnonzero(column)
        if rows.size:
            self.T[rows] -= np.outer(column[rows], self.T[i])
        self.basis[i] = j
        self.iterations += 1


def format_tableau(tableau: _Tableau, precision: int = 4) -> str:
    """Plain-text dump of a tableau: one line per basic row, reduced costs last."""
    lines = []
    for row, var in zip(tableau.T[:-1], tableau.basis):
        lines.append(f"x{var:<5d}| " + np.array2string(row, precision=precision, max_line_width=10_000))
    lines.append("cost  | " + np.array2string(tableau.T[-1], precision=precision, max_line_width=10_000))
    return "\n".join(lines)


def _column_keys(tab: _Tableau, n_allowed: int, tol: float) -> np.ndarray:
    """Tie-break key per column: sparser columns first, then lower index."""
    nonzeros = np.count_nonzero(np.abs(tab.T[:-1, :n_allowed]) > tol, axis=0)
    return nonzeros.astype(np.int64) * n_allowed + np.arange(n_allowed)


def _run_simplex(tab: _Tableau, n_allowed: int, tol: float, max_iters: int) -> LPStatus:
    """Primal simplex on the current basis; only columns < n_allowed may enter."""
    keys = _column_keys(tab, n_allowed, tol)
    degenerate = 0
    while True:
        reduced = tab.T[-1, :n_allowed]
        candidates = np.flatnonzero(reduced < -tol)
        if candidates.size == 0:
            return LPStatus.OPTIMAL
        if tab.iterations >= max_iters:
            return LPStatus.ITERATION_LIMIT
        if degenerate >= DEGENERATE_STREAK:
            j = int(candidates[0])
        else:
            values = reduced[candidates]
            steepest = candidates[values <= values.min() + tol]
            j = int(steepest[np.argmin(keys[steepest])])
        column = tab.T[:-1, j]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return LPStatus.UNBOUNDED
        ratios = tab.T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol]
        i = int(min(ties, key=lambda r: tab.basis[r]))
        degenerate = degenerate + 1 if best <= tol else 0
        tab.pivot(i, j)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("pivot row %s col %s\n%s", i, j, format_tableau(tab))


def _drive_out_artificials(tab: _Tableau, first_artificial: int, tol: float) -> None:
    """Pivot zero-valued artificials out of the basis; drop rows that are redundant."""
    i = 0
    while i < tab.m:
        if tab.basis[i] < first_artificial:
            i += 1
            continue
        candidates = np.flatnonzero(np.abs(tab.T[i, :first_artificial]) > tol)
        if candidates.size:
            tab.pivot(i, int(candidates[0]))
            i += 1
        else:
            tab.T = np.delete(tab.T, i, axis=0)
            del tab.basis[i]


def solve_lp(
    p: LPProblem,
    tol: float = DEFAULT_TOLERANCE,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> LPSolution:
    n, k, q = p.n_vars, p.n_ub, p.n_eq
    m = k + q

    # Columns: structural (n) | slacks (k) | artificials (added below) | rhs
    A = np.zeros((m, n + k))
    b = np.concatenate([p.b_ub, p.b_eq])
    A[:k, :n] = p.A_ub
    A[:k, n:] = np.eye(k)
    A[k:, :n] = p.A_eq
    flip = b < 0
    A[flip] *= -1
    b = np.abs(b)

    needs_artificial = np.ones(m, dtype=bool)
    needs_artificial[:k] = flip[:k]
    art_rows = np.flatnonzero(needs_artificial)
    n_art = art_rows.size
    width = n + k + n_art

    T = np.zeros((m + 1, width + 1))
    T[:m, : n + k] = A
    T[art_rows, n + k + np.arange(n_art)] = 1.0
    T[:m, -1] = b
    basis = [n + i for i in range(k)] + [0] * q
    for a, row in enumerate(art_rows):
        basis[row] = n + k + a
    tab = _Tableau(T=T, basis=basis)

    if n_art:
        phase_one = np.zeros(width)
        phase_one[n + k :] = 1.0
        tab.set_cost(phase_one)
        status = _run_simplex(tab, width, tol, max_iters)
        if status is LPStatus.ITERATION_LIMIT:
            return _solution(tab, p, status)
        infeasibility = -tab.T[-1, -1]
        if infeasibility > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LPSolution(LPStatus.INFEASIBLE, np.zeros(n), float("nan"), tab.iterations)
        _drive_out_artificials(tab, n + k, tol)
        tab.T = np.delete(tab.T, np.s_[n + k : width], axis=1)

    cost = np.zeros(n + k)
    cost[:n] = p.c
    tab.set_cost(cost)
    status = _run_simplex(tab, n + k, tol, max_iters)
    return _solution(tab, p, status)


def _solution(tab: _Tableau, p: LPProblem, status: LPStatus) -> LPSolution:
    full = np.zeros(tab.T.shape[1] - 1)
    full[tab.basis] = tab.T[:-1, -1]
    x = full[: p.n_vars]
    x[np.abs(x) < 1e-15] = 0.0
    value = p.objective(x) if status is not LPStatus.UNBOUNDED else float("-inf")
    logger.debug("LP %s after %s pivots, value %s", status.value, tab.iterations, value)
    return LPSolution(status=status, x=x, value=value, iterations=tab.iterations)
