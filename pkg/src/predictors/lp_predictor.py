"""
The linear-programming confidence-rated predictor.

Given a candidate set V, a pool of m examples and an error budget eta, find per-example
probabilities (xi, zeta, gamma) minimizing total abstention subject to

    sum_{i: h(z_i)=+1} zeta_i + sum_{i: h(z_i)=-1} xi_i <= eta * m    for every h in V
    xi_i + zeta_i <= 1

(gamma_i = 1 - xi_i - zeta_i is eliminated). Hypotheses that label the pool alike give
identical constraints, so one row is kept per dichotomy. Pool examples on which every
kept representative agrees pattern-for-pattern are interchangeable, so each such group
shares one pair of mass variables bounded by the group size; spreading a group's mass
evenly over its members recovers an optimal per-example solution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from config import constants
from core.errors import (
    DimensionMismatchError,
    EmptyHypothesisSetError,
    EmptySampleError,
    InvalidBudgetError,
    SolverStatusError,
)
from hypotheses.sets import HypothesisSet, UnlabeledPool, dedupe_by_dichotomy, unique_rows
from predictors.base import ConfidenceRatedPredictor
from predictors.profile import AbstentionProfile
from solvers.simplex import DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE, LPProblem, solve_lp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrpProgram:
    """
    `problem` has 2G variables: X_0..X_{G-1} (predict +1 mass per column group) then
    Z_0..Z_{G-1} (predict -1 mass). Its first `n_budget_rows` inequality rows are the
    per-dichotomy error budgets; the remaining G rows cap each group at its size.
    """

    problem: LPProblem
    groups: np.ndarray
    group_sizes: np.ndarray
    representatives: np.ndarray
    n_budget_rows: int

    @property
    def n_groups(self) -> int:
        return self.group_sizes.size

    @property
    def m(self) -> int:
        return self.groups.size


def build_crp_lp(V: HypothesisSet, U: UnlabeledPool, eta: float) -> CrpProgram:
    if not 0.0 <= eta <= 1.0:
        raise InvalidBudgetError(eta)
    if V.size == 0:
        raise EmptyHypothesisSetError()
    m = len(U)
    if m == 0:
        raise EmptySampleError("pool")
    if m != V.n_points:
        raise DimensionMismatchError(f"pool has {m} examples, hypothesis set covers {V.n_points}")

    reps = np.array([rep for rep, _ in dedupe_by_dichotomy(V)], dtype=np.int64)
    signs = V.predictions[reps]  # (R, m)

    # group pool columns by their labeling under the representatives
    first, groups, sizes = unique_rows(signs.T)
    patterns = signs[:, first] > 0  # (R, G)
    n_groups = sizes.size
    R = reps.size

    budget = np.hstack([(~patterns).astype(float), patterns.astype(float)])
    capacity = np.hstack([np.eye(n_groups), np.eye(n_groups)])
    problem = LPProblem(
        c=-np.ones(2 * n_groups),
        A_ub=np.vstack([budget, capacity]),
        b_ub=np.concatenate([np.full(R, eta * m), sizes.astype(float)]),
        offset=float(m),
    )
    return CrpProgram(
        problem=problem,
        groups=groups,
        group_sizes=sizes,
        representatives=V.ids[reps],
        n_budget_rows=R,
    )


def solve_crp(
    V: HypothesisSet,
    U: UnlabeledPool,
    eta: float,
    tol: float = DEFAULT_TOLERANCE,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> AbstentionProfile:
    program = build_crp_lp(V, U, eta)
    solution = solve_lp(program.problem, tol=tol, max_iters=max_iters)
    if not solution.optimal:
        raise SolverStatusError(solution.status, f"{program.n_budget_rows} budget rows, {program.n_groups} groups")

    G = program.n_groups
    per_member = solution.x / np.concatenate([program.group_sizes, program.group_sizes])
    xi = per_member[:G][program.groups]
    zeta = per_member[G:][program.groups]
    gamma = 1.0 - xi - zeta

    triple = np.vstack([xi, zeta, gamma])
    worst = float(triple.min())
    if worst < -constants.CLAMP_LIMIT:
        raise SolverStatusError(solution.status, f"negative probability {worst:.3g} after solve")
    np.clip(triple, 0.0, None, out=triple)
    triple /= triple.sum(axis=0, keepdims=True)
    logger.debug(
        "CRP LP: %s budget rows, %s groups, %s pivots, abstention %.6g",
        program.n_budget_rows,
        G,
        solution.iterations,
        triple[2].mean(),
    )
    return AbstentionProfile(xi=triple[0], zeta=triple[1], gamma=triple[2])


class LPPredictor(ConfidenceRatedPredictor):
    """Minimum-abstention predictor under a per-hypothesis disagreement budget."""

    name = "LP Predictor"
    kind = "lp"
    color = constants.GREEN

    def __init__(self, tol: float = DEFAULT_TOLERANCE, max_iters: int = DEFAULT_MAX_ITERS):
        self.tol = tol
        self.max_iters = max_iters

    def profile(self, V: HypothesisSet, U: UnlabeledPool, eta: float) -> AbstentionProfile:
        return solve_crp(V, U, eta, tol=self.tol, max_iters=self.max_iters)
