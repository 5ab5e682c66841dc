"""
Pool-based estimators of the complexity quantities that govern label complexity:
the minimum abstention Phi(V, eta) of a confidence-rated predictor, its value over a
disagreement ball phi(r, eta), and the disagreement coefficient theta(r).
All estimates are empirical: they describe the pool, and record its size.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

import numpy as np

from core.errors import EmptyBallError, EmptySampleError, InvalidParameterError
from data.models import PhiEstimate
from hypotheses.classes import HypothesisClass
from hypotheses.sets import HypothesisSet, UnlabeledPool, disagreement_ball, disagreement_region_mask
from predictors.lp_predictor import solve_crp
from solvers.simplex import DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE


def _stderr(value: float, n: int) -> float:
    return math.sqrt(max(value * (1.0 - value), 0.0) / n)


def estimate_phi_capital(
    V: HypothesisSet,
    eta: float,
    pool: UnlabeledPool,
    tol: float = DEFAULT_TOLERANCE,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> PhiEstimate:
    if len(pool) == 0:
        raise EmptySampleError("pool")
    value = min(1.0, max(0.0, solve_crp(V, pool, eta, tol=tol, max_iters=max_iters).phi))
    return PhiEstimate(quantity="Phi", value=value, pool_size=len(pool), eta=eta, stderr=_stderr(value, len(pool)))


def _ball(V: HypothesisSet, h_star: int, r: float) -> HypothesisSet:
    if not 0.0 <= r <= 1.0:
        raise InvalidParameterError(f"radius {r} outside [0, 1]")
    ball = disagreement_ball(V, h_star, r, np.arange(V.n_points))
    if ball.size == 0:
        raise EmptyBallError(h_star, r)
    return ball


def _row_of(V: HypothesisSet, h_star: int) -> int:
    rows = np.flatnonzero(V.ids == h_star)
    if rows.size == 0:
        raise EmptyBallError(h_star, 0.0)
    return int(rows[0])


def estimate_phi_small(
    hclass: HypothesisClass,
    h_star: int,
    r: float,
    eta: float,
    pool: UnlabeledPool,
    V: Optional[HypothesisSet] = None,
    tol: float = DEFAULT_TOLERANCE,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> PhiEstimate:
    """
    Phi over the ball of radius r around h_star, measured on the pool. Pass `V` (the
    whole class on the same pool) to reuse one prediction matrix across a sweep.
    """
    if len(pool) == 0:
        raise EmptySampleError("pool")
    hclass.check_rows([h_star])
    V = V if V is not None else hclass.hypothesis_set(pool)
    ball = _ball(V, _row_of(V, h_star), r)
    estimate = estimate_phi_capital(ball, eta, pool, tol=tol, max_iters=max_iters)
    return estimate.model_copy(update={"quantity": "phi", "r": r})


def estimate_theta(
    hclass: HypothesisClass,
    h_star: int,
    r_grid: Sequence[float],
    pool: UnlabeledPool,
    V: Optional[HypothesisSet] = None,
) -> List[PhiEstimate]:
    """
    theta(r) = sup over grid radii r' >= r of DIS(ball(h_star, r')) / r'. Rows come
    back in the order of `r_grid`.
    """
    if len(r_grid) == 0:
        raise InvalidParameterError("theta needs a nonempty radius grid")
    if any(not 0.0 < r <= 1.0 for r in r_grid):
        raise InvalidParameterError("theta radii must lie in (0, 1]")
    if len(pool) == 0:
        raise EmptySampleError("pool")
    hclass.check_rows([h_star])
    V = V if V is not None else hclass.hypothesis_set(pool)
    center = _row_of(V, h_star)

    radii = np.asarray(r_grid, dtype=float)
    ratios = np.array([disagreement_region_mask(_ball(V, center, r)).mean() / r for r in radii])
    order = np.argsort(-radii, kind="stable")
    theta = np.empty_like(ratios)
    theta[order] = np.maximum.accumulate(ratios[order])
    return [
        PhiEstimate(quantity="theta", value=float(t), pool_size=len(pool), r=float(r))
        for r, t in zip(radii, theta)
    ]


def estimate_tsybakov_c0(oracle, kappa: float) -> float:
    """
    Smallest C0 with rho(h, h*) <= C0 (err(h) - err(h*))^(1/kappa) for every
    hypothesis of positive excess error, computed exactly on a finite-support marginal.
    """
    if kappa < 1:
        raise InvalidParameterError(f"kappa={kappa} must be >= 1")
    errors = oracle.class_errors()
    excess = errors - errors[oracle.best_hypothesis]
    rho = oracle.disagreement_with_best()
    positive = excess > 1e-15
    if not positive.any():
        return 0.0
    return float(np.max(rho[positive] / excess[positive] ** (1.0 / kappa)))
