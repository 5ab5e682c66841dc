"""
Simulated example and labeling oracles with a known label model and an audited
label budget.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from config import constants
from core.base import Component
from core.errors import ConfigError, InvalidParameterError, UnknownHypothesisError
from hypotheses.classes import BLOCK_ROWS, HypothesisClass, ThresholdClass
from hypotheses.sets import UnlabeledPool
from oracles.conditionals import Conditional, Realizable, UniformFlip, build_conditional
from oracles.marginals import FiniteSupport, Marginal, UniformInterval, build_marginal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExcessError:
    """err(h) - min over the class of err, with a standard error when estimated."""

    value: float
    true_error: float
    stderr: float = 0.0
    method: str = "exact"


@dataclass(frozen=True)
class _RiskTable:
    method: str
    errors: np.ndarray
    best: int
    pool: Optional[UnlabeledPool] = None
    eta: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None


class Oracle(Component):
    """
    Draws unlabeled points from `marginal` and answers label queries from
    `conditional`. Every answered label increments `budget`; unlabeled draws are free.
    """

    name = "Oracle"
    color = constants.CYAN

    def __init__(
        self,
        marginal: Marginal,
        conditional: Conditional,
        hclass: HypothesisClass,
        truth: int,
        rng: np.random.Generator,
        reference_size: int = 100_000,
        reference_seed: int = 20_240_601,
    ):
        if not 0 <= truth < hclass.n_hypotheses:
            raise UnknownHypothesisError(truth)
        self.marginal = marginal
        self.conditional = conditional
        self.hclass = hclass
        self.truth = truth
        self.rng = rng
        self.reference_size = reference_size
        self.reference_seed = reference_seed
        self.budget = 0

    def draw_unlabeled(self, n: int) -> UnlabeledPool:
        if n < 0:
            raise InvalidParameterError(f"cannot draw {n} points")
        return self.marginal.sample(n, self.rng)

    def eta(self, pool: UnlabeledPool) -> np.ndarray:
        """P(Y = +1 | x) for every pool point."""
        if self.conditional.uses_truth:
            margin = self.hclass.margins(pool, np.array([self.truth]))[0]
        else:
            margin = np.zeros(len(pool))
        return self.conditional.eta(pool, margin)

    def query_labels(self, pool: UnlabeledPool, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        if idx.size == 0:
            return np.zeros(0, dtype=np.int8)
        eta = self.eta(pool.subset(idx))
        labels = np.where(self.rng.random(idx.size) < eta, 1, -1).astype(np.int8)
        self.budget += idx.size
        return labels

    def query_label(self, pool: UnlabeledPool, i: int) -> int:
        return int(self.query_labels(pool, [i])[0])

    # ------------------------------------------------------------------
    # Ground truth
    # ------------------------------------------------------------------

    def _closed_form(self) -> bool:
        return (
            isinstance(self.marginal, UniformInterval)
            and self.marginal.dim == 1
            and isinstance(self.hclass, ThresholdClass)
            and isinstance(self.conditional, (Realizable, UniformFlip))
        )

    def _flip(self) -> float:
        return self.conditional.flip if isinstance(self.conditional, UniformFlip) else 0.0

    def _class_errors(self, pool: UnlabeledPool, eta: np.ndarray, weights: np.ndarray) -> np.ndarray:
        errors = np.empty(self.hclass.n_hypotheses)
        loss_pos = weights * (1.0 - eta)
        loss_neg = weights * eta
        for start in range(0, errors.size, BLOCK_ROWS):
            rows = np.arange(start, min(start + BLOCK_ROWS, errors.size))
            positive = self.hclass.positive_mask(pool, rows)
            errors[rows] = positive @ loss_pos + (~positive) @ loss_neg
        return errors

    @cached_property
    def _risk(self) -> _RiskTable:
        if isinstance(self.marginal, FiniteSupport):
            pool = self.marginal.support_pool()
            eta = self.eta(pool)
            weights = self.marginal.weights
            errors = self._class_errors(pool, eta, weights)
            return _RiskTable("exact", errors, int(np.argmin(errors)), pool, eta, weights)
        if self._closed_form():
            m = self.marginal
            t = np.clip(self.hclass.thresholds, m.low, m.high)
            nu = self._flip()
            errors = nu + (1 - 2 * nu) * np.abs(t - t[self.truth]) / (m.high - m.low)
            return _RiskTable("closed-form", errors, int(np.argmin(errors)))

        reference_rng = np.random.default_rng(self.reference_seed)
        pool = self.marginal.sample(self.reference_size, reference_rng)
        eta = self.eta(pool)
        weights = np.full(len(pool), 1.0 / len(pool))
        errors = self._class_errors(pool, eta, weights)
        self.log(f"Monte Carlo reference of {len(pool)} points for excess error")
        return _RiskTable("monte-carlo", errors, int(np.argmin(errors)), pool, eta, weights)

    @property
    def best_hypothesis(self) -> int:
        """Lowest-index risk minimizer of the class."""
        return self._risk.best

    @property
    def nu_star(self) -> float:
        return float(self._risk.errors[self._risk.best])

    def class_errors(self) -> np.ndarray:
        """True error of every hypothesis of the class."""
        return self._risk.errors.copy()

    def true_error(self, h: int) -> float:
        self.hclass.check_rows([h])
        return float(self._risk.errors[h])

    def true_excess_error(self, h: int) -> ExcessError:
        self.hclass.check_rows([h])
        risk = self._risk
        value = float(risk.errors[h] - risk.errors[risk.best])
        stderr = 0.0
        if risk.method == "monte-carlo" and h != risk.best:
            rows = np.array([h, risk.best])
            positive = self.hclass.positive_mask(risk.pool, rows)
            loss = np.where(positive, 1.0 - risk.eta, risk.eta)
            diff = loss[0] - loss[1]
            stderr = float(diff.std(ddof=1) / np.sqrt(diff.size)) if diff.size > 1 else 0.0
        return ExcessError(value=value, true_error=float(risk.errors[h]), stderr=stderr, method=risk.method)

    def disagreement_with_best(self) -> np.ndarray:
        """rho(h, h*) under the marginal for every hypothesis; finite supports only."""
        risk = self._risk
        if risk.method != "exact":
            raise InvalidParameterError("exact disagreement needs a finite-support marginal")
        best = self.hclass.predict(risk.pool, [risk.best])[0]
        out = np.empty(self.hclass.n_hypotheses)
        for start in range(0, out.size, BLOCK_ROWS):
            rows = np.arange(start, min(start + BLOCK_ROWS, out.size))
            out[rows] = (self.hclass.predict(risk.pool, rows) != best[None, :]) @ risk.weights
        return out


def default_truth(hclass: HypothesisClass) -> int:
    return hclass.n_hypotheses // 2


def build_oracle(cfg, hclass: HypothesisClass, rng: np.random.Generator) -> Oracle:
    """Construct an oracle from an `OracleConfig`."""
    truth = default_truth(hclass) if cfg.truth is None else cfg.truth
    if truth >= hclass.n_hypotheses:
        raise ConfigError("oracle.truth", f"{truth} is not one of {hclass.n_hypotheses} hypotheses")
    return Oracle(
        marginal=build_marginal(cfg.marginal),
        conditional=build_conditional(cfg.conditional),
        hclass=hclass,
        truth=truth,
        rng=rng,
        reference_size=cfg.reference_size,
        reference_seed=cfg.reference_seed,
    )
