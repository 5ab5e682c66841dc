"""
Label-complexity curves: total labels against target error for several strategies on
matched seeds, and the log-linear trend of phi(r, eta)/r.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score
from tqdm import tqdm

from config import constants
from config.settings import Settings
from core.base import Component
from core.errors import InvalidParameterError
from core.trials import TrialOutcome, run_strategy_trial
from data.models import CurveRow, ExperimentConfig, PhiEstimate, TrendFit
from hypotheses.classes import HypothesisClass

logger = logging.getLogger(__name__)

STRATEGIES = ("lp", "dis", "passive")


class CurveRunner(Component):
    """
    Runs every (strategy, eps, trial) cell on a thread pool. Trial t uses the same
    seed for every strategy and target so comparisons are paired.
    """

    name = "Curve Runner"
    color = constants.MAGENTA

    def __init__(
        self,
        config: ExperimentConfig,
        hclass: HypothesisClass,
        eps_grid: Sequence[float],
        trials: int,
        strategies: Sequence[str] = STRATEGIES,
        settings: Optional[Settings] = None,
        workers: Optional[int] = None,
    ):
        if trials < 1:
            raise InvalidParameterError(f"trials={trials} must be >= 1")
        unknown = set(strategies) - set(STRATEGIES)
        if unknown:
            raise InvalidParameterError(f"unknown strategies {sorted(unknown)}")
        self.config = config
        self.hclass = hclass
        self.eps_grid = list(eps_grid)
        self.trials = trials
        self.strategies = list(strategies)
        self.settings = settings or Settings()
        self.workers = workers or self.settings.workers

    def run_cell(self, cell) -> TrialOutcome:
        strategy, eps, trial = cell
        return run_strategy_trial(self.config, self.hclass, strategy, eps, trial, self.settings)

    def run(self) -> List[CurveRow]:
        cells = list(itertools.product(self.strategies, self.eps_grid, range(self.trials)))
        self.log(f"Running {len(cells)} cells on {self.workers} workers")
        with ThreadPoolExecutor(max_workers=self.workers) as ex:
            outcomes = list(tqdm(ex.map(self.run_cell, cells), total=len(cells), desc="curve"))

        rows = []
        for i, (strategy, eps) in enumerate(itertools.product(self.strategies, self.eps_grid)):
            block = outcomes[i * self.trials : (i + 1) * self.trials]
            rows.append(aggregate(strategy, eps, block))
        return rows


def aggregate(strategy: str, eps: float, outcomes: Sequence[TrialOutcome]) -> CurveRow:
    done = [o for o in outcomes if o.failure is None]
    labels = np.array([o.labels for o in done], dtype=float)
    excess = np.array([o.excess for o in done if o.excess is not None], dtype=float)
    if labels.size:
        q10, q50, q90 = np.quantile(labels, [0.1, 0.5, 0.9])
        mean = float(labels.mean())
    else:
        q10 = q50 = q90 = mean = float("nan")
    return CurveRow(
        strategy=strategy,
        eps=eps,
        trials=len(outcomes),
        labels_mean=mean,
        labels_q10=float(q10),
        labels_q50=float(q50),
        labels_q90=float(q90),
        excess_mean=float(excess.mean()) if excess.size else None,
        failures=len(outcomes) - len(done),
    )


def label_complexity_curve(
    config: ExperimentConfig,
    hclass: HypothesisClass,
    eps_grid: Sequence[float],
    trials: int,
    strategies: Sequence[str] = STRATEGIES,
    settings: Optional[Settings] = None,
    workers: Optional[int] = None,
) -> List[CurveRow]:
    return CurveRunner(config, hclass, eps_grid, trials, strategies, settings, workers).run()


def scaling_trend(estimates: Sequence[PhiEstimate]) -> TrendFit:
    """Least-squares fit of phi(r, eta)/r against ln(r/eta) over estimates with r, eta > 0."""
    usable = [e for e in estimates if e.r and e.eta and e.r > 0 and e.eta > 0]
    if len(usable) < 2:
        raise InvalidParameterError("a scaling trend needs at least two estimates with r, eta > 0")
    x = np.array([np.log(e.r / e.eta) for e in usable]).reshape(-1, 1)
    y = np.array([e.value / e.r for e in usable])
    model = LinearRegression().fit(x, y)
    fit = TrendFit(
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=float(r2_score(y, model.predict(x))),
        n=len(usable),
    )
    logger.info("phi/r ~ ln(r/eta): slope %.4g intercept %.4g r2 %.4g over %s points", fit.slope, fit.intercept, fit.r2, fit.n)
    return fit
