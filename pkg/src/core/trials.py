"""
One seeded trial of a strategy, shared by the experiment runner and the curve runner.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from config.settings import Settings
from core.errors import AbstainALError, BudgetAuditError
from data.models import ExperimentConfig, ExperimentReport
from hypotheses.classes import HypothesisClass
from learners.active_learner import ActiveLearner
from learners.passive import run_passive
from learners.schedule import passive_budget
from oracles.oracle import build_oracle
from predictors.factory import make_predictor
from utils.rng import trial_streams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialOutcome:
    labels: Optional[int]
    excess: Optional[float]
    failure: Optional[str] = None


def run_trial(
    config: ExperimentConfig,
    hclass: HypothesisClass,
    trial: int,
    settings: Settings,
    predictor: Optional[str] = None,
    eps: Optional[float] = None,
) -> ExperimentReport:
    """
    Run the epoch loop once. Run failures are recorded on the report rather than
    raised; `oracle_budget` is audited against the reported label count.
    """
    eps = config.eps if eps is None else eps
    kind = predictor or config.predictor
    oracle_rng, learner_rng = trial_streams(config.seed, trial)
    oracle = build_oracle(config.oracle, hclass, oracle_rng)
    learner = ActiveLearner(
        hclass=hclass,
        oracle=oracle,
        predictor=make_predictor(kind, settings, config.profile_path),
        eps=eps,
        delta=config.delta,
        rng=learner_rng,
        scale=config.scale,
        j_cap=config.j_cap or settings.j_cap,
        query=config.query,
        trial=trial,
        seed=config.seed,
    )
    try:
        report = learner.run(config.mode)
    except AbstainALError as exc:
        logger.warning("Trial %s failed: %s", trial, exc)
        return ExperimentReport(
            trial=trial,
            seed=config.seed,
            mode=config.mode,
            predictor=kind,
            oracle_budget=oracle.budget,
            failure=str(exc),
        )
    if report.oracle_budget != report.total_labels:
        raise BudgetAuditError(report.total_labels, report.oracle_budget)
    return report


def run_strategy_trial(
    config: ExperimentConfig,
    hclass: HypothesisClass,
    strategy: str,
    eps: float,
    trial: int,
    settings: Settings,
) -> TrialOutcome:
    """Labels and excess error of one strategy at one target; passive gets its fixed budget."""
    if strategy != "passive":
        report = run_trial(config, hclass, trial, settings, predictor=strategy, eps=eps)
        if report.failure:
            return TrialOutcome(labels=None, excess=None, failure=report.failure)
        return TrialOutcome(labels=report.total_labels, excess=report.excess_error)

    oracle_rng, _ = trial_streams(config.seed, trial)
    oracle = build_oracle(config.oracle, hclass, oracle_rng)
    n = passive_budget(config.mode, eps, config.delta, hclass.vc_dim, config.scale)
    h = run_passive(hclass, oracle, n)
    return TrialOutcome(labels=oracle.budget, excess=oracle.true_excess_error(h).value)
