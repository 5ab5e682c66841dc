"""
The epoch loop. Each epoch halves the target error: it draws a fresh unlabeled pool,
asks the confidence-rated predictor where it must abstain under budget eps_k/64, and
spends labels only on the abstention region, drawn in proportion to the abstention
probabilities. The realizable loop prunes the version space with those labels; the
agnostic loop hands them to a label query with target excess eps_k/(8 phi_k).
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from config import constants
from core.base import Component
from core.errors import InconsistentRunError, InvalidParameterError, NoHaltError
from data.models import EpochState, ExperimentReport
from hypotheses.classes import HypothesisClass
from hypotheses.sets import HypothesisSet, LabeledSample, disagreement_region_mask, version_space_update
from learners.schedule import EpochPlan, epoch_schedule, realizable_label_count
from oracles.oracle import Oracle
from predictors.base import ConfidenceRatedPredictor
from predictors.profile import sample_queries
from query.engine import adaptive_label_query, nonadaptive_label_query

DEFAULT_J_CAP = 24


class ActiveLearner(Component):
    name = "Active Learner"
    color = constants.BLUE

    def __init__(
        self,
        hclass: HypothesisClass,
        oracle: Oracle,
        predictor: ConfidenceRatedPredictor,
        eps: float,
        delta: float,
        rng: np.random.Generator,
        scale: float = 1.0,
        j_cap: int = DEFAULT_J_CAP,
        query: str = "adaptive",
        trial: int = 0,
        seed: int = 0,
    ):
        if query not in ("adaptive", "nonadaptive"):
            raise InvalidParameterError(f"unknown query strategy '{query}'")
        self.hclass = hclass
        self.oracle = oracle
        self.predictor = predictor
        self.eps = eps
        self.delta = delta
        self.rng = rng
        self.scale = scale
        self.j_cap = j_cap
        self.query = query
        self.trial = trial
        self.seed = seed
        self.schedule: List[EpochPlan] = epoch_schedule(eps, delta, hclass.vc_dim, scale)

    def run(self, mode: str) -> ExperimentReport:
        if mode == "realizable":
            return self.run_realizable()
        if mode == "agnostic":
            return self.run_agnostic()
        raise InvalidParameterError(f"unknown mode '{mode}'")

    def _epoch_pool(self, plan: EpochPlan, active_ids: np.ndarray):
        pool = self.oracle.draw_unlabeled(plan.n_k)
        V = self.hclass.hypothesis_set(pool, active_ids)
        profile = self.predictor.profile(V, pool, plan.eps_k / constants.ETA_DIVISOR)
        dis_mass = float(disagreement_region_mask(V).mean())
        return pool, V, profile, dis_mass

    def run_realizable(self) -> ExperimentReport:
        budget_start = self.oracle.budget
        active_ids = np.arange(self.hclass.n_hypotheses)
        epochs: List[EpochState] = []
        retained = True

        for plan in self.schedule:
            pool, V, profile, dis_mass = self._epoch_pool(plan, active_ids)
            phi = profile.phi
            m_k = 0
            if phi >= constants.PHI_FLOOR:
                m_k = realizable_label_count(phi, plan.eps_k, plan.delta_k, self.hclass.vc_dim, self.scale)
            if m_k:
                idx = sample_queries(profile, m_k, self.rng)
                S = LabeledSample(indices=idx, labels=self.oracle.query_labels(pool, idx))
                V = version_space_update(V, S)
                if V.size == 0:
                    raise InconsistentRunError(plan.k)

            epochs.append(self._state(plan, phi, dis_mass, m_k, len(active_ids), m_k))
            active_ids = V.active_ids()
            retained = retained and self._retains_best(active_ids)
            self.log(
                f"Epoch {plan.k}: n_k={plan.n_k} phi={phi:.4g} dis={dis_mass:.4g} labels={m_k} |V|={active_ids.size}"
            )
        return self._report("realizable", epochs, active_ids, budget_start, retained)

    def run_agnostic(self) -> ExperimentReport:
        budget_start = self.oracle.budget
        active_ids = np.arange(self.hclass.n_hypotheses)
        epochs: List[EpochState] = []
        retained = True

        for plan in self.schedule:
            pool, V, profile, dis_mass = self._epoch_pool(plan, active_ids)
            phi = profile.phi
            labels, rounds = 0, []
            if phi >= constants.PHI_FLOOR:
                result = self._query(V, pool, profile.query_distribution(), plan, phi)
                if not result.halted:
                    raise NoHaltError(result, plan.k)
                V, labels, rounds = result.surviving, result.labels_used, result.rounds

            state = self._state(plan, phi, dis_mass, labels, len(active_ids), labels)
            epochs.append(state.model_copy(update={"rounds": rounds}))
            active_ids = V.active_ids()
            retained = retained and self._retains_best(active_ids)
            self.log(
                f"Epoch {plan.k}: n_k={plan.n_k} phi={phi:.4g} dis={dis_mass:.4g} labels={labels} |V|={active_ids.size}"
            )
        return self._report("agnostic", epochs, active_ids, budget_start, retained)

    def _query(self, V: HypothesisSet, pool, dist: np.ndarray, plan: EpochPlan, phi: float):
        # targets above 1 are clamped; a smaller target only tightens the query
        eps_t = min(1.0, plan.eps_k / (constants.AGNOSTIC_EXCESS_DIVISOR * phi))
        delta_t = plan.delta_k / constants.AGNOSTIC_CONFIDENCE_DIVISOR
        if self.query == "adaptive":
            return adaptive_label_query(V, pool, dist, self.oracle, eps_t, delta_t, self.j_cap, self.rng)
        return nonadaptive_label_query(V, pool, dist, self.oracle, eps_t, delta_t, self.rng, self.scale)

    def _retains_best(self, active_ids: np.ndarray) -> bool:
        return bool(np.isin(self.oracle.best_hypothesis, active_ids))

    @staticmethod
    def _state(plan: EpochPlan, phi: float, dis_mass: float, m_k: int, v_size: int, labels: int) -> EpochState:
        return EpochState(
            k=plan.k,
            eps_k=plan.eps_k,
            delta_k=plan.delta_k,
            n_k=plan.n_k,
            phi_k=phi,
            dis_mass=dis_mass,
            m_k=m_k,
            v_size=v_size,
            labels=labels,
        )

    def _report(
        self,
        mode: str,
        epochs: List[EpochState],
        active_ids: np.ndarray,
        budget_start: int,
        retained: Optional[bool],
    ) -> ExperimentReport:
        h = int(active_ids[0])
        excess = self.oracle.true_excess_error(h)
        return ExperimentReport(
            trial=self.trial,
            seed=self.seed,
            mode=mode,
            predictor=self.predictor.kind,
            epochs=epochs,
            hypothesis=h,
            description=self.hclass.describe(h),
            total_labels=sum(e.labels for e in epochs),
            total_unlabeled=sum(e.n_k for e in epochs),
            oracle_budget=self.oracle.budget - budget_start,
            true_error=excess.true_error,
            excess_error=excess.value,
            excess_stderr=excess.stderr,
            best_retained=retained,
        )
