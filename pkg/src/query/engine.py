"""
Label-query subroutines. Both take a candidate set V over a pool, a query distribution
over pool indices and a target excess error, spend labels from the oracle, and return
the candidates that remain plausible.

The adaptive query draws fresh samples of size 2, 4, 8, ... and stops as soon as the
deviation bound of the current round certifies the target; the non-adaptive query
spends one sample sized for the worst case.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
import pandas as pd

from config import constants
from core.errors import EmptyHypothesisSetError, InvalidParameterError
from data.models import RoundRecord
from hypotheses.sets import HypothesisSet, LabeledSample, UnlabeledPool, erm, mistake_counts

logger = logging.getLogger(__name__)

ROUND_COLUMNS = ["j", "n_j", "erm", "survivors", "statistic"]


def sigma(n: int, delta: float, d: int) -> float:
    """8/n (2d ln(2en/d) + ln(24/delta)); not clamped, so it can exceed 1."""
    if n < 1 or not 0.0 < delta < 1.0 or d < 1:
        raise InvalidParameterError(f"sigma(n={n}, delta={delta}, d={d})")
    return (
        constants.SIGMA_FACTOR
        / n
        * (2 * d * math.log(2 * math.e * n / d) + math.log(constants.SIGMA_CONFIDENCE / delta))
    )


def nonadaptive_sample_size(eps_t: float, delta_t: float, d: int, scale: float = 1.0) -> int:
    """ceil(scale * 6144/eps^2 (d ln(6144/eps^2) + ln(24/delta))), at least 1."""
    _check_targets(eps_t, delta_t)
    ratio = constants.NONADAPTIVE_RATIO / eps_t**2
    n = scale * ratio * (d * math.log(ratio) + math.log(constants.NONADAPTIVE_CONFIDENCE / delta_t))
    return max(1, math.ceil(n))


@dataclass(frozen=True)
class QueryResult:
    surviving: HypothesisSet
    labels_used: int
    rounds: List[RoundRecord] = field(default_factory=list)
    halted: bool = True

    def rounds_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rounds], columns=ROUND_COLUMNS)

    def rounds_to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            f.write(constants.ROUNDS_SCHEMA + "\n")
            self.rounds_frame().to_csv(f, index=False, float_format="%.10g", lineterminator="\n")


def _check_targets(eps_t: float, delta_t: float) -> None:
    if not 0.0 < eps_t <= 1.0:
        raise InvalidParameterError(f"target excess error {eps_t} outside (0, 1]")
    if not 0.0 < delta_t < 1.0:
        raise InvalidParameterError(f"target confidence {delta_t} outside (0, 1)")


def _check_distribution(dist: np.ndarray, m: int) -> np.ndarray:
    dist = np.asarray(dist, dtype=float).reshape(-1)
    if dist.size != m:
        raise InvalidParameterError(f"query distribution over {dist.size} indices for a pool of {m}")
    if dist.size == 0 or np.any(dist < 0) or dist.sum() <= 0:
        raise InvalidParameterError("query distribution needs nonnegative weights with a positive sum")
    return dist / dist.sum()


def _labeled_draw(pool, dist, oracle, n, rng) -> LabeledSample:
    idx = rng.choice(len(pool), size=n, replace=True, p=dist)
    return LabeledSample(indices=idx, labels=oracle.query_labels(pool, idx))


def adaptive_label_query(
    V: HypothesisSet,
    pool: UnlabeledPool,
    dist: np.ndarray,
    oracle,
    eps_t: float,
    delta_t: float,
    j_cap: int,
    rng: np.random.Generator,
) -> QueryResult:
    """
    Round j draws n_j = 2^j fresh labeled examples from `dist` and keeps every h of V with

        err(h) <= err(h_j) + eps_t/2 + s_j + sqrt(s_j * rho(h, h_j)),   s_j = sigma(n_j, delta_t/(j(j+1)))

    where h_j is the round's ERM. The query stops at the first round whose largest
    s_j + sqrt(s_j * rho(h, h_j)) over the kept set is at most eps_t/6. If no round
    up to j_cap stops, the last kept set comes back with `halted=False`.
    """
    if V.size == 0:
        raise EmptyHypothesisSetError()
    _check_targets(eps_t, delta_t)
    if j_cap < 1:
        raise InvalidParameterError(f"round cap {j_cap} must be >= 1")
    dist = _check_distribution(dist, len(pool))

    rounds: List[RoundRecord] = []
    labels_used = 0
    kept = V
    for j in range(1, j_cap + 1):
        n_j = 2**j
        S = _labeled_draw(pool, dist, oracle, n_j, rng)
        labels_used += n_j

        errors = mistake_counts(V, S) / n_j
        h_j = erm(V, S)
        preds = V.rows(S.indices)
        rho = (preds != V.predictions[h_j, S.indices][None, :]).mean(axis=1)
        s_j = sigma(n_j, delta_t / (j * (j + 1)), V.vc_dim)
        slack = s_j + np.sqrt(s_j * rho)
        err_h_j = errors[np.searchsorted(V.active, h_j)]
        keep = errors <= err_h_j + eps_t / 2 + slack
        kept = V.with_active(V.active[keep])
        statistic = float(slack[keep].max())

        rounds.append(
            RoundRecord(j=j, n_j=n_j, erm=int(V.ids[h_j]), survivors=kept.size, statistic=statistic)
        )
        logger.debug("round %s: n_j=%s survivors=%s statistic=%.4g", j, n_j, kept.size, statistic)
        if statistic <= eps_t / 6:
            return QueryResult(surviving=kept, labels_used=labels_used, rounds=rounds, halted=True)

    logger.warning("label query did not halt within %s rounds (%s labels)", j_cap, labels_used)
    return QueryResult(surviving=kept, labels_used=labels_used, rounds=rounds, halted=False)


def nonadaptive_label_query(
    V: HypothesisSet,
    pool: UnlabeledPool,
    dist: np.ndarray,
    oracle,
    eps_t: float,
    delta_t: float,
    rng: np.random.Generator,
    scale: float = 1.0,
) -> QueryResult:
    """One labeled sample of worst-case size; keep h with err(h) <= err(ERM) + 3 eps_t / 4."""
    if V.size == 0:
        raise EmptyHypothesisSetError()
    dist = _check_distribution(dist, len(pool))
    n = nonadaptive_sample_size(eps_t, delta_t, V.vc_dim, scale)

    S = _labeled_draw(pool, dist, oracle, n, rng)
    errors = mistake_counts(V, S) / n
    h_hat = erm(V, S)
    keep = errors <= errors.min() + 3 * eps_t / 4
    kept = V.with_active(V.active[keep])
    record = RoundRecord(j=1, n_j=n, erm=int(V.ids[h_hat]), survivors=kept.size, statistic=3 * eps_t / 4)
    return QueryResult(surviving=kept, labels_used=n, rounds=[record], halted=True)
