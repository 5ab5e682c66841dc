import numpy as np

from core.errors import InvalidParameterError
from hypotheses.classes import HypothesisClass
from hypotheses.sets import LabeledSample, erm
from oracles.oracle import Oracle


def run_passive(hclass: HypothesisClass, oracle: Oracle, n: int) -> int:
    """ERM over n i.i.d. labeled draws from the oracle; returns a class hypothesis id."""
    if n < 1:
        raise InvalidParameterError(f"passive label budget {n} must be >= 1")
    pool = oracle.draw_unlabeled(n)
    idx = np.arange(n)
    S = LabeledSample(indices=idx, labels=oracle.query_labels(pool, idx))
    V = hclass.hypothesis_set(pool)
    return int(V.ids[erm(V, S)])
