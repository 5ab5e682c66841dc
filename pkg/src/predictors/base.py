from abc import ABC, abstractmethod

from core.base import Component
from hypotheses.sets import HypothesisSet, UnlabeledPool
from predictors.profile import AbstentionProfile


class ConfidenceRatedPredictor(Component, ABC):
    """
    A predictor allowed to abstain. `profile` returns, for every pool example, the
    probabilities of predicting +1, predicting -1 and abstaining, such that no
    hypothesis of V disagrees with the non-abstaining predictions on more than an
    eta fraction of the pool.
    """

    kind: str = ""

    @abstractmethod
    def profile(self, V: HypothesisSet, U: UnlabeledPool, eta: float) -> AbstentionProfile: ...
