from config import constants
from core.errors import DimensionMismatchError, EmptyHypothesisSetError
from hypotheses.sets import HypothesisSet, UnlabeledPool, disagreement_region_mask
from predictors.base import ConfidenceRatedPredictor
from predictors.profile import AbstentionProfile


def dis_abstain_predictor(V: HypothesisSet, U: UnlabeledPool) -> AbstentionProfile:
    """Abstain on the disagreement region of V; elsewhere predict the unanimous label."""
    if V.size == 0:
        raise EmptyHypothesisSetError()
    if len(U) != V.n_points:
        raise DimensionMismatchError(f"pool has {len(U)} examples, hypothesis set covers {V.n_points}")
    mask = disagreement_region_mask(V)
    return AbstentionProfile.from_labels(V.predictions[V.active[0]], mask)


class DisagreementPredictor(ConfidenceRatedPredictor):
    """
    Baseline predictor. Its abstention rate is the disagreement-region mass, which
    puts the epoch loop back on disagreement-based label complexity. The budget eta
    is ignored: the profile meets the guarantee with eta = 0.
    """

    name = "Disagreement Predictor"
    kind = "dis"
    color = constants.YELLOW

    def profile(self, V: HypothesisSet, U: UnlabeledPool, eta: float) -> AbstentionProfile:
        return dis_abstain_predictor(V, U)
