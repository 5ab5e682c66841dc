from pathlib import Path

from config import constants
from core.errors import DimensionMismatchError
from hypotheses.sets import HypothesisSet, UnlabeledPool
from predictors.base import ConfidenceRatedPredictor
from predictors.profile import AbstentionProfile


class ProfileFilePredictor(ConfidenceRatedPredictor):
    """
    A fixed profile read from CSV, keyed by support index of a finite-support marginal.
    Every drawn pool point takes the row of its support index, whatever V and eta are.
    """

    name = "Profile Predictor"
    kind = "profile"
    color = constants.MAGENTA

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.table = AbstentionProfile.from_csv(self.path)
        self.log(f"Loaded abstention profile over {len(self.table)} support points from {self.path}")

    def profile(self, V: HypothesisSet, U: UnlabeledPool, eta: float) -> AbstentionProfile:
        if U.support is None:
            raise DimensionMismatchError("a profile file needs a pool drawn from a finite support")
        if U.support.size and U.support.max() >= len(self.table):
            raise DimensionMismatchError(
                f"support index {U.support.max()} outside a profile of {len(self.table)} rows"
            )
        idx = U.support
        return AbstentionProfile(xi=self.table.xi[idx], zeta=self.table.zeta[idx], gamma=self.table.gamma[idx])
