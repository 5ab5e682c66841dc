from typing import Optional

from config.settings import Settings
from core.errors import ConfigError
from predictors.base import ConfidenceRatedPredictor
from predictors.disagreement_predictor import DisagreementPredictor
from predictors.file_predictor import ProfileFilePredictor
from predictors.lp_predictor import LPPredictor


def make_predictor(
    kind: str,
    settings: Optional[Settings] = None,
    profile_path: Optional[str] = None,
) -> ConfidenceRatedPredictor:
    settings = settings or Settings()
    if kind == "lp":
        return LPPredictor(tol=settings.lp_tolerance, max_iters=settings.lp_max_iters)
    if kind == "dis":
        return DisagreementPredictor()
    if kind == "profile":
        if not profile_path:
            raise ConfigError("profile_path", "required when predictor = 'profile'")
        try:
            return ProfileFilePredictor(profile_path)
        except (OSError, ValueError) as exc:
            raise ConfigError("profile_path", str(exc)) from exc
    raise ConfigError("predictor", f"unknown predictor kind '{kind}'")
