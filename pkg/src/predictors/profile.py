"""
Abstention profiles: the per-example (xi, zeta, gamma) output of a confidence-rated
predictor, plus the checks and sampling that only need the profile itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from config import constants
from core.errors import DegenerateDistributionError, DimensionMismatchError, InvalidParameterError
from hypotheses.sets import HypothesisSet, UnlabeledPool

PROFILE_TOLERANCE = 1e-6
PROFILE_COLUMNS = ["index", "xi", "zeta", "gamma"]


@dataclass(frozen=True)
class AbstentionProfile:
    """
    xi[i], zeta[i], gamma[i]: probabilities of predicting +1, predicting -1 and
    abstaining on pool example i.
    """

    xi: np.ndarray
    zeta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        xi, zeta, gamma = (np.asarray(v, dtype=float).reshape(-1) for v in (self.xi, self.zeta, self.gamma))
        if not xi.shape == zeta.shape == gamma.shape:
            raise DimensionMismatchError(f"profile arrays of sizes {xi.size}, {zeta.size}, {gamma.size}")
        if xi.size:
            if min(xi.min(), zeta.min(), gamma.min()) < -PROFILE_TOLERANCE:
                raise InvalidParameterError("profile has negative probabilities")
            if np.abs(xi + zeta + gamma - 1.0).max() > PROFILE_TOLERANCE:
                raise InvalidParameterError("profile probabilities do not sum to one")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "gamma", gamma)

    def __len__(self) -> int:
        return self.gamma.size

    @property
    def phi(self) -> float:
        """Mean abstention over the pool."""
        return float(self.gamma.mean()) if self.gamma.size else 0.0

    @property
    def coverage(self) -> float:
        return 1.0 - self.phi

    def query_distribution(self) -> np.ndarray:
        total = self.gamma.sum()
        if total <= 0:
            raise DegenerateDistributionError()
        return self.gamma / total

    @classmethod
    def from_labels(cls, labels: np.ndarray, abstain: np.ndarray) -> "AbstentionProfile":
        """Deterministic profile: abstain where `abstain`, otherwise predict `labels`."""
        labels = np.asarray(labels)
        abstain = np.asarray(abstain, dtype=bool)
        keep = ~abstain
        return cls(
            xi=(keep & (labels > 0)).astype(float),
            zeta=(keep & (labels < 0)).astype(float),
            gamma=abstain.astype(float),
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"index": np.arange(len(self)), "xi": self.xi, "zeta": self.zeta, "gamma": self.gamma},
            columns=PROFILE_COLUMNS,
        )

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as f:
            f.write(constants.PROFILE_SCHEMA + "\n")
            self.to_frame().to_csv(f, index=False, float_format="%.10g", lineterminator="\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "AbstentionProfile":
        frame = pd.read_csv(path, comment="#")
        missing = set(PROFILE_COLUMNS) - set(frame.columns)
        if missing:
            raise InvalidParameterError(f"profile file {path} lacks columns {sorted(missing)}")
        frame = frame.sort_values("index")
        if not np.array_equal(frame["index"].to_numpy(), np.arange(len(frame))):
            raise InvalidParameterError(f"profile file {path} must index rows 0..n-1")
        return cls(xi=frame["xi"].to_numpy(), zeta=frame["zeta"].to_numpy(), gamma=frame["gamma"].to_numpy())


def verify_error_guarantee(p: AbstentionProfile, V: HypothesisSet, U: UnlabeledPool, eta: float) -> float:
    """
    max over active h of (1/m)[sum_{h=+1} zeta_i + sum_{h=-1} xi_i] - eta. The
    disagreement guarantee holds when this is <= tolerance.
    """
    if not len(p) == V.n_points == len(U):
        raise DimensionMismatchError(
            f"profile covers {len(p)} examples, hypothesis set {V.n_points}, pool {len(U)}"
        )
    if V.size == 0 or len(p) == 0:
        return -eta
    positive = V.rows() > 0
    disagreement = positive @ p.zeta + (~positive) @ p.xi
    return float(disagreement.max() / len(p) - eta)


def expected_error_against_labels(p: AbstentionProfile, y: np.ndarray) -> float:
    """Expected rate of non-abstaining predictions that contradict labels y."""
    y = np.asarray(y)
    if y.shape != p.gamma.shape:
        raise DimensionMismatchError(f"{y.size} labels for a profile of {len(p)} examples")
    if y.size == 0:
        return 0.0
    return float((p.xi[y < 0].sum() + p.zeta[y > 0].sum()) / y.size)


def sample_queries(p: AbstentionProfile, m_count: int, rng: np.random.Generator) -> np.ndarray:
    """m_count i.i.d. pool indices drawn with probability proportional to gamma."""
    if m_count < 0:
        raise InvalidParameterError(f"query count {m_count} is negative")
    if m_count == 0:
        return np.zeros(0, dtype=np.int64)
    weights = p.query_distribution()
    return rng.choice(len(p), size=m_count, replace=True, p=weights)
