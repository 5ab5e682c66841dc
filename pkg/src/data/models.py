from __future__ import annotations

import os
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _existing_file(value: Optional[str]) -> Optional[str]:
    if value is not None and not os.path.isfile(value):
        raise ValueError(f"file not found: {value}")
    return value


# ---------------------------------------------------------------------------
# Experiment configuration (one TOML file, see docs/config.md)
# ---------------------------------------------------------------------------


class HypothesisClassConfig(_Strict):
    """
    A finite hypothesis class. Grid classes are built from (low, high, resolution);
    `matrix` reads an explicit +/-1 matrix from `path`.
    """

    kind: Literal["thresholds", "intervals", "linear", "matrix"] = "thresholds"
    low: float = 0.0
    high: float = 1.0
    resolution: int = Field(101, ge=1)
    dim: int = Field(2, ge=1, description="Ambient dimension of the linear class")
    vc_dim: Optional[int] = Field(None, ge=1, description="Overrides the class's VC dimension")
    seed: int = Field(0, ge=0, description="Seed for random directions of linear classes in dim >= 3")
    path: Optional[str] = None

    _path_exists = field_validator("path")(_existing_file)

    @field_validator("resolution")
    @classmethod
    def _interval_endpoints(cls, value: int, info: ValidationInfo) -> int:
        if info.data.get("kind") == "intervals" and value < 2:
            raise ValueError("intervals need resolution >= 2")
        return value

    @model_validator(mode="after")
    def _matrix_needs_path(self):
        if self.kind == "matrix" and not self.path:
            raise ValueError("path is required for kind = 'matrix'")
        return self


class MarginalConfig(_Strict):
    kind: Literal["uniform-interval", "uniform-grid", "gaussian", "finite-pool"] = "uniform-interval"
    low: float = 0.0
    high: float = 1.0
    points: int = Field(101, ge=1, description="Support size of uniform-grid")
    dim: int = Field(1, ge=1)
    path: Optional[str] = Field(None, description="Support points of finite-pool, one per line")
    weights_path: Optional[str] = Field(None, description="Optional support weights of finite-pool")

    _paths_exist = field_validator("path", "weights_path")(_existing_file)

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "finite-pool" and not self.path:
            raise ValueError("path is required for kind = 'finite-pool'")
        if self.kind in ("uniform-interval", "uniform-grid") and not self.high > self.low:
            raise ValueError("high must exceed low")
        return self


class ConditionalConfig(_Strict):
    kind: Literal["realizable", "uniform-flip", "tsybakov", "table"] = "realizable"
    flip: float = Field(0.0, ge=0.0, le=0.5, description="Label flip rate of uniform-flip")
    c: float = Field(1.0, gt=0.0, description="Margin scale of tsybakov")
    kappa: float = Field(2.0, ge=1.0, description="Exponent of tsybakov")
    path: Optional[str] = Field(None, description="P(Y=+1|x) per support point for table")

    _path_exists = field_validator("path")(_existing_file)

    @model_validator(mode="after")
    def _table_needs_path(self):
        if self.kind == "table" and not self.path:
            raise ValueError("path is required for kind = 'table'")
        return self


class OracleConfig(_Strict):
    marginal: MarginalConfig = Field(default_factory=MarginalConfig)
    conditional: ConditionalConfig = Field(default_factory=ConditionalConfig)
    truth: Optional[int] = Field(None, ge=0, description="Hypothesis index labeling the data; default: middle of the class")
    reference_size: int = Field(100_000, ge=1, description="Monte Carlo pool size for excess error")
    reference_seed: int = Field(20_240_601, ge=0)


class EstimateConfig(_Strict):
    pool_size: int = Field(2000, ge=1)
    pool: Literal["sample", "support"] = Field(
        "sample", description="Draw pool_size points, or use the whole finite support"
    )
    r: List[float] = Field(default_factory=list)
    eta: List[float] = Field(default_factory=lambda: [0.0])
    eta_fractions: Optional[List[float]] = Field(None, description="eta = fraction * r, overrides eta")
    h_star: Optional[int] = Field(None, ge=0, description="Ball center; default: the oracle's truth")

    @model_validator(mode="after")
    def _ranges(self):
        if any(not 0.0 <= r <= 1.0 for r in self.r):
            raise ValueError("r values must lie in [0, 1]")
        if any(not 0.0 <= e <= 1.0 for e in self.eta):
            raise ValueError("eta values must lie in [0, 1]")
        return self


class CurveConfig(_Strict):
    eps: List[float] = Field(default_factory=lambda: [0.4, 0.2])
    strategies: List[Literal["lp", "dis", "passive"]] = Field(default_factory=lambda: ["lp", "dis", "passive"])
    trials: int = Field(5, ge=1)

    @model_validator(mode="after")
    def _eps_range(self):
        if not self.eps or any(not 0.0 < e <= 1.0 for e in self.eps):
            raise ValueError("eps values must lie in (0, 1]")
        return self


class ExperimentConfig(_Strict):
    hypotheses: HypothesisClassConfig = Field(default_factory=HypothesisClassConfig)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    mode: Literal["realizable", "agnostic"] = "realizable"
    predictor: Literal["lp", "dis", "profile"] = "lp"
    profile_path: Optional[str] = None
    query: Literal["adaptive", "nonadaptive"] = "adaptive"
    eps: float = Field(gt=0.0, le=1.0)
    delta: float = Field(0.1, gt=0.0, lt=1.0)
    scale: float = Field(1.0, gt=0.0, description="Multiplier on unlabeled and label sample sizes")
    trials: int = Field(1, ge=1)
    seed: int = Field(0, ge=0)
    j_cap: Optional[int] = Field(None, ge=1, description="Round cap of the doubling label query")
    output_dir: Optional[str] = None
    estimate: EstimateConfig = Field(default_factory=EstimateConfig)
    curve: CurveConfig = Field(default_factory=CurveConfig)

    _profile_exists = field_validator("profile_path")(_existing_file)

    @model_validator(mode="after")
    def _profile_needs_path(self):
        if self.predictor == "profile" and not self.profile_path:
            raise ValueError("profile_path is required for predictor = 'profile'")
        return self


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


class RoundRecord(BaseModel):
    """One round of a label query: sample size, ERM, survivors and stopping statistic."""

    j: int
    n_j: int
    erm: int
    survivors: int
    statistic: float


class EpochState(BaseModel):
    k: int
    eps_k: float
    delta_k: float
    n_k: int
    phi_k: float
    dis_mass: float
    m_k: int
    v_size: int
    labels: int
    rounds: List[RoundRecord] = Field(default_factory=list)


class ExperimentReport(BaseModel):
    trial: int
    seed: int
    mode: str
    predictor: str
    epochs: List[EpochState] = Field(default_factory=list)
    hypothesis: Optional[int] = None
    description: Optional[str] = None
    total_labels: int = 0
    total_unlabeled: int = 0
    oracle_budget: int = 0
    true_error: Optional[float] = None
    excess_error: Optional[float] = None
    excess_stderr: Optional[float] = None
    best_retained: Optional[bool] = None
    failure: Optional[str] = None


class PhiEstimate(BaseModel):
    """A pool-based estimate of an abstention or disagreement quantity."""

    quantity: Literal["Phi", "phi", "theta"]
    value: float
    pool_size: int
    r: Optional[float] = None
    eta: Optional[float] = None
    stderr: Optional[float] = None


class TrendFit(BaseModel):
    slope: float
    intercept: float
    r2: float
    n: int


class CurveRow(BaseModel):
    strategy: str
    eps: float
    trials: int
    labels_mean: float
    labels_q10: float
    labels_q50: float
    labels_q90: float
    excess_mean: Optional[float] = None
    failures: int = 0


class Manifest(BaseModel):
    command: str
    seed: int
    config: dict
    files: List[str] = Field(default_factory=list)
