"""
Marginal distributions over the instance space. Finite-support marginals tag every
drawn point with its support index so matrix classes and label tables can look it up.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

import numpy as np

from core.errors import ConfigError, InvalidParameterError
from hypotheses.sets import UnlabeledPool

logger = logging.getLogger(__name__)


class Marginal(ABC):
    kind: str = ""
    finite: bool = False

    @abstractmethod
    def sample(self, n: int, rng: np.random.Generator) -> UnlabeledPool: ...

    def describe(self) -> str:
        return self.kind


class UniformInterval(Marginal):
    kind = "uniform-interval"

    def __init__(self, low: float = 0.0, high: float = 1.0, dim: int = 1):
        if not high > low:
            raise InvalidParameterError(f"uniform interval [{low}, {high}]")
        self.low, self.high, self.dim = low, high, dim

    def sample(self, n, rng):
        return UnlabeledPool(points=rng.uniform(self.low, self.high, size=(n, self.dim)))

    def describe(self):
        return f"uniform on [{self.low}, {self.high}]^{self.dim}"


class Gaussian(Marginal):
    """Isotropic standard normal in R^dim."""

    kind = "gaussian"

    def __init__(self, dim: int = 2):
        self.dim = dim

    def sample(self, n, rng):
        return UnlabeledPool(points=rng.standard_normal((n, self.dim)))

    def describe(self):
        return f"isotropic gaussian in R^{self.dim}"


class FiniteSupport(Marginal):
    """A weighted finite set of support points."""

    kind = "finite-pool"
    finite = True

    def __init__(self, points: np.ndarray, weights: Optional[np.ndarray] = None):
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.shape[0] == 0:
            raise InvalidParameterError("finite support is empty")
        if weights is None:
            weights = np.full(points.shape[0], 1.0 / points.shape[0])
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if weights.size != points.shape[0] or np.any(weights < 0) or weights.sum() <= 0:
            raise InvalidParameterError("support weights must be nonnegative, one per point, positive sum")
        self.points = points
        self.weights = weights / weights.sum()

    @classmethod
    def from_text(cls, path: str | Path, weights_path: Optional[str | Path] = None) -> "FiniteSupport":
        points = np.loadtxt(path, dtype=float, ndmin=2)
        weights = None if weights_path is None else np.loadtxt(weights_path, dtype=float, ndmin=1)
        logger.info("Loaded %s support points from %s", points.shape[0], path)
        return cls(points, weights)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def support_pool(self) -> UnlabeledPool:
        """Every support point once, in support order."""
        return UnlabeledPool(points=self.points, support=np.arange(self.size))

    def sample(self, n, rng):
        idx = rng.choice(self.size, size=n, replace=True, p=self.weights)
        return UnlabeledPool(points=self.points[idx], support=idx)

    def describe(self):
        return f"finite support of {self.size} points"


class UniformGrid(FiniteSupport):
    """Uniform over `points` equally spaced values in [low, high]."""

    kind = "uniform-grid"

    def __init__(self, low: float = 0.0, high: float = 1.0, points: int = 101):
        if points < 1 or not high > low:
            raise InvalidParameterError(f"uniform grid [{low}, {high}] x {points}")
        super().__init__(np.linspace(low, high, points))
        self.low, self.high = low, high

    def sample(self, n, rng):
        idx = rng.integers(0, self.size, size=n)
        return UnlabeledPool(points=self.points[idx], support=idx)

    def describe(self):
        return f"uniform grid of {self.size} points on [{self.low}, {self.high}]"


def build_marginal(cfg) -> Marginal:
    """Construct a marginal from a `MarginalConfig`."""
    if cfg.kind == "uniform-interval":
        return UniformInterval(cfg.low, cfg.high, cfg.dim)
    if cfg.kind == "uniform-grid":
        return UniformGrid(cfg.low, cfg.high, cfg.points)
    if cfg.kind == "gaussian":
        return Gaussian(cfg.dim)
    try:
        return FiniteSupport.from_text(cfg.path, cfg.weights_path)
    except (OSError, ValueError) as exc:
        raise ConfigError("oracle.marginal.path", str(exc)) from exc
