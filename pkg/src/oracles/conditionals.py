"""
Label models: each maps pool points to eta(x) = P(Y = +1 | x). The truth-based models
read the margin s(x) of the designated truth hypothesis (s >= 0 means it predicts +1).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np

from core.errors import ConfigError, DimensionMismatchError, InvalidParameterError
from hypotheses.sets import UnlabeledPool


class Conditional(ABC):
    kind: str = ""
    uses_truth: bool = True

    @abstractmethod
    def eta(self, pool: UnlabeledPool, margin: np.ndarray) -> np.ndarray: ...


class Realizable(Conditional):
    kind = "realizable"

    def eta(self, pool, margin):
        return (margin >= 0).astype(float)


class UniformFlip(Conditional):
    """The truth's label, flipped with probability `flip` independently of x."""

    kind = "uniform-flip"

    def __init__(self, flip: float):
        if not 0.0 <= flip <= 0.5:
            raise InvalidParameterError(f"flip rate {flip} outside [0, 1/2]")
        self.flip = flip

    def eta(self, pool, margin):
        return np.where(margin >= 0, 1.0 - self.flip, self.flip)


class Tsybakov(Conditional):
    """
    eta(x) = 1/2 + 1/2 sign(s) min(1, c |s|^(kappa-1)) for the truth's margin s. Labels
    get noisier toward the decision boundary, where eta tends to 1/2; kappa = 1 with
    c >= 1 is noise free.
    """

    kind = "tsybakov"

    def __init__(self, c: float = 1.0, kappa: float = 2.0):
        if c <= 0 or kappa < 1:
            raise InvalidParameterError(f"tsybakov c={c}, kappa={kappa}")
        self.c, self.kappa = c, kappa

    def eta(self, pool, margin):
        sign = np.where(margin >= 0, 1.0, -1.0)
        strength = np.minimum(1.0, self.c * np.abs(margin) ** (self.kappa - 1))
        return 0.5 + 0.5 * sign * strength


class Table(Conditional):
    """eta given per support point of a finite-support marginal."""

    kind = "table"
    uses_truth = False

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=float).reshape(-1)
        if np.any((values < 0) | (values > 1)):
            raise InvalidParameterError("label table entries must lie in [0, 1]")
        self.values = values

    @classmethod
    def from_text(cls, path: str | Path) -> "Table":
        return cls(np.loadtxt(path, dtype=float, ndmin=1))

    def eta(self, pool, margin):
        if pool.support is None:
            raise DimensionMismatchError("a label table needs a pool drawn from a finite support")
        if pool.support.size and pool.support.max() >= self.values.size:
            raise DimensionMismatchError(f"support index {pool.support.max()} outside a table of {self.values.size}")
        return self.values[pool.support]


def build_conditional(cfg) -> Conditional:
    """Construct a label model from a `ConditionalConfig`."""
    if cfg.kind == "realizable":
        return Realizable()
    if cfg.kind == "uniform-flip":
        return UniformFlip(cfg.flip)
    if cfg.kind == "tsybakov":
        return Tsybakov(cfg.c, cfg.kappa)
    try:
        return Table.from_text(cfg.path)
    except (OSError, ValueError) as exc:
        raise ConfigError("oracle.conditional.path", str(exc)) from exc
