"""
Built-in finite hypothesis classes. A class evaluates any of its hypotheses on any
pool; `hypothesis_set` materializes the prediction matrix the algorithms consume.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

import numpy as np

from core.errors import ConfigError, DimensionMismatchError, InvalidParameterError, UnknownHypothesisError
from hypotheses.sets import HypothesisSet, IndexLike, UnlabeledPool

logger = logging.getLogger(__name__)

# rows evaluated per block when filling a prediction matrix
BLOCK_ROWS = 64


class HypothesisClass(ABC):
    kind: str = ""
    vc_dim: int = 1

    @property
    @abstractmethod
    def n_hypotheses(self) -> int: ...

    @abstractmethod
    def margins(self, pool: UnlabeledPool, rows: np.ndarray) -> np.ndarray:
        """
        Signed real-valued scores, shape (len(rows), len(pool)); the hypothesis
        predicts +1 exactly where its score is >= 0.
        """

    def positive_mask(self, pool: UnlabeledPool, rows: np.ndarray) -> np.ndarray:
        return self.margins(pool, rows) >= 0

    def check_rows(self, rows: Optional[IndexLike]) -> np.ndarray:
        if rows is None:
            return np.arange(self.n_hypotheses)
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        bad = rows[(rows < 0) | (rows >= self.n_hypotheses)]
        if bad.size:
            raise UnknownHypothesisError(int(bad[0]))
        return rows

    def predict(self, pool: UnlabeledPool, rows: Optional[IndexLike] = None) -> np.ndarray:
        rows = self.check_rows(rows)
        out = np.empty((rows.size, len(pool)), dtype=np.int8)
        for start in range(0, rows.size, BLOCK_ROWS):
            block = slice(start, start + BLOCK_ROWS)
            out[block] = self.positive_mask(pool, rows[block])
            out[block] *= 2
            out[block] -= 1
        return out

    def hypothesis_set(self, pool: UnlabeledPool, rows: Optional[IndexLike] = None) -> HypothesisSet:
        """
        Prediction matrix of `rows` (default: the whole class) on the pool. Row i of the
        result is hypothesis rows[i]; `ids` keeps that mapping.
        """
        rows = self.check_rows(rows)
        return HypothesisSet(predictions=self.predict(pool, rows), vc_dim=self.vc_dim, ids=rows)

    def describe(self, h: int) -> str:
        return f"{self.kind}[{h}]"


class ThresholdClass(HypothesisClass):
    """h_t(x) = +1 if x >= t else -1, t on a uniform grid over [low, high]."""

    kind = "thresholds"

    def __init__(self, low: float = 0.0, high: float = 1.0, resolution: int = 101, vc_dim: int = 1):
        if resolution < 1 or high < low:
            raise InvalidParameterError(f"threshold grid [{low}, {high}] x {resolution}")
        self.thresholds = np.linspace(low, high, resolution)
        self.vc_dim = vc_dim

    @property
    def n_hypotheses(self) -> int:
        return self.thresholds.size

    def _x(self, pool: UnlabeledPool) -> np.ndarray:
        if pool.dim != 1:
            raise DimensionMismatchError(f"thresholds need 1-D points, pool has dim {pool.dim}")
        return pool.points[:, 0]

    def margins(self, pool, rows):
        return self._x(pool)[None, :] - self.thresholds[rows][:, None]

    def positive_mask(self, pool, rows):
        return self._x(pool)[None, :] >= self.thresholds[rows][:, None]

    def index_of(self, t: float) -> int:
        return int(np.argmin(np.abs(self.thresholds - t)))

    def describe(self, h):
        return f"threshold t={self.thresholds[h]:.6g}"


class IntervalClass(HypothesisClass):
    """h_{a,b}(x) = +1 if a <= x <= b else -1, for grid endpoints a < b."""

    kind = "intervals"

    def __init__(self, low: float = 0.0, high: float = 1.0, resolution: int = 21, vc_dim: int = 2):
        if resolution < 2 or high <= low:
            raise InvalidParameterError(f"interval grid [{low}, {high}] x {resolution}")
        grid = np.linspace(low, high, resolution)
        a, b = np.triu_indices(resolution, k=1)
        self.lefts = grid[a]
        self.rights = grid[b]
        self.vc_dim = vc_dim

    @property
    def n_hypotheses(self) -> int:
        return self.lefts.size

    def margins(self, pool, rows):
        if pool.dim != 1:
            raise DimensionMismatchError(f"intervals need 1-D points, pool has dim {pool.dim}")
        x = pool.points[:, 0][None, :]
        return np.minimum(x - self.lefts[rows][:, None], self.rights[rows][:, None] - x)

    def describe(self, h):
        return f"interval [{self.lefts[h]:.6g}, {self.rights[h]:.6g}]"


class LinearClass(HypothesisClass):
    """
    Homogeneous linear classifiers h_w(x) = sign(<w, x>) in R^dim. In the plane the
    directions are `resolution` equally spaced angles; in higher dimension they are
    `resolution` seeded uniform directions on the sphere.
    """

    kind = "linear"

    def __init__(self, dim: int = 2, resolution: int = 360, vc_dim: Optional[int] = None, seed: int = 0):
        if dim < 1 or resolution < 1:
            raise InvalidParameterError(f"linear class dim={dim}, resolution={resolution}")
        if dim == 1:
            directions = np.array([[1.0], [-1.0]])
        elif dim == 2:
            angles = 2 * np.pi * np.arange(resolution) / resolution
            directions = np.column_stack([np.cos(angles), np.sin(angles)])
        else:
            raw = np.random.default_rng(seed).standard_normal((resolution, dim))
            directions = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        self.directions = directions
        self.dim = dim
        self.vc_dim = vc_dim or dim

    @property
    def n_hypotheses(self) -> int:
        return self.directions.shape[0]

    def margins(self, pool, rows):
        if pool.dim != self.dim:
            raise DimensionMismatchError(f"linear class has dim {self.dim}, pool has dim {pool.dim}")
        return self.directions[rows] @ pool.points.T

    def index_of(self, direction: np.ndarray) -> int:
        direction = np.asarray(direction, dtype=float)
        return int(np.argmax(self.directions @ (direction / np.linalg.norm(direction))))

    def describe(self, h):
        return "direction " + np.array2string(self.directions[h], precision=4)


class MatrixClass(HypothesisClass):
    """
    An explicit +/-1 matrix over a finite support: column j is support point j. Pools
    must carry support indices.
    """

    kind = "matrix"

    def __init__(self, matrix: np.ndarray, vc_dim: int = 1):
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or not np.all(np.abs(matrix) == 1):
            raise InvalidParameterError("hypothesis matrix must be 2-D with entries +1/-1")
        self.matrix = matrix.astype(np.int8)
        self.vc_dim = vc_dim

    @classmethod
    def from_text(cls, path: str | Path, vc_dim: int = 1) -> "MatrixClass":
        """One row per hypothesis, whitespace-separated +1/-1 entries."""
        matrix = np.loadtxt(path, dtype=float, ndmin=2)
        logger.info("Loaded %s x %s hypothesis matrix from %s", matrix.shape[0], matrix.shape[1], path)
        return cls(matrix, vc_dim=vc_dim)

    @property
    def n_hypotheses(self) -> int:
        return self.matrix.shape[0]

    def margins(self, pool, rows):
        if pool.support is None:
            raise DimensionMismatchError("matrix hypotheses need a pool drawn from a finite support")
        if pool.support.size and pool.support.max() >= self.matrix.shape[1]:
            raise DimensionMismatchError(
                f"support index {pool.support.max()} outside a {self.matrix.shape[1]}-column matrix"
            )
        return self.matrix[rows][:, pool.support].astype(float)


def build_hypothesis_class(cfg) -> HypothesisClass:
    """Construct a class from a `HypothesisClassConfig`."""
    if cfg.kind == "thresholds":
        return ThresholdClass(cfg.low, cfg.high, cfg.resolution, vc_dim=cfg.vc_dim or 1)
    if cfg.kind == "intervals":
        return IntervalClass(cfg.low, cfg.high, cfg.resolution, vc_dim=cfg.vc_dim or 2)
    if cfg.kind == "linear":
        return LinearClass(cfg.dim, cfg.resolution, vc_dim=cfg.vc_dim, seed=cfg.seed)
    try:
        return MatrixClass.from_text(cfg.path, vc_dim=cfg.vc_dim or 1)
    except (OSError, ValueError) as exc:
        raise ConfigError("hypotheses.path", str(exc)) from exc
