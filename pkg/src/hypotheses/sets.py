"""
Finite hypothesis sets represented by their +/-1 prediction matrix on a pool.

All operations are index based: a hypothesis is a row of the matrix, an example is a
column. Pools may contain repeated raw points; they are distinct columns here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    DimensionMismatchError,
    EmptyHypothesisSetError,
    EmptySampleError,
    InvalidParameterError,
    UnknownHypothesisError,
)

IndexLike = Sequence[int] | np.ndarray


@dataclass(frozen=True)
class UnlabeledPool:
    """
    A pool of feature vectors, shape (m, dim). `support` holds, for pools drawn from
    a finite-support marginal, the support index of every point.
    """

    points: np.ndarray
    support: Optional[np.ndarray] = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        object.__setattr__(self, "points", points)
        if self.support is not None:
            support = np.asarray(self.support, dtype=np.int64)
            if support.shape != (points.shape[0],):
                raise DimensionMismatchError(
                    f"support has shape {support.shape}, pool has {points.shape[0]} points"
                )
            object.__setattr__(self, "support", support)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, idx: IndexLike) -> "UnlabeledPool":
        idx = np.asarray(idx, dtype=np.int64)
        support = None if self.support is None else self.support[idx]
        return UnlabeledPool(points=self.points[idx], support=support)


@dataclass(frozen=True)
class LabeledSample:
    """Pool column indices paired with +/-1 labels."""

    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    labels: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int8))

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        labels = np.asarray(self.labels, dtype=np.int8).reshape(-1)
        if indices.shape != labels.shape:
            raise DimensionMismatchError(f"{indices.size} indices but {labels.size} labels")
        if labels.size and not np.all(np.abs(labels) == 1):
            raise InvalidParameterError("labels must be +1 or -1")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.indices.size


@dataclass(frozen=True)
class HypothesisSet:
    """
    Rows of `predictions` are hypotheses, columns are pool examples. `active` is the
    sorted set of surviving rows; `ids` maps rows to hypothesis ids of the class they
    were taken from (identity when the whole class is materialized).
    """

    predictions: np.ndarray
    vc_dim: int = 1
    active: Optional[np.ndarray] = None
    ids: Optional[np.ndarray] = None

    def __post_init__(self):
        predictions = np.asarray(self.predictions, dtype=np.int8)
        if predictions.ndim != 2:
            raise DimensionMismatchError(f"prediction matrix must be 2-D, got {predictions.ndim}-D")
        if predictions.size and not np.all(np.abs(predictions) == 1):
            raise InvalidParameterError("prediction matrix entries must be +1 or -1")
        if self.vc_dim < 1:
            raise InvalidParameterError(f"vc_dim must be >= 1, got {self.vc_dim}")
        n_rows = predictions.shape[0]

        active = np.arange(n_rows) if self.active is None else np.unique(np.asarray(self.active, dtype=np.int64))
        if active.size and (active[0] < 0 or active[-1] >= n_rows):
            raise UnknownHypothesisError(active[(active < 0) | (active >= n_rows)][0])
        ids = np.arange(n_rows) if self.ids is None else np.asarray(self.ids, dtype=np.int64)
        if ids.shape != (n_rows,):
            raise DimensionMismatchError(f"{ids.size} ids for {n_rows} rows")

        object.__setattr__(self, "predictions", predictions)
        object.__setattr__(self, "active", active)
        object.__setattr__(self, "ids", ids)

    @property
    def n_rows(self) -> int:
        return self.predictions.shape[0]

    @property
    def n_points(self) -> int:
        return self.predictions.shape[1]

    @property
    def size(self) -> int:
        return self.active.size

    def with_active(self, active: IndexLike) -> "HypothesisSet":
        return replace(self, active=np.asarray(active, dtype=np.int64))

    def active_ids(self) -> np.ndarray:
        return self.ids[self.active]

    def rows(self, idx: Optional[IndexLike] = None) -> np.ndarray:
        """Prediction block of the active rows, optionally restricted to columns `idx`."""
        block = self.predictions[self.active]
        return block if idx is None else block[:, np.asarray(idx, dtype=np.int64)]

    def require_active(self, h: int) -> None:
        if not self.is_active(h):
            raise UnknownHypothesisError(h)

    def is_active(self, h: int) -> bool:
        pos = np.searchsorted(self.active, h)
        return bool(pos < self.active.size and self.active[pos] == h)


def unique_rows(signs: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Group identical rows of a +/-1 matrix.

    Returns (first, inverse, counts): the first row of every group, the group of every
    row, and group sizes. Groups are ordered by their packed bit pattern.
    """
    signs = np.asarray(signs)
    n = signs.shape[0]
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    packed = np.packbits(signs > 0, axis=1)
    if packed.shape[1] <= 8:
        # up to 64 signs per row fit one integer key
        padded = np.zeros((n, 8), dtype=np.uint8)
        padded[:, : packed.shape[1]] = packed
        keys = padded.view(">u8").reshape(-1)
        _, first, inverse, counts = np.unique(keys, return_index=True, return_inverse=True, return_counts=True)
    else:
        _, first, inverse, counts = np.unique(
            packed, axis=0, return_index=True, return_inverse=True, return_counts=True
        )
    return first, inverse.reshape(-1), counts


def mistake_counts(V: HypothesisSet, S: LabeledSample) -> np.ndarray:
    """Number of sample items each active hypothesis mislabels."""
    if len(S) == 0:
        return np.zeros(V.size, dtype=np.int64)
    return (V.rows(S.indices) != S.labels[None, :]).sum(axis=1)


def empirical_error(h: int, S: LabeledSample, P: HypothesisSet) -> float:
    if len(S) == 0:
        raise EmptySampleError()
    P.require_active(h)
    return float(np.mean(P.predictions[h, S.indices] != S.labels))


def empirical_disagreement(h1: int, h2: int, idx: IndexLike, P: HypothesisSet) -> float:
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        raise EmptySampleError()
    for h in (h1, h2):
        if not 0 <= h < P.n_rows:
            raise UnknownHypothesisError(h)
    return float(np.mean(P.predictions[h1, idx] != P.predictions[h2, idx]))


def erm(V: HypothesisSet, S: LabeledSample) -> int:
    """Active row with the fewest mistakes on S; ties go to the lowest index."""
    if V.size == 0:
        raise EmptyHypothesisSetError()
    if len(S) == 0:
        raise EmptySampleError()
    return int(V.active[np.argmin(mistake_counts(V, S))])


def version_space_update(V: HypothesisSet, S: LabeledSample) -> HypothesisSet:
    if len(S) == 0:
        return V
    return V.with_active(V.active[mistake_counts(V, S) == 0])


def disagreement_region_mask(V: HypothesisSet, idx: Optional[IndexLike] = None) -> np.ndarray:
    if V.size == 0:
        raise EmptyHypothesisSetError()
    rows = V.rows(idx)
    if rows.shape[1] == 0:
        return np.zeros(0, dtype=bool)
    return rows.max(axis=0) != rows.min(axis=0)


def disagreement_ball(V: HypothesisSet, h_star: int, r: float, idx: IndexLike) -> HypothesisSet:
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        raise EmptySampleError()
    if not 0 <= h_star < V.n_rows:
        raise UnknownHypothesisError(h_star)
    if V.size == 0:
        return V
    center = V.predictions[h_star, idx]
    distances = (V.rows(idx) != center[None, :]).mean(axis=1)
    # tolerance absorbs k/m vs r round-off
    return V.with_active(V.active[distances <= r + 1e-12])


def dedupe_by_dichotomy(V: HypothesisSet, idx: Optional[IndexLike] = None) -> List[Tuple[int, int]]:
    """
    One representative (lowest active row) per distinct labeling of `idx`, with the
    number of active rows sharing that labeling. Ordered by representative.
    """
    if V.size == 0:
        return []
    rows = V.rows(idx)
    if rows.shape[1] == 0:
        return [(int(V.active[0]), V.size)]
    first, _, counts = unique_rows(rows)
    reps = V.active[first]
    order = np.argsort(reps)
    return [(int(reps[i]), int(counts[i])) for i in order]
