"""
Sample-size formulas of the epoch loop. Every size is multiplied by the experiment's
`scale` and rounded up; scale = 1 gives the sizes the guarantees are proven for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

from config import constants
from core.errors import InvalidParameterError, InvalidTargetError


@dataclass(frozen=True)
class EpochPlan:
    k: int
    eps_k: float
    delta_k: float
    n_k: int


def n_epochs(eps: float) -> int:
    """k0 = ceil(log2(1/eps))."""
    if not 0.0 < eps <= 1.0:
        raise InvalidTargetError(eps)
    # 1e-12 keeps exact powers of two from rounding up an extra epoch
    return max(0, math.ceil(math.log2(1.0 / eps) - 1e-12))


def _check(delta: float, d: int, scale: float) -> None:
    if not 0.0 < delta < 1.0:
        raise InvalidParameterError(f"delta={delta} outside (0, 1)")
    if d < 1:
        raise InvalidParameterError(f"vc dimension {d} must be >= 1")
    if scale <= 0:
        raise InvalidParameterError(f"scale={scale} must be positive")


def unlabeled_size(eps_k: float, delta_k: float, d: int, scale: float = 1.0) -> int:
    """n_k = 192 (256/eps_k)^2 (d ln(256/eps_k) + ln(288/delta_k))."""
    ratio = constants.POOL_RATIO / eps_k
    n = constants.POOL_FACTOR * ratio**2 * (d * math.log(ratio) + math.log(constants.POOL_CONFIDENCE / delta_k))
    return max(1, math.ceil(scale * n))


def epoch_schedule(eps: float, delta: float, d: int = 1, scale: float = 1.0) -> List[EpochPlan]:
    """eps_k = eps 2^(k0-k+1), delta_k = delta / (2 (k0-k+1)^2) for k = 1..k0."""
    k0 = n_epochs(eps)
    _check(delta, d, scale)
    plans = []
    for k in range(1, k0 + 1):
        left = k0 - k + 1
        eps_k = eps * 2**left
        delta_k = delta / (2 * left**2)
        plans.append(EpochPlan(k=k, eps_k=eps_k, delta_k=delta_k, n_k=unlabeled_size(eps_k, delta_k, d, scale)))
    return plans


def realizable_label_count(phi_k: float, eps_k: float, delta_k: float, d: int, scale: float = 1.0) -> int:
    """
    m_k = 768 phi_k/eps_k (d ln(768 phi_k/eps_k) + ln(48/delta_k)), scaled and rounded
    up. The log term goes negative when phi_k is tiny; the count is then 0.
    """
    if phi_k <= 0:
        return 0
    ratio = constants.LABEL_RATIO * phi_k / eps_k
    m = ratio * (d * math.log(ratio) + math.log(constants.LABEL_CONFIDENCE / delta_k))
    return max(0, math.ceil(scale * m))


def passive_budget(mode: str, eps: float, delta: float, d: int = 1, scale: float = 1.0) -> int:
    """
    Labels handed to the passive baseline:
    realizable 768/eps (d ln(768/eps) + ln(48/delta)),
    agnostic 6144/eps^2 (d ln(6144/eps^2) + ln(24/delta)).
    """
    if not 0.0 < eps <= 1.0:
        raise InvalidTargetError(eps)
    _check(delta, d, scale)
    if mode == "realizable":
        ratio = constants.LABEL_RATIO / eps
        n = ratio * (d * math.log(ratio) + math.log(constants.LABEL_CONFIDENCE / delta))
    else:
        ratio = constants.NONADAPTIVE_RATIO / eps**2
        n = ratio * (d * math.log(ratio) + math.log(constants.NONADAPTIVE_CONFIDENCE / delta))
    return max(1, math.ceil(scale * n))
