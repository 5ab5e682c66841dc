"""
Exception hierarchy. Every message carries a stable phrase callers can match on.
"""

from __future__ import annotations

from typing import Any, Optional


class AbstainALError(ValueError):
    """Base class for all errors raised by this project."""


class EmptySampleError(AbstainALError):
    def __init__(self, detail: str = ""):
        super().__init__("empty sample" + (f": {detail}" if detail else ""))


class UnknownHypothesisError(AbstainALError):
    def __init__(self, index: Any):
        super().__init__(f"unknown hypothesis: {index}")
        self.index = index


class EmptyHypothesisSetError(AbstainALError):
    def __init__(self, detail: str = ""):
        super().__init__("empty hypothesis set" + (f": {detail}" if detail else ""))


class MalformedProgramError(AbstainALError):
    def __init__(self, detail: str):
        super().__init__(f"malformed program: {detail}")


class InvalidBudgetError(AbstainALError):
    def __init__(self, eta: float):
        super().__init__(f"invalid budget: eta={eta} must lie in [0, 1]")


class InvalidParameterError(AbstainALError):
    def __init__(self, detail: str):
        super().__init__(f"invalid parameter: {detail}")


class InvalidTargetError(AbstainALError):
    def __init__(self, eps: float):
        super().__init__(f"invalid target: eps={eps} must lie in (0, 1]")


class DegenerateDistributionError(AbstainALError):
    def __init__(self):
        super().__init__("degenerate abstention distribution: total abstention is zero")


class DimensionMismatchError(AbstainALError):
    def __init__(self, detail: str):
        super().__init__(f"dimension mismatch: {detail}")


class InconsistentRunError(AbstainALError):
    def __init__(self, epoch: int):
        super().__init__(f"inconsistent realizable run: version space emptied in epoch {epoch}")
        self.epoch = epoch


class NoHaltError(AbstainALError):
    def __init__(self, result: Any, epoch: Optional[int] = None):
        where = f" in epoch {epoch}" if epoch is not None else ""
        super().__init__(f"no-halt within cap{where}: stopped after {len(result.rounds)} rounds")
        self.result = result
        self.epoch = epoch


class EmptyBallError(AbstainALError):
    def __init__(self, h_star: int, r: float):
        super().__init__(f"empty ball around hypothesis {h_star} at radius {r}")


class ConfigError(AbstainALError):
    def __init__(self, field: str, detail: str):
        super().__init__(f"invalid config field '{field}': {detail}")
        self.field = field


class SolverStatusError(AbstainALError):
    def __init__(self, status: Any, detail: str = ""):
        text = f"LP solve ended with status {getattr(status, 'value', status)}"
        super().__init__(text + (f": {detail}" if detail else ""))
        self.status = status


class BudgetAuditError(AbstainALError):
    def __init__(self, reported: int, budget: int):
        super().__init__(f"label budget audit failed: reported {reported} labels, oracle answered {budget}")
