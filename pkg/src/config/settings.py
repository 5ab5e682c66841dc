import os
from dataclasses import dataclass, field


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value else default


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value else default


@dataclass(frozen=True)
class Settings:
    """
    Centralized environment-backed configuration.

    Experiment parameters live in the TOML config; this only holds knobs that belong
    to the machine running the experiments (worker count, solver tolerances, paths).
    """

    workers: int = field(default_factory=lambda: _env_int("AL_WORKERS", os.cpu_count() or 1))

    # Simplex feasibility / optimality tolerance and pivot cap
    lp_tolerance: float = field(default_factory=lambda: _env_float("AL_LP_TOLERANCE", 1e-9))
    lp_max_iters: int = field(default_factory=lambda: _env_int("AL_LP_MAX_ITERS", 50_000))

    # Round cap of the doubling label query
    j_cap: int = field(default_factory=lambda: _env_int("AL_J_CAP", 24))

    output_dir: str = field(default_factory=lambda: os.getenv("AL_OUTPUT_DIR", "results"))
    log_level: str = field(default_factory=lambda: os.getenv("AL_LOG_LEVEL", "INFO").strip().upper())
