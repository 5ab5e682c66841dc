#!/usr/bin/env python3
"""
Command-line entry point for the active-learning experiments.

    python src/main.py run --config configs/thresholds_realizable.toml --out results/run
    python src/main.py estimate-phi --config configs/linear_gaussian_phi.toml
    python src/main.py estimate-theta --config configs/thresholds_theta.toml
    python src/main.py curve --config configs/thresholds_curve.toml --workers 8
    python src/main.py replay --out results/run

Exit status: 0 on success, 2 on a config problem, 1 on a run failure or a replay
mismatch.
"""

import argparse
import logging
import sys
from typing import Optional

from dotenv import load_dotenv

from config.loader import load_config, validate_config
from config.settings import Settings
from core.errors import AbstainALError, ConfigError
from core.framework import ExperimentFramework, replay
from utils.logging import init_logging

EXPERIMENT_COMMANDS = {
    "run": "Run the epoch loop for every trial; write per-trial JSON and epoch CSVs.",
    "estimate-phi": "Estimate minimum abstention Phi(V, eta) or phi(r, eta) on a pool.",
    "estimate-theta": "Estimate the disagreement coefficient over a radius grid.",
    "curve": "Label complexity against target error for several strategies.",
}


def _parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Active learning with confidence-rated prediction: simulations.")
    sub = p.add_subparsers(dest="command", required=True)
    for command, help_text in EXPERIMENT_COMMANDS.items():
        cmd = sub.add_parser(command, help=help_text)
        cmd.add_argument("--config", required=True, help="Experiment config (TOML).")
        cmd.add_argument("--out", default=None, help="Output directory (overrides the config).")
        cmd.add_argument("--workers", type=int, default=None, help="Worker threads (default: AL_WORKERS or CPUs).")
        cmd.add_argument("--seed", type=int, default=None, help="Seed (overrides the config).")
    rep = sub.add_parser("replay", help="Re-run a finished command and compare its CSV output byte for byte.")
    rep.add_argument("--out", required=True, help="Output directory of the run to replay.")
    rep.add_argument("--workers", type=int, default=None, help="Worker threads for the replay.")
    return p.parse_args(argv)


def main(argv: Optional[list[str]] = None) -> int:
    load_dotenv(override=True)
    args = _parse_args(argv)
    settings = Settings()
    init_logging(settings.log_level)

    if args.command == "replay":
        try:
            mismatches = replay(args.out, settings=settings, workers=args.workers)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except (AbstainALError, FileNotFoundError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if mismatches:
            print(f"replay mismatch in {', '.join(mismatches)}", file=sys.stderr)
            return 1
        logging.info("Replay of %s reproduced every CSV byte for byte", args.out)
        return 0

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = validate_config({**config.model_dump(), "seed": args.seed})
        framework = ExperimentFramework(config, settings=settings, out_dir=args.out, workers=args.workers)
        ok = framework.execute(args.command)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AbstainALError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
