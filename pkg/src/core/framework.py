import filecmp
import logging
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

from tqdm import tqdm

from analysis.curves import label_complexity_curve, scaling_trend
from analysis.estimators import estimate_phi_capital, estimate_phi_small, estimate_theta
from config import constants
from config.loader import validate_config
from config.settings import Settings
from core.base import Component
from core.errors import ConfigError, InvalidParameterError
from core.reports import ReportStore
from core.trials import run_trial
from data.models import CurveRow, ExperimentConfig, ExperimentReport, Manifest, PhiEstimate
from hypotheses.classes import HypothesisClass, build_hypothesis_class
from hypotheses.sets import UnlabeledPool
from oracles.marginals import FiniteSupport
from oracles.oracle import Oracle, build_oracle
from utils.logging import init_logging
from utils.rng import estimate_stream


class ExperimentFramework(Component):
    """
    Builds the hypothesis class, oracles and predictors an experiment config describes,
    runs the requested command and writes its reports.
    """

    name = "Experiment Framework"
    color = constants.WHITE

    def __init__(
        self,
        config: ExperimentConfig,
        settings: Optional[Settings] = None,
        out_dir: Optional[str] = None,
        workers: Optional[int] = None,
    ):
        self.settings = settings or Settings()
        init_logging(self.settings.log_level)
        self.config = config
        self.workers = max(1, workers or self.settings.workers)
        self.store = ReportStore(out_dir or config.output_dir or self.settings.output_dir)
        self._hclass: Optional[HypothesisClass] = None

    def log(self, message: str) -> None:
        logging.info(constants.BG_BLUE + self.color + f"[{self.name}] " + message + constants.RESET)

    @property
    def hclass(self) -> HypothesisClass:
        if self._hclass is None:
            self._hclass = build_hypothesis_class(self.config.hypotheses)
            self.log(f"Hypothesis class {self._hclass.kind} with {self._hclass.n_hypotheses} hypotheses")
        return self._hclass

    def execute(self, command: str) -> bool:
        """Run one command and write its reports; False when any trial failed."""
        if command == "run":
            return not any(r.failure for r in self.run())
        if command == "estimate-phi":
            self.estimate_phi()
        elif command == "estimate-theta":
            self.estimate_theta()
        elif command == "curve":
            self.curve()
        else:
            raise InvalidParameterError(f"unknown command '{command}'")
        return True

    # ------------------------------------------------------------------

    def _run_trial(self, trial: int) -> ExperimentReport:
        return run_trial(self.config, self.hclass, trial, self.settings)

    def run(self) -> List[ExperimentReport]:
        cfg = self.config
        self.log(f"Running {cfg.trials} {cfg.mode} trials with the {cfg.predictor} predictor, eps={cfg.eps}")
        hclass = self.hclass  # build once, outside the workers
        with ThreadPoolExecutor(max_workers=self.workers) as ex:
            reports = list(tqdm(ex.map(self._run_trial, range(cfg.trials)), total=cfg.trials, desc="trials"))

        failed = [r.trial for r in reports if r.failure]
        if failed:
            self.log(f"{len(failed)} of {len(reports)} trials failed: {failed}")
        paths = self.store.write_trials(reports)
        self._manifest("run", paths)
        self.log(f"Wrote {len(paths)} files for {hclass.kind} run to {self.store.directory}")
        return reports

    def _estimation_inputs(self) -> Tuple[UnlabeledPool, Oracle]:
        est = self.config.estimate
        oracle = build_oracle(self.config.oracle, self.hclass, estimate_stream(self.config.seed))
        if est.pool == "support":
            if not isinstance(oracle.marginal, FiniteSupport):
                raise ConfigError("estimate.pool", "'support' needs a finite-support marginal")
            pool = oracle.marginal.support_pool()
        else:
            pool = oracle.draw_unlabeled(est.pool_size)
        return pool, oracle

    def _h_star(self, oracle: Oracle) -> int:
        h_star = self.config.estimate.h_star
        h_star = oracle.truth if h_star is None else h_star
        if h_star >= self.hclass.n_hypotheses:
            raise ConfigError("estimate.h_star", f"{h_star} is not one of {self.hclass.n_hypotheses} hypotheses")
        return h_star

    def estimate_phi(self) -> List[PhiEstimate]:
        est = self.config.estimate
        pool, oracle = self._estimation_inputs()
        V = self.hclass.hypothesis_set(pool)
        tol, iters = self.settings.lp_tolerance, self.settings.lp_max_iters

        if not est.r:
            cells = [(None, eta) for eta in est.eta]
        else:
            cells = [
                (r, eta)
                for r in est.r
                for eta in ([f * r for f in est.eta_fractions] if est.eta_fractions else est.eta)
            ]
        h_star = self._h_star(oracle)

        def cell(item) -> PhiEstimate:
            r, eta = item
            if r is None:
                return estimate_phi_capital(V, eta, pool, tol=tol, max_iters=iters)
            return estimate_phi_small(self.hclass, h_star, r, eta, pool, V=V, tol=tol, max_iters=iters)

        self.log(f"Estimating abstention on {len(cells)} cells over a pool of {len(pool)}")
        with ThreadPoolExecutor(max_workers=self.workers) as ex:
            estimates = list(tqdm(ex.map(cell, cells), total=len(cells), desc="phi"))

        if sum(1 for e in estimates if e.r and e.eta) >= 2:
            scaling_trend(estimates)
        path = self.store.write_estimates("phi.csv", estimates)
        self._manifest("estimate-phi", [path])
        return estimates

    def estimate_theta(self) -> List[PhiEstimate]:
        est = self.config.estimate
        if not est.r:
            raise ConfigError("estimate.r", "estimate-theta needs a nonempty radius grid")
        pool, oracle = self._estimation_inputs()
        estimates = estimate_theta(self.hclass, self._h_star(oracle), est.r, pool)
        self.log(f"Disagreement coefficient over {len(est.r)} radii: max {max(e.value for e in estimates):.4g}")
        path = self.store.write_estimates("theta.csv", estimates)
        self._manifest("estimate-theta", [path])
        return estimates

    def curve(self) -> List[CurveRow]:
        cfg = self.config.curve
        rows = label_complexity_curve(
            self.config,
            self.hclass,
            cfg.eps,
            cfg.trials,
            strategies=cfg.strategies,
            settings=self.settings,
            workers=self.workers,
        )
        path = self.store.write_curve(rows)
        self._manifest("curve", [path])
        return rows

    def _manifest(self, command: str, paths) -> None:
        manifest = Manifest(
            command=command,
            seed=self.config.seed,
            config=self.config.model_dump(mode="json"),
            files=sorted(Path(p).name for p in paths),
        )
        self.store.write_manifest(manifest)


def replay(directory: str, settings: Optional[Settings] = None, workers: Optional[int] = None) -> List[str]:
    """
    Re-run the command recorded in `directory`'s manifest into a scratch directory and
    return the names of CSV files whose bytes differ (empty when the replay matches).
    """
    store = ReportStore(directory)
    manifest = store.read_manifest()
    config = validate_config(manifest.config)
    csv_files = [name for name in manifest.files if name.endswith(".csv")]
    with tempfile.TemporaryDirectory() as scratch:
        framework = ExperimentFramework(config, settings=settings, out_dir=scratch, workers=workers)
        framework.log(f"Replaying '{manifest.command}' with seed {manifest.seed}")
        framework.execute(manifest.command)
        return [
            name
            for name in csv_files
            if not (Path(scratch) / name).exists()
            or not filecmp.cmp(Path(directory) / name, Path(scratch) / name, shallow=False)
        ]
