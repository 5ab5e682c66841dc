import json
import os
from pathlib import Path
from typing import Iterable, List, Sequence

import pandas as pd

from config import constants
from data.models import CurveRow, ExperimentReport, Manifest, PhiEstimate

EPOCH_COLUMNS = ["trial", "k", "eps_k", "delta_k", "n_k", "phi_k", "dis_mass", "m_k", "v_size", "labels"]
TRIAL_COLUMNS = [
    "trial",
    "hypothesis",
    "total_labels",
    "total_unlabeled",
    "oracle_budget",
    "true_error",
    "excess_error",
    "excess_stderr",
    "best_retained",
    "failure",
]
CURVE_COLUMNS = list(CurveRow.model_fields)

MANIFEST = "manifest.json"


class ReportStore:
    """
    Writes run artifacts into one output directory: per-trial JSON, CSV tables with a
    schema line first, and the manifest `replay` reads back. Nothing written depends
    on wall-clock time, so identical runs give identical bytes.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _path(self, name: str) -> Path:
        os.makedirs(self.directory, exist_ok=True)
        return self.directory / name

    def write_csv(self, name: str, schema: str, frame: pd.DataFrame) -> Path:
        path = self._path(name)
        with open(path, "w", newline="") as f:
            f.write(schema + "\n")
            frame.to_csv(f, index=False, float_format="%.10g", lineterminator="\n")
        return path

    def read_csv(self, name: str) -> pd.DataFrame:
        return pd.read_csv(self.directory / name, comment="#")

    def write_trials(self, reports: Sequence[ExperimentReport]) -> List[Path]:
        paths = []
        for report in reports:
            path = self._path(f"trial_{report.trial:03d}.json")
            path.write_text(report.model_dump_json(indent=2) + "\n")
            paths.append(path)

        epochs = [
            {"trial": r.trial, **e.model_dump(exclude={"rounds"})} for r in reports for e in r.epochs
        ]
        paths.append(self.write_csv("epochs.csv", constants.EPOCHS_SCHEMA, pd.DataFrame(epochs, columns=EPOCH_COLUMNS)))
        trials = [r.model_dump(include=set(TRIAL_COLUMNS)) for r in reports]
        paths.append(self.write_csv("trials.csv", constants.TRIALS_SCHEMA, pd.DataFrame(trials, columns=TRIAL_COLUMNS)))
        return paths

    def read_trial(self, trial: int) -> ExperimentReport:
        return ExperimentReport.model_validate_json((self.directory / f"trial_{trial:03d}.json").read_text())

    def write_estimates(self, name: str, estimates: Iterable[PhiEstimate]) -> Path:
        rows = [e.model_dump(include=set(constants.ESTIMATE_COLUMNS)) for e in estimates]
        frame = pd.DataFrame(rows, columns=constants.ESTIMATE_COLUMNS)
        return self.write_csv(name, constants.ESTIMATE_SCHEMA, frame)

    def write_curve(self, rows: Iterable[CurveRow]) -> Path:
        frame = pd.DataFrame([r.model_dump() for r in rows], columns=CURVE_COLUMNS)
        return self.write_csv("curve.csv", constants.CURVE_SCHEMA, frame)

    def write_manifest(self, manifest: Manifest) -> Path:
        path = self._path(MANIFEST)
        path.write_text(json.dumps(manifest.model_dump(), indent=2, sort_keys=True) + "\n")
        return path

    def read_manifest(self) -> Manifest:
        path = self.directory / MANIFEST
        with open(path, "r") as file:
            return Manifest.model_validate(json.load(file))

    def csv_files(self) -> List[str]:
        if not self.directory.exists():
            return []
        return sorted(p.name for p in self.directory.glob("*.csv"))
