from __future__ import annotations

import os
import tempfile
import unittest

import numpy as np

from tests._testutils import add_src_to_syspath


add_src_to_syspath()

# Sample sizes at scale = 1 are far beyond a desk run; these tests shrink every
# unlabeled pool and realizable label count by SCALE.
SCALE = 1e-4
EPS = 0.1
TRIALS = 50


def _config(**overrides):
    from config.loader import validate_config

    raw = {
        "eps": EPS,
        "delta": 0.1,
        "scale": SCALE,
        "seed": 11,
        "hypotheses": {"kind": "thresholds", "resolution": 101},
    }
    raw.update(overrides)
    return validate_config(raw)


def _settings():
    from config.settings import Settings

    return Settings(workers=1)


class TestEpochLoop(unittest.TestCase):
    def test_singleton_class_needs_no_labels(self):
        from core.trials import run_trial
        from hypotheses.classes import ThresholdClass

        config = _config(eps=0.25, hypotheses={"kind": "thresholds", "resolution": 1})
        report = run_trial(config, ThresholdClass(resolution=1), 0, _settings())
        self.assertIsNone(report.failure)
        self.assertEqual(len(report.epochs), 2)
        for epoch in report.epochs:
            self.assertLess(epoch.phi_k, 1e-9)
            self.assertEqual((epoch.dis_mass, epoch.labels), (0.0, 0))
        self.assertEqual((report.total_labels, report.oracle_budget, report.hypothesis), (0, 0, 0))

    def test_unit_target_has_an_empty_schedule(self):
        from core.trials import run_trial
        from hypotheses.classes import ThresholdClass

        report = run_trial(_config(eps=1.0), ThresholdClass(resolution=101), 0, _settings())
        self.assertEqual(report.epochs, [])
        self.assertEqual(report.total_labels, 0)
        self.assertEqual(report.hypothesis, 0)

    def test_realizable_consistency_and_label_savings(self):
        from core.trials import run_trial
        from hypotheses.classes import ThresholdClass

        hclass = ThresholdClass(resolution=101)
        config = _config()
        labels = {"lp": [], "dis": []}
        within = 0
        for trial in range(TRIALS):
            reports = {}
            for kind in ("lp", "dis"):
                report = run_trial(config, hclass, trial, _settings(), predictor=kind)
                self.assertIsNone(report.failure)
                self.assertEqual(report.oracle_budget, report.total_labels)
                self.assertEqual(report.total_unlabeled, sum(e.n_k for e in report.epochs))
                sizes = [e.v_size for e in report.epochs]
                self.assertEqual(sizes, sorted(sizes, reverse=True))
                for epoch in report.epochs:
                    self.assertLessEqual(epoch.phi_k, epoch.dis_mass + 1e-9)
                    if kind == "dis":
                        self.assertAlmostEqual(epoch.phi_k, epoch.dis_mass, places=12)
                labels[kind].append(report.total_labels)
                reports[kind] = report
                if kind == "lp":
                    self.assertTrue(report.best_retained)
                    within += report.excess_error <= EPS

            # same seed, same first pool, same full class: only the abstention differs
            lp, dis = reports["lp"].epochs[0], reports["dis"].epochs[0]
            self.assertEqual((lp.n_k, lp.v_size), (dis.n_k, dis.v_size))
            self.assertAlmostEqual(lp.dis_mass, dis.dis_mass, places=12)
            self.assertLessEqual(lp.phi_k, dis.phi_k)
            self.assertLessEqual(lp.m_k, dis.m_k)
        self.assertGreaterEqual(within, 45)
        self.assertLessEqual(np.mean(labels["lp"]), np.mean(labels["dis"]))

    def test_agnostic_with_label_flips(self):
        from core.trials import run_trial
        from hypotheses.classes import ThresholdClass

        hclass = ThresholdClass(resolution=101)
        eps = 0.2
        config = _config(eps=eps, mode="agnostic", oracle={"conditional": {"kind": "uniform-flip", "flip": 0.1}})
        within, retained = 0, 0
        for trial in range(TRIALS):
            report = run_trial(config, hclass, trial, _settings())
            self.assertIsNone(report.failure)
            self.assertEqual(report.oracle_budget, report.total_labels)
            for epoch in report.epochs:
                if epoch.labels:
                    self.assertEqual(epoch.labels, sum(r.n_j for r in epoch.rounds))
            within += report.excess_error <= eps
            retained += bool(report.best_retained)
        self.assertGreaterEqual(within, 45)
        self.assertGreaterEqual(retained, 45)

    def test_agnostic_path_on_noise_free_data(self):
        from core.trials import run_trial
        from hypotheses.classes import ThresholdClass

        hclass = ThresholdClass(resolution=101)
        config = _config(eps=0.2, mode="agnostic")
        outcomes = [run_trial(config, hclass, trial, _settings()) for trial in range(5)]
        self.assertTrue(all(r.failure is None for r in outcomes))
        self.assertGreaterEqual(sum(r.excess_error <= 0.2 for r in outcomes), 4)

    def test_nonadaptive_query_spends_the_worst_case_sample(self):
        from core.trials import run_trial
        from hypotheses.classes import ThresholdClass
        from query.engine import nonadaptive_sample_size

        config = _config(
            eps=0.25, mode="agnostic", query="nonadaptive", oracle={"conditional": {"kind": "uniform-flip", "flip": 0.1}}
        )
        report = run_trial(config, ThresholdClass(resolution=101), 0, _settings())
        self.assertIsNone(report.failure)
        for epoch in report.epochs:
            if epoch.phi_k < 1e-12:
                self.assertEqual(epoch.labels, 0)
                continue
            eps_t = min(1.0, epoch.eps_k / (8 * epoch.phi_k))
            expected = nonadaptive_sample_size(eps_t, epoch.delta_k / 2, 1, SCALE)
            self.assertEqual(epoch.labels, expected)
        self.assertEqual(report.oracle_budget, report.total_labels)

    def test_contradicting_labels_fail_the_realizable_run(self):
        from config.loader import validate_config
        from core.trials import run_trial
        from hypotheses.classes import build_hypothesis_class

        with tempfile.TemporaryDirectory() as td:
            paths = {name: os.path.join(td, f"{name}.txt") for name in ("h", "x", "eta")}
            np.savetxt(paths["h"], [[1, 1], [-1, -1]], fmt="%d")
            np.savetxt(paths["x"], [0.0, 1.0])
            np.savetxt(paths["eta"], [1.0, 0.0])
            config = validate_config(
                {
                    "eps": 0.5,
                    "scale": 1e-3,
                    "hypotheses": {"kind": "matrix", "path": paths["h"]},
                    "oracle": {
                        "marginal": {"kind": "finite-pool", "path": paths["x"]},
                        "conditional": {"kind": "table", "path": paths["eta"]},
                    },
                }
            )
            report = run_trial(config, build_hypothesis_class(config.hypotheses), 0, _settings())
        self.assertIsNotNone(report.failure)
        self.assertIn("inconsistent realizable run", report.failure)
        self.assertEqual(report.epochs, [])


class TestActiveLearner(unittest.TestCase):
    def test_unknown_mode_and_query(self):
        from core.errors import InvalidParameterError
        from hypotheses.classes import ThresholdClass
        from learners.active_learner import ActiveLearner
        from oracles.conditionals import Realizable
        from oracles.marginals import UniformInterval
        from oracles.oracle import Oracle
        from predictors.lp_predictor import LPPredictor

        hclass = ThresholdClass(resolution=11)
        oracle = Oracle(UniformInterval(), Realizable(), hclass, truth=5, rng=np.random.default_rng(0))
        with self.assertRaises(InvalidParameterError):
            ActiveLearner(hclass, oracle, LPPredictor(), 0.5, 0.1, np.random.default_rng(1), query="bogus")
        learner = ActiveLearner(hclass, oracle, LPPredictor(), 0.5, 0.1, np.random.default_rng(1), scale=SCALE)
        with self.assertRaises(InvalidParameterError):
            learner.run("semi-supervised")

    def test_invalid_target(self):
        from core.errors import InvalidTargetError
        from hypotheses.classes import ThresholdClass
        from learners.active_learner import ActiveLearner
        from oracles.conditionals import Realizable
        from oracles.marginals import UniformInterval
        from oracles.oracle import Oracle
        from predictors.lp_predictor import LPPredictor

        hclass = ThresholdClass(resolution=11)
        oracle = Oracle(UniformInterval(), Realizable(), hclass, truth=5, rng=np.random.default_rng(0))
        with self.assertRaises(InvalidTargetError):
            ActiveLearner(hclass, oracle, LPPredictor(), 0.0, 0.1, np.random.default_rng(1))


if __name__ == "__main__":
    unittest.main()
