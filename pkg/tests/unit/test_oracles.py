from __future__ import annotations

import os
import tempfile
import unittest

import numpy as np

from tests._testutils import add_src_to_syspath


add_src_to_syspath()


def _threshold_oracle(conditional=None, truth=5, seed=0, resolution=11):
    from hypotheses.classes import ThresholdClass
    from oracles.conditionals import Realizable
    from oracles.marginals import UniformInterval
    from oracles.oracle import Oracle

    hclass = ThresholdClass(0.0, 1.0, resolution=resolution)
    return Oracle(UniformInterval(), conditional or Realizable(), hclass, truth=truth, rng=np.random.default_rng(seed))


class TestMarginals(unittest.TestCase):
    def test_zero_draws(self):
        oracle = _threshold_oracle()
        self.assertEqual(len(oracle.draw_unlabeled(0)), 0)
        self.assertEqual(oracle.budget, 0)

    def test_negative_draws(self):
        from core.errors import InvalidParameterError

        with self.assertRaises(InvalidParameterError):
            _threshold_oracle().draw_unlabeled(-1)

    def test_uniform_mean(self):
        oracle = _threshold_oracle()
        pool = oracle.draw_unlabeled(100_000)
        self.assertAlmostEqual(float(pool.points.mean()), 0.5, delta=0.01)
        self.assertEqual(oracle.budget, 0)

    def test_gaussian_covariance(self):
        from oracles.marginals import Gaussian

        pool = Gaussian(dim=2).sample(100_000, np.random.default_rng(3))
        np.testing.assert_allclose(np.cov(pool.points.T), np.eye(2), atol=0.03)

    def test_grid_draws_carry_support(self):
        from oracles.marginals import UniformGrid

        grid = UniformGrid(0.0, 1.0, 5)
        pool = grid.sample(50, np.random.default_rng(1))
        np.testing.assert_allclose(pool.points[:, 0], grid.points[pool.support, 0])
        self.assertEqual(len(grid.support_pool()), 5)

    def test_finite_support_from_text(self):
        from oracles.marginals import FiniteSupport

        with tempfile.TemporaryDirectory() as td:
            points, weights = os.path.join(td, "x.txt"), os.path.join(td, "w.txt")
            np.savetxt(points, [[0.0, 1.0], [2.0, 3.0]])
            np.savetxt(weights, [3.0, 1.0])
            support = FiniteSupport.from_text(points, weights)
        self.assertEqual(support.points.shape, (2, 2))
        np.testing.assert_allclose(support.weights, [0.75, 0.25])

    def test_bad_weights(self):
        from core.errors import InvalidParameterError
        from oracles.marginals import FiniteSupport

        with self.assertRaises(InvalidParameterError):
            FiniteSupport([0.0, 1.0], weights=[1.0, -1.0])


class TestLabels(unittest.TestCase):
    def test_realizable_labels_follow_truth(self):
        oracle = _threshold_oracle()
        pool = oracle.draw_unlabeled(500)
        labels = oracle.query_labels(pool, np.arange(500))
        expected = oracle.hclass.predict(pool, [oracle.truth])[0]
        np.testing.assert_array_equal(labels, expected)

    def test_flip_rate(self):
        from oracles.conditionals import UniformFlip

        oracle = _threshold_oracle(UniformFlip(0.1), seed=9)
        pool = oracle.draw_unlabeled(100_000)
        labels = oracle.query_labels(pool, np.arange(len(pool)))
        truth = oracle.hclass.predict(pool, [oracle.truth])[0]
        self.assertAlmostEqual(float(np.mean(labels != truth)), 0.1, delta=0.005)

    def test_tsybakov_tends_to_half_at_boundary(self):
        from hypotheses.sets import UnlabeledPool
        from oracles.conditionals import Tsybakov

        model = Tsybakov(c=1.0, kappa=2.0)
        pool = UnlabeledPool(points=np.zeros(4))
        eta = model.eta(pool, np.array([1e-6, -1e-6, 0.5, -2.0]))
        np.testing.assert_allclose(eta, [0.5 + 5e-7, 0.5 - 5e-7, 0.75, 0.0])

    def test_table_needs_support(self):
        from core.errors import DimensionMismatchError
        from hypotheses.sets import UnlabeledPool
        from oracles.conditionals import Table

        with self.assertRaises(DimensionMismatchError):
            Table([0.5]).eta(UnlabeledPool(points=[0.0]), np.zeros(1))

    def test_budget_counts_every_answer(self):
        oracle = _threshold_oracle()
        pool = oracle.draw_unlabeled(10)
        oracle.query_labels(pool, [0, 1, 1, 2, 3])
        self.assertEqual(oracle.budget, 5)
        label = oracle.query_label(pool, 4)
        self.assertIn(label, (-1, 1))
        self.assertEqual(oracle.budget, 6)
        oracle.query_labels(pool, [])
        self.assertEqual(oracle.budget, 6)

    def test_unknown_truth(self):
        from core.errors import UnknownHypothesisError

        with self.assertRaises(UnknownHypothesisError):
            _threshold_oracle(truth=11)


class TestExcessError(unittest.TestCase):
    def test_truth_has_zero_excess(self):
        oracle = _threshold_oracle()
        self.assertEqual(oracle.true_excess_error(oracle.truth).value, 0.0)
        self.assertEqual(oracle.best_hypothesis, oracle.truth)

    def test_closed_form_thresholds(self):
        oracle = _threshold_oracle()
        excess = oracle.true_excess_error(2)
        self.assertEqual(excess.method, "closed-form")
        self.assertAlmostEqual(excess.value, 0.3)

        pool = oracle.draw_unlabeled(100_000)
        predictions = oracle.hclass.predict(pool, [2, oracle.truth])
        self.assertAlmostEqual(float(np.mean(predictions[0] != predictions[1])), 0.3, delta=0.01)

    def test_closed_form_with_flips(self):
        from oracles.conditionals import UniformFlip

        oracle = _threshold_oracle(UniformFlip(0.2))
        self.assertAlmostEqual(oracle.nu_star, 0.2)
        self.assertAlmostEqual(oracle.true_excess_error(9).value, 0.6 * 0.4)
        self.assertAlmostEqual(oracle.true_error(9), 0.2 + 0.6 * 0.4)

    def test_finite_support_matches_per_point_sum(self):
        from hypotheses.classes import ThresholdClass
        from oracles.conditionals import Table
        from oracles.marginals import FiniteSupport
        from oracles.oracle import Oracle

        eta = np.array([0.1, 0.3, 0.6, 0.8])
        weights = np.array([0.1, 0.2, 0.3, 0.4])
        marginal = FiniteSupport([0.1, 0.3, 0.5, 0.7], weights)
        hclass = ThresholdClass(0.0, 0.8, resolution=5)
        oracle = Oracle(marginal, Table(eta), hclass, truth=0, rng=np.random.default_rng(0))

        pred = hclass.predict(marginal.support_pool())
        manual = np.array([np.sum(weights * np.where(row > 0, 1 - eta, eta)) for row in pred])
        np.testing.assert_allclose(oracle.class_errors(), manual)
        self.assertEqual(oracle.best_hypothesis, int(np.argmin(manual)))
        for h in range(5):
            ex = oracle.true_excess_error(h)
            self.assertEqual(ex.method, "exact")
            self.assertAlmostEqual(ex.value, manual[h] - manual.min())

    def test_disagreement_with_best_on_finite_support(self):
        from hypotheses.classes import ThresholdClass
        from oracles.conditionals import Realizable
        from oracles.marginals import UniformGrid
        from oracles.oracle import Oracle

        hclass = ThresholdClass(0.0, 1.0, resolution=11)
        oracle = Oracle(UniformGrid(0.05, 0.95, 10), Realizable(), hclass, truth=5, rng=np.random.default_rng(0))
        np.testing.assert_allclose(oracle.disagreement_with_best(), np.abs(np.arange(11) - 5) / 10)

    def test_monte_carlo_linear(self):
        from hypotheses.classes import LinearClass
        from oracles.conditionals import Realizable
        from oracles.marginals import Gaussian
        from oracles.oracle import Oracle

        hclass = LinearClass(dim=2, resolution=8)
        oracle = Oracle(Gaussian(2), Realizable(), hclass, truth=0, rng=np.random.default_rng(0), reference_size=20_000)
        excess = oracle.true_excess_error(2)
        self.assertEqual(excess.method, "monte-carlo")
        # a quarter turn disagrees on half the plane
        self.assertAlmostEqual(excess.value, 0.5, delta=0.02)
        self.assertGreater(excess.stderr, 0.0)
        self.assertLess(oracle.true_excess_error(1).value, excess.value)


class TestBuildOracle(unittest.TestCase):
    def test_default_truth_is_middle(self):
        from data.models import OracleConfig
        from hypotheses.classes import ThresholdClass
        from oracles.oracle import build_oracle

        oracle = build_oracle(OracleConfig(), ThresholdClass(resolution=101), np.random.default_rng(0))
        self.assertEqual(oracle.truth, 50)

    def test_truth_out_of_range(self):
        from core.errors import ConfigError
        from data.models import OracleConfig
        from hypotheses.classes import ThresholdClass
        from oracles.oracle import build_oracle

        with self.assertRaises(ConfigError) as ctx:
            build_oracle(OracleConfig(truth=500), ThresholdClass(resolution=101), np.random.default_rng(0))
        self.assertEqual(ctx.exception.field, "oracle.truth")

    def test_table_conditional_from_file(self):
        from data.models import OracleConfig
        from hypotheses.classes import MatrixClass
        from oracles.oracle import build_oracle

        with tempfile.TemporaryDirectory() as td:
            points, table = os.path.join(td, "x.txt"), os.path.join(td, "eta.txt")
            np.savetxt(points, [0.0, 1.0, 2.0])
            np.savetxt(table, [0.0, 1.0, 1.0])
            cfg = OracleConfig.model_validate(
                {
                    "marginal": {"kind": "finite-pool", "path": points},
                    "conditional": {"kind": "table", "path": table},
                    "truth": 0,
                }
            )
            hclass = MatrixClass(np.array([[-1, 1, 1], [1, 1, 1]]))
            oracle = build_oracle(cfg, hclass, np.random.default_rng(0))
        self.assertEqual(oracle.best_hypothesis, 0)
        self.assertAlmostEqual(oracle.true_excess_error(1).value, 1 / 3)


if __name__ == "__main__":
    unittest.main()
