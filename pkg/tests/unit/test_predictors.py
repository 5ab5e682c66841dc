from __future__ import annotations

import os
import tempfile
import unittest

import numpy as np
from scipy.optimize import linprog

from tests._testutils import add_src_to_syspath


add_src_to_syspath()

ETAS = (0.0, 0.05, 0.1, 0.25)


def _pair_instance():
    from hypotheses.sets import HypothesisSet, UnlabeledPool

    V = HypothesisSet(predictions=np.array([[1, 1, -1, -1], [1, -1, -1, 1]]))
    return V, UnlabeledPool(points=np.arange(4.0))


def _random_instance(rng):
    from hypotheses.sets import HypothesisSet, UnlabeledPool

    m = int(rng.integers(2, 13))
    n_h = int(rng.integers(2, 9))
    V = HypothesisSet(predictions=rng.choice([-1, 1], size=(n_h, m)))
    return V, UnlabeledPool(points=rng.uniform(size=m))


def _reference_abstention(V, eta):
    """Per-example LP (no grouping, no dedupe) solved by HiGHS; returns mean abstention."""
    m = V.n_points
    positive = (V.rows() > 0).astype(float)
    A_ub = np.vstack([np.hstack([1 - positive, positive]), np.hstack([np.eye(m), np.eye(m)])])
    b_ub = np.concatenate([np.full(V.size, eta * m), np.ones(m)])
    ref = linprog(-np.ones(2 * m), A_ub=A_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    return 1.0 + ref.fun / m


class TestBuildCrpLP(unittest.TestCase):
    def test_pair_has_two_budget_rows(self):
        from predictors.lp_predictor import build_crp_lp

        V, U = _pair_instance()
        program = build_crp_lp(V, U, 0.0)
        self.assertEqual(program.n_budget_rows, 2)
        self.assertEqual(program.n_groups, 4)
        self.assertEqual(program.problem.n_ub, 2 + 4)

    def test_duplicates_give_the_singleton_program(self):
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.lp_predictor import build_crp_lp

        row = np.array([1, -1, -1, 1, 1])
        U = UnlabeledPool(points=np.arange(5.0))
        single = build_crp_lp(HypothesisSet(predictions=row[None, :]), U, 0.1)
        copies = build_crp_lp(HypothesisSet(predictions=np.tile(row, (1000, 1))), U, 0.1)
        np.testing.assert_array_equal(single.problem.A_ub, copies.problem.A_ub)
        np.testing.assert_array_equal(single.problem.b_ub, copies.problem.b_ub)
        np.testing.assert_array_equal(single.problem.c, copies.problem.c)

    def test_identical_columns_share_a_group(self):
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.lp_predictor import build_crp_lp

        V = HypothesisSet(predictions=np.array([[1, 1, -1, 1], [1, 1, 1, -1]]))
        program = build_crp_lp(V, UnlabeledPool(points=np.arange(4.0)), 0.0)
        self.assertEqual(program.n_groups, 3)
        self.assertEqual(sorted(program.group_sizes.tolist()), [1, 1, 2])
        self.assertEqual(program.groups[0], program.groups[1])

    def test_invalid_budget(self):
        from core.errors import InvalidBudgetError
        from predictors.lp_predictor import build_crp_lp

        V, U = _pair_instance()
        for eta in (-0.1, 1.5):
            with self.assertRaisesRegex(InvalidBudgetError, "invalid budget"):
                build_crp_lp(V, U, eta)

    def test_empty_and_mismatched_inputs(self):
        from core.errors import DimensionMismatchError, EmptyHypothesisSetError
        from hypotheses.sets import UnlabeledPool
        from predictors.lp_predictor import build_crp_lp

        V, U = _pair_instance()
        with self.assertRaises(EmptyHypothesisSetError):
            build_crp_lp(V.with_active([]), U, 0.0)
        with self.assertRaises(DimensionMismatchError):
            build_crp_lp(V, UnlabeledPool(points=np.arange(3.0)), 0.0)


class TestSolveCrp(unittest.TestCase):
    def test_zero_budget_abstains_on_disagreement(self):
        from predictors.lp_predictor import solve_crp

        V, U = _pair_instance()
        p = solve_crp(V, U, 0.0)
        np.testing.assert_allclose(p.gamma, [0, 1, 0, 1], atol=1e-6)
        np.testing.assert_allclose(p.xi, [1, 0, 0, 0], atol=1e-6)
        np.testing.assert_allclose(p.zeta, [0, 0, 1, 0], atol=1e-6)
        self.assertAlmostEqual(p.coverage, 0.5, delta=1e-6)

    def test_quarter_budget_gives_full_coverage(self):
        from predictors.lp_predictor import solve_crp
        from predictors.profile import verify_error_guarantee

        V, U = _pair_instance()
        p = solve_crp(V, U, 0.25)
        self.assertAlmostEqual(p.coverage, 1.0, delta=1e-6)
        self.assertLessEqual(verify_error_guarantee(p, V, U, 0.25), 1e-6)

    def test_singleton_never_abstains(self):
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.lp_predictor import solve_crp

        V = HypothesisSet(predictions=np.array([[1, -1, 1, 1, -1]]))
        U = UnlabeledPool(points=np.arange(5.0))
        for eta in ETAS:
            p = solve_crp(V, U, eta)
            self.assertAlmostEqual(p.coverage, 1.0, delta=1e-6)
            if eta == 0.0:
                np.testing.assert_allclose(p.xi - p.zeta, V.predictions[0], atol=1e-6)

    def test_matches_per_example_program(self):
        from predictors.lp_predictor import solve_crp

        rng = np.random.default_rng(17)
        for i in range(60):
            V, U = _random_instance(rng)
            eta = ETAS[i % len(ETAS)]
            self.assertAlmostEqual(solve_crp(V, U, eta).phi, _reference_abstention(V, eta), delta=1e-6)

    def test_guarantee_and_dominance_on_random_instances(self):
        from predictors.disagreement_predictor import dis_abstain_predictor
        from predictors.lp_predictor import solve_crp
        from predictors.profile import verify_error_guarantee

        rng = np.random.default_rng(2024)
        strict, eligible = 0, 0
        for i in range(200):
            V, U = _random_instance(rng)
            eta = ETAS[i % len(ETAS)]
            lp = solve_crp(V, U, eta)
            dis = dis_abstain_predictor(V, U)
            self.assertLessEqual(verify_error_guarantee(lp, V, U, eta), 1e-6)
            self.assertGreaterEqual(lp.coverage, dis.coverage - 1e-6)
            if eta >= 0.05:
                eligible += 1
                strict += lp.coverage > dis.coverage + 0.01
        self.assertGreaterEqual(strict, 0.3 * eligible)

    def test_abstention_lower_bound_from_a_pair(self):
        from hypotheses.sets import empirical_disagreement
        from predictors.lp_predictor import solve_crp

        rng = np.random.default_rng(77)
        for i in range(100):
            V, U = _random_instance(rng)
            eta = (0.0, 0.05, 0.1, 0.2)[i % 4]
            rho = empirical_disagreement(0, 1, np.arange(V.n_points), V)
            self.assertGreaterEqual(solve_crp(V, U, eta).phi, rho - 2 * eta - 1e-6)

    def test_budget_trade_off(self):
        from hypotheses.sets import empirical_disagreement
        from predictors.lp_predictor import solve_crp

        rng = np.random.default_rng(78)
        checked = 0
        for i in range(100):
            V, U = _random_instance(rng)
            idx = np.arange(V.n_points)
            widest = max(
                empirical_disagreement(a, b, idx, V) for a in range(V.n_rows) for b in range(a + 1, V.n_rows)
            )
            eta, lam = (0.1, 0.05) if i % 2 else (0.2, 0.1)
            if widest < 2 * eta - lam:
                continue
            checked += 1
            self.assertLessEqual(
                solve_crp(V, U, eta).phi + lam,
                solve_crp(V, U, eta - lam).phi + 1e-6,
            )
        self.assertGreater(checked, 0)

    def test_coverage_grows_with_budget(self):
        from predictors.lp_predictor import solve_crp

        rng = np.random.default_rng(81)
        for _ in range(60):
            V, U = _random_instance(rng)
            coverage = [solve_crp(V, U, eta).coverage for eta in (0.0, 0.05, 0.1, 0.25, 0.5)]
            for smaller, larger in zip(coverage, coverage[1:]):
                self.assertGreaterEqual(larger, smaller - 1e-6)

    def test_coverage_does_not_drop_on_a_smaller_set(self):
        from predictors.lp_predictor import solve_crp

        rng = np.random.default_rng(82)
        for i in range(60):
            V, U = _random_instance(rng)
            eta = ETAS[i % len(ETAS)]
            keep = np.sort(rng.choice(V.n_rows, size=int(rng.integers(1, V.n_rows + 1)), replace=False))
            full = solve_crp(V, U, eta).coverage
            self.assertGreaterEqual(solve_crp(V.with_active(keep), U, eta).coverage, full - 1e-6)

    def test_error_against_any_labels_is_within_budget_of_every_member(self):
        from predictors.lp_predictor import solve_crp
        from predictors.profile import expected_error_against_labels

        rng = np.random.default_rng(83)
        for i in range(80):
            V, U = _random_instance(rng)
            eta = ETAS[i % len(ETAS)]
            p = solve_crp(V, U, eta)
            y = rng.choice([-1, 1], size=V.n_points)
            error = expected_error_against_labels(p, y)
            for row in V.rows():
                self.assertLessEqual(error, np.mean(row != y) + eta + 1e-6)

    def test_predictor_component(self):
        from predictors.lp_predictor import LPPredictor

        V, U = _pair_instance()
        predictor = LPPredictor()
        self.assertEqual(predictor.kind, "lp")
        self.assertAlmostEqual(predictor.profile(V, U, 0.0).phi, 0.5, delta=1e-6)


class TestDisagreementPredictor(unittest.TestCase):
    def test_pair(self):
        from predictors.disagreement_predictor import dis_abstain_predictor

        V, U = _pair_instance()
        p = dis_abstain_predictor(V, U)
        np.testing.assert_array_equal(p.gamma, [0, 1, 0, 1])
        self.assertEqual(p.coverage, 0.5)

    def test_singleton_and_complements(self):
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.disagreement_predictor import dis_abstain_predictor

        row = np.array([1, -1, 1])
        U = UnlabeledPool(points=np.arange(3.0))
        self.assertEqual(dis_abstain_predictor(HypothesisSet(predictions=row[None, :]), U).coverage, 1.0)
        self.assertEqual(dis_abstain_predictor(HypothesisSet(predictions=np.vstack([row, -row])), U).coverage, 0.0)

    def test_ignores_budget(self):
        from predictors.disagreement_predictor import DisagreementPredictor

        V, U = _pair_instance()
        predictor = DisagreementPredictor()
        np.testing.assert_array_equal(predictor.profile(V, U, 0.0).gamma, predictor.profile(V, U, 0.25).gamma)


class TestProfileChecks(unittest.TestCase):
    def test_all_abstain_violation_is_minus_eta(self):
        from predictors.profile import AbstentionProfile, verify_error_guarantee

        V, U = _pair_instance()
        p = AbstentionProfile(xi=np.zeros(4), zeta=np.zeros(4), gamma=np.ones(4))
        self.assertAlmostEqual(verify_error_guarantee(p, V, U, 0.2), -0.2)

    def test_worst_case_violation(self):
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.profile import AbstentionProfile, verify_error_guarantee

        V = HypothesisSet(predictions=-np.ones((1, 3)))
        p = AbstentionProfile(xi=np.ones(3), zeta=np.zeros(3), gamma=np.zeros(3))
        self.assertEqual(verify_error_guarantee(p, V, UnlabeledPool(points=np.arange(3.0)), 0.0), 1.0)

    def test_profile_must_sum_to_one(self):
        from core.errors import InvalidParameterError
        from predictors.profile import AbstentionProfile

        with self.assertRaises(InvalidParameterError):
            AbstentionProfile(xi=[0.5], zeta=[0.5], gamma=[0.5])
        with self.assertRaises(InvalidParameterError):
            AbstentionProfile(xi=[1.5], zeta=[-0.5], gamma=[0.0])

    def test_expected_error_against_labels(self):
        from predictors.profile import AbstentionProfile, expected_error_against_labels

        p = AbstentionProfile(xi=[1.0, 0.0, 0.5], zeta=[0.0, 1.0, 0.0], gamma=[0.0, 0.0, 0.5])
        self.assertAlmostEqual(expected_error_against_labels(p, np.array([1, 1, -1])), 0.5)

    def test_csv_round_trip(self):
        from predictors.profile import AbstentionProfile

        p = AbstentionProfile(xi=[0.25, 0.0, 1.0], zeta=[0.25, 1.0, 0.0], gamma=[0.5, 0.0, 0.0])
        with tempfile.TemporaryDirectory() as td:
            path = os.path.join(td, "profile.csv")
            p.to_csv(path)
            with open(path) as f:
                self.assertEqual(f.readline().strip(), "# schema: al-profile v1")
            back = AbstentionProfile.from_csv(path)
        np.testing.assert_allclose(back.gamma, p.gamma)
        np.testing.assert_allclose(back.xi, p.xi)


class TestSampleQueries(unittest.TestCase):
    def test_concentrated(self):
        from predictors.profile import AbstentionProfile, sample_queries

        p = AbstentionProfile(xi=[1, 0, 0], zeta=[0, 1, 0], gamma=[0, 0, 1])
        draws = sample_queries(p, 50, np.random.default_rng(0))
        self.assertTrue(np.all(draws == 2))

    def test_zero_count(self):
        from predictors.profile import AbstentionProfile, sample_queries

        p = AbstentionProfile(xi=[1.0], zeta=[0.0], gamma=[0.0])
        self.assertEqual(sample_queries(p, 0, np.random.default_rng(0)).size, 0)

    def test_degenerate_distribution(self):
        from core.errors import DegenerateDistributionError
        from predictors.profile import AbstentionProfile, sample_queries

        p = AbstentionProfile(xi=[1.0, 0.0], zeta=[0.0, 1.0], gamma=[0.0, 0.0])
        with self.assertRaisesRegex(DegenerateDistributionError, "degenerate abstention distribution"):
            sample_queries(p, 1, np.random.default_rng(0))

    def test_uniform_frequencies(self):
        from predictors.profile import AbstentionProfile, sample_queries

        p = AbstentionProfile(xi=np.zeros(4), zeta=np.zeros(4), gamma=np.ones(4))
        n = 100_000
        draws = sample_queries(p, n, np.random.default_rng(31))
        freq = np.bincount(draws, minlength=4) / n
        sigma = np.sqrt(0.25 * 0.75 / n)
        np.testing.assert_allclose(freq, 0.25, atol=3 * sigma)

    def test_deterministic_per_seed(self):
        from predictors.profile import AbstentionProfile, sample_queries

        p = AbstentionProfile(xi=[0.0, 0.5, 0.0], zeta=[0.0, 0.0, 0.5], gamma=[1.0, 0.5, 0.5])
        a = sample_queries(p, 20, np.random.default_rng(8))
        b = sample_queries(p, 20, np.random.default_rng(8))
        np.testing.assert_array_equal(a, b)


class TestFactoryAndFilePredictor(unittest.TestCase):
    def test_factory_kinds(self):
        from config.settings import Settings
        from core.errors import ConfigError
        from predictors.disagreement_predictor import DisagreementPredictor
        from predictors.factory import make_predictor
        from predictors.lp_predictor import LPPredictor

        settings = Settings(lp_tolerance=1e-10, lp_max_iters=123)
        lp = make_predictor("lp", settings)
        self.assertIsInstance(lp, LPPredictor)
        self.assertEqual((lp.tol, lp.max_iters), (1e-10, 123))
        self.assertIsInstance(make_predictor("dis", settings), DisagreementPredictor)
        with self.assertRaises(ConfigError) as ctx:
            make_predictor("bogus", settings)
        self.assertEqual(ctx.exception.field, "predictor")
        with self.assertRaises(ConfigError):
            make_predictor("profile", settings)

    def test_file_predictor_indexes_by_support(self):
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.factory import make_predictor
        from predictors.profile import AbstentionProfile

        table = AbstentionProfile(xi=[1.0, 0.0, 0.0], zeta=[0.0, 0.5, 0.0], gamma=[0.0, 0.5, 1.0])
        with tempfile.TemporaryDirectory() as td:
            path = os.path.join(td, "p.csv")
            table.to_csv(path)
            with self.assertLogs(level="INFO") as logs:
                predictor = make_predictor("profile", profile_path=path)
        self.assertIn("[Profile Predictor] Loaded abstention profile over 3 support points", logs.output[0])
        U = UnlabeledPool(points=[0.9, 0.1, 0.9], support=[2, 0, 2])
        V = HypothesisSet(predictions=np.ones((1, 3)))
        p = predictor.profile(V, U, 0.1)
        np.testing.assert_allclose(p.gamma, [1.0, 0.0, 1.0])
        np.testing.assert_allclose(p.xi, [0.0, 1.0, 0.0])

    def test_malformed_profile_is_a_config_error(self):
        from core.errors import ConfigError
        from predictors.factory import make_predictor

        with tempfile.TemporaryDirectory() as td:
            path = os.path.join(td, "p.csv")
            with open(path, "w") as f:
                f.write("index,xi\n0,1.0\n")
            with self.assertRaises(ConfigError) as ctx:
                make_predictor("profile", profile_path=path)
        self.assertEqual(ctx.exception.field, "profile_path")

    def test_file_predictor_needs_support(self):
        from core.errors import DimensionMismatchError
        from hypotheses.sets import HypothesisSet, UnlabeledPool
        from predictors.file_predictor import ProfileFilePredictor
        from predictors.profile import AbstentionProfile

        with tempfile.TemporaryDirectory() as td:
            path = os.path.join(td, "p.csv")
            AbstentionProfile(xi=[1.0], zeta=[0.0], gamma=[0.0]).to_csv(path)
            predictor = ProfileFilePredictor(path)
        with self.assertRaises(DimensionMismatchError):
            predictor.profile(HypothesisSet(predictions=np.ones((1, 2))), UnlabeledPool(points=[0.1, 0.2]), 0.0)


if __name__ == "__main__":
    unittest.main()
