import json
import math

import numpy as np
import pytest

from csinterp.basis import BasisSpec, intrinsic_weights
from csinterp.guarantees import (
    lambda_factor,
    measurement_quantity,
    prior_support_quantities,
    prior_support_weights,
    sufficient_m,
    truncation_bound,
    weights_from_strategy,
)
from csinterp.indexsets import IndexSet, build_tensor_product, build_total_degree, random_lower_set
from csinterp.measurement import MeasurementSystem, SampleSet, build_system
from csinterp.solver import WeightVector

LOG3 = math.log(3.0) / math.log(2.0)
LC_EXP = math.log(1.0 + 4.0 / math.pi) / math.log(2.0)


def first_k(full, k):
    return IndexSet(full.dimension, list(full)[:k])


class TestMeasurementQuantity:
    def test_unit_weights_small_example(self):
        full = build_tensor_product(1, 9)
        delta = first_k(full, 2)
        ones = np.ones(10)
        assert measurement_quantity(delta, full, ones, ones) == pytest.approx(4.0)

    def test_matched_weights_double_the_cardinality(self):
        # with w = u and sup ratio 1 over the complement, M = 2 |delta|_u
        spec = BasisSpec.from_scenario("CC", 2)
        full = build_total_degree(2, 6)
        delta = random_lower_set(2, 8, seed=1)
        u = intrinsic_weights(spec, full)
        card_u = float(np.sum(u[full.positions(delta)] ** 2))
        assert measurement_quantity(delta, full, u, u) == pytest.approx(2.0 * card_u)

    def test_lower_set_bound_cc(self):
        spec = BasisSpec.from_scenario("CC", 3)
        rng = np.random.default_rng(5)
        for _ in range(30):
            delta = random_lower_set(3, int(rng.integers(1, 25)), seed=int(rng.integers(10**6)))
            full = delta.union(build_total_degree(3, 10))
            u = intrinsic_weights(spec, full)
            s = len(delta)
            assert measurement_quantity(delta, full, u, u) <= 2.0 * s**LOG3 + 1e-9

    def test_lower_set_bounds_lu_lc(self):
        rng = np.random.default_rng(6)
        for scenario, bound in (
            ("LU", lambda d, s: 2.0 * s**2),
            ("LC", lambda d, s: 2.0 * min(2.0**d * s, (math.pi / 2.0) ** d * s**LC_EXP)),
        ):
            for _ in range(30):
                d = int(rng.integers(1, 5))
                spec = BasisSpec.from_scenario(scenario, d)
                delta = random_lower_set(d, int(rng.integers(1, 20)), seed=int(rng.integers(10**6)))
                full = delta.union(build_total_degree(d, 8))
                u = intrinsic_weights(spec, full)
                got = measurement_quantity(delta, full, u, u)
                assert got <= bound(d, len(delta)) + 1e-9

    def test_unweighted_comparison_form(self):
        # M(delta; u, 1) = |delta|_u + max over complement of u^2 times |delta|
        spec = BasisSpec.from_scenario("LU", 2)
        full = build_total_degree(2, 5)
        delta = random_lower_set(2, 6, seed=3)
        u = intrinsic_weights(spec, full)
        ones = np.ones(len(full))
        inside = full.positions(delta)
        outside = np.setdiff1d(np.arange(len(full)), inside)
        expected = float(np.sum(u[inside] ** 2)) + float(np.max(u[outside] ** 2)) * len(delta)
        assert measurement_quantity(delta, full, u, ones) == pytest.approx(expected)

    def test_delta_not_subset_rejected(self):
        full = build_tensor_product(1, 4)
        with pytest.raises(ValueError):
            measurement_quantity(IndexSet(1, [(9,)]), full, np.ones(5), np.ones(5))

    def test_empty_complement_flagged_as_zero_ratio(self):
        full = build_tensor_product(1, 4)
        u = np.ones(5)
        report = sufficient_m(full, full, u, u, epsilon=1e-2)
        assert report.tail_empty
        assert report.tail_sup_ratio == 0.0
        assert report.m_value == pytest.approx(5.0)

    def test_linear_model_estimate_independent_of_weight_exponent(self):
        # with w_i = (i+1)^alpha, u_i ~ (i+1)^beta and alpha >= beta, the
        # measurement quantity stays within a constant of |I_M|_u
        for scenario, beta in (("CC", 0.0), ("LU", 0.5)):
            spec = BasisSpec.from_scenario(scenario, 1)
            full = build_tensor_product(1, 400)
            u = intrinsic_weights(spec, full)
            degrees = np.arange(401, dtype=float)
            for M in (10, 50, 100):
                delta = first_k(full, M)
                card_u = float(np.sum(u[:M] ** 2))
                for alpha in (beta, beta + 1, beta + 2):
                    w = (degrees + 1.0) ** alpha
                    got = measurement_quantity(delta, full, u, w)
                    assert got <= 4.0 * card_u


class TestLambdaFactor:
    def test_epsilon_at_inverse_e(self):
        n, card = 100, 9.0
        expected = 1.0 + 1.0 / math.log(2 * n * math.sqrt(card))
        assert lambda_factor(math.exp(-1.0) * 0.999999, n, card) == pytest.approx(expected, rel=1e-5)

    def test_monotone_in_epsilon(self):
        values = [lambda_factor(eps, 50, 4.0) for eps in (3e-1, 1e-1, 1e-2, 1e-4, 1e-8)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_worked_example(self):
        got = lambda_factor(math.exp(-4.0), 500, 16.0)
        assert got == pytest.approx(1.0 + 2.0 / math.log(4000.0), rel=1e-12)
        assert got == pytest.approx(1.2412, abs=5e-4)

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            lambda_factor(0.5, 100, 4.0)  # above 1/e
        with pytest.raises(ValueError):
            lambda_factor(-0.1, 100, 4.0)
        with pytest.raises(ValueError):
            lambda_factor(1e-3, 0, 4.0)


class TestSufficientM:
    def test_unit_weight_formula(self):
        K, s, eps = 40, 7, 1e-3
        full = build_tensor_product(1, K - 1)
        delta = first_k(full, s)
        ones = np.ones(K)
        report = sufficient_m(delta, full, ones, ones, eps)
        expected = 2.0 * s * math.log(1 / eps) * math.log(2 * K * math.sqrt(s))
        assert report.sufficient_m_estimate == pytest.approx(expected, rel=1e-12)
        assert report.m_value == pytest.approx(2.0 * s)
        assert report.hypothesis_min_weight_ok
        assert report.constant_is_placeholder and report.universal_constant == 1.0

    def test_hypothesis_flag_false_for_small_off_support_weights(self):
        full = build_tensor_product(1, 9)
        delta = first_k(full, 3)
        w = np.ones(10)
        w[7] = 0.5
        report = sufficient_m(delta, full, np.ones(10), w, 1e-2)
        assert not report.hypothesis_min_weight_ok

    def test_report_serializes_with_caveat(self):
        full = build_tensor_product(1, 9)
        report = sufficient_m(first_k(full, 2), full, np.ones(10), np.ones(10), 1e-2)
        payload = json.loads(report.to_json())
        assert payload["constant_is_placeholder"] is True
        assert set(payload) >= {
            "m_value", "delta_card_u", "delta_card_w", "tail_sup_ratio",
            "lam", "sufficient_m_estimate", "log_factor", "hypothesis_min_weight_ok",
        }


def orthogonal_system(n=4):
    spec = BasisSpec.from_scenario("CC", 1)
    samples = SampleSet(spec=spec, points=np.zeros((n, 1)), rng_seed=0)
    iset = build_tensor_product(1, n - 1)
    # sqrt(m) * A = identity, so every singular value is exactly 1
    matrix = np.eye(n) / math.sqrt(n)
    return MeasurementSystem(matrix=matrix, data=np.zeros(n), noise_eta=0.0,
                             sample_set=samples, index_set=iset)


class TestTruncationBound:
    def test_orthogonal_square_system(self):
        system = orthogonal_system(4)
        report = truncation_bound(system, np.ones(4))
        assert report.rank_r == 4
        assert report.sigma_r == pytest.approx(1.0)
        assert report.pk_weight_norm == pytest.approx(2.0)
        assert report.bound_factor == pytest.approx(3.0)

    def test_doubling_weights_doubles_the_margin(self):
        system = orthogonal_system(4)
        a = truncation_bound(system, np.ones(4))
        b = truncation_bound(system, 2.0 * np.ones(4))
        assert b.pk_weight_norm == pytest.approx(2.0 * a.pk_weight_norm)
        assert b.bound_factor - 1.0 == pytest.approx(2.0 * (a.bound_factor - 1.0))

    def test_random_systems_have_positive_sigma_r(self):
        spec = BasisSpec.from_scenario("CC", 1)
        iset = build_tensor_product(1, 200)
        for seed in range(5):
            system = build_system(spec, iset, lambda p: np.cos(p[:, 0]), 50, 0.0, sample_seed=seed)
            report = truncation_bound(system, np.ones(201))
            assert report.rank_r == 50
            assert report.sigma_r > 0
            assert math.isfinite(report.bound_factor)

    def test_rank_zero_rejected(self):
        system = orthogonal_system(3)
        object.__setattr__(system, "matrix", np.zeros((3, 3)))
        with pytest.raises(ValueError):
            truncation_bound(system, np.ones(3))


class TestPriorSupport:
    def test_perfect_estimate(self):
        delta = build_tensor_product(1, 9)
        report = prior_support_quantities(delta, delta, 0.2)
        assert report.rho == 1.0 and report.sigma == 1.0
        assert report.m_weighted == pytest.approx(1.2 * 10)
        assert report.m_unweighted == pytest.approx(2.0 * 10)
        assert report.weighted_is_smaller

    def test_disjoint_estimate(self):
        delta = IndexSet(1, [(i,) for i in range(6)])
        gamma = IndexSet(1, [(i,) for i in range(10, 16)])
        report = prior_support_quantities(delta, gamma, 0.5)
        assert report.rho == 0.0 and report.sigma == 1.0
        assert report.m_weighted == pytest.approx(3.5 * 6)
        assert not report.weighted_is_smaller

    def test_empty_estimate_degenerate(self):
        delta = IndexSet(1, [(0,), (1,)])
        report = prior_support_quantities(delta, IndexSet(1, []), 0.5)
        assert report.degenerate
        assert math.isnan(report.rho)

    def test_closed_form_matches_direct_evaluation(self):
        # both code paths agree exactly, and the improvement predicate is
        # rho > (1 + gamma) / 2, on random (delta, gamma_set, gamma) triples
        rng = np.random.default_rng(17)
        full = build_tensor_product(1, 199)
        ones = np.ones(200)
        checked = 0
        while checked < 100:
            s = int(rng.integers(3, 30))
            g = int(rng.integers(1, 30))
            overlap = int(rng.integers(0, min(s, g) + 1))
            gamma_weight = float(rng.uniform(0.05, 0.95))
            members = rng.choice(180, s + g - overlap, replace=False)
            delta = IndexSet(1, [(int(i),) for i in members[:s]])
            gamma_set = IndexSet(1, [(int(i),) for i in members[s - overlap : s - overlap + g]])
            union = delta.union(gamma_set)
            w = prior_support_weights(full, gamma_set, gamma_weight)
            if float(np.sum(w.values[full.positions(union)] ** 2)) < 1.0:
                continue  # the closed form assumes |union|_w >= 1
            direct = measurement_quantity(union, full, ones, w.values)
            report = prior_support_quantities(delta, gamma_set, gamma_weight)
            assert direct == pytest.approx(report.m_weighted, abs=1e-12)
            assert report.weighted_is_smaller == (report.rho > (1 + gamma_weight) / 2)
            checked += 1

    def test_gamma_domain(self):
        delta = IndexSet(1, [(0,)])
        with pytest.raises(ValueError):
            prior_support_quantities(delta, delta, 1.5)


class TestWeightStrategies:
    def setup_method(self):
        self.spec = BasisSpec.from_scenario("CC", 2)
        self.iset = build_total_degree(2, 3)

    def test_unit(self):
        w = weights_from_strategy("unit", self.iset)
        assert np.all(w.values == 1.0)
        assert w.tag == "unit"

    def test_intrinsic_power_matches_u(self):
        w = weights_from_strategy("intrinsic_power", self.iset, self.spec, alpha=1.0)
        assert np.allclose(w.values, intrinsic_weights(self.spec, self.iset))
        arr = self.iset.as_array()
        nnz = (arr != 0).sum(axis=1)
        assert np.allclose(w.values, 2.0 ** (nnz / 2.0))

    def test_polynomial_growth_univariate(self):
        iset = build_tensor_product(1, 6)
        w = weights_from_strategy("polynomial_growth", iset, alpha=2.0)
        assert w.values[iset.position((4,))] == pytest.approx(25.0)

    def test_polynomial_growth_needs_univariate(self):
        with pytest.raises(ValueError):
            weights_from_strategy("polynomial_growth", self.iset, alpha=1.0)

    def test_anisotropic_product(self):
        w = weights_from_strategy("anisotropic_product", self.iset, alpha=1.5)
        pos = self.iset.position((2, 1))
        assert w.values[pos] == pytest.approx(3.0**1.5 * 2.0**1.5)

    def test_total_degree_growth(self):
        w = weights_from_strategy("total_degree_growth", self.iset, alpha=2.0)
        pos = self.iset.position((2, 1))
        assert w.values[pos] == pytest.approx(16.0)

    def test_prior_support_values(self):
        gamma_set = IndexSet(2, [(0, 0), (1, 0)])
        w = weights_from_strategy("prior_support", self.iset, gamma=0.25, prior_set=gamma_set)
        assert w.values[self.iset.position((0, 0))] == pytest.approx(0.5)
        assert w.values[self.iset.position((0, 1))] == 1.0

    def test_negative_alpha_rejected(self):
        with pytest.raises(ValueError):
            weights_from_strategy("anisotropic_product", self.iset, alpha=-1.0)

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValueError):
            weights_from_strategy("mystery", self.iset)

    def test_custom_passthrough(self):
        vals = np.linspace(1, 2, len(self.iset))
        w = weights_from_strategy("custom", self.iset, values=vals)
        assert np.array_equal(w.values, vals)
        assert isinstance(w, WeightVector)
