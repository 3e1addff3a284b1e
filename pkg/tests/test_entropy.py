import math

import numpy as np
import pytest

from markovexp import (
    dv_log_mgf,
    dv_optimal_tilt,
    entropy_chain_rule,
    path_relative_entropy,
    relative_entropy,
    tilted_tail_bound,
    validate_generator,
)
from oracles import brute_force_joint_entropy, discrete_path_entropy

REF = np.array([[-1.0, 1.0], [2.0, -2.0]])


def rand_dist(rng, n, floor=0.0):
    p = rng.random(n) + floor
    return p / p.sum()


class TestRelativeEntropy:
    def test_equal_distributions_zero(self):
        mu = np.array([0.2, 0.3, 0.5])
        assert relative_entropy(mu, mu) == 0.0

    def test_frozen_two_point_value(self):
        # 0.25 ln(1/2) + 0.75 ln(3/2)
        value = relative_entropy(np.array([0.25, 0.75]), np.array([0.5, 0.5]))
        expected = 0.25 * math.log(0.5) + 0.75 * math.log(1.5)
        assert abs(value - expected) <= 1e-15
        assert abs(value - 0.13081204) <= 1e-8

    def test_absolute_continuity_failure(self):
        assert relative_entropy(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == math.inf

    def test_zero_nu_mass_ignored(self):
        value = relative_entropy(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        assert value == 0.0

    def test_nonnegative_on_random_pairs(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = rng.integers(2, 10)
            assert relative_entropy(rand_dist(rng, n), rand_dist(rng, n)) >= 0.0

    def test_jointly_convex(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            nu1, nu2 = rand_dist(rng, n, 0.01), rand_dist(rng, n, 0.01)
            mu1, mu2 = rand_dist(rng, n, 0.01), rand_dist(rng, n, 0.01)
            theta = float(rng.random())
            mix = relative_entropy(theta * nu1 + (1 - theta) * nu2,
                                   theta * mu1 + (1 - theta) * mu2)
            split = theta * relative_entropy(nu1, mu1) + (1 - theta) * relative_entropy(nu2, mu2)
            assert mix <= split + 1e-12

    def test_distribution_validation(self):
        with pytest.raises(ValueError):
            relative_entropy(np.array([0.5, 0.6]), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            relative_entropy(np.array([0.5, 0.5]), np.array([0.5, 0.5, 0.0]))


class TestDvLogMgf:
    def test_constant_function(self):
        mu = np.array([0.4, 0.6])
        assert abs(dv_log_mgf(np.array([3.0, 3.0]), mu) - 3.0) <= 1e-15

    def test_two_point_closed_form(self):
        value = dv_log_mgf(np.array([0.0, math.log(3.0)]), np.array([0.5, 0.5]))
        assert abs(value - math.log(2.0)) <= 1e-15

    def test_log_cosh(self):
        for t in (0.3, 1.0, 5.0):
            value = dv_log_mgf(np.array([-t, t]), np.array([0.5, 0.5]))
            assert abs(value - math.log(math.cosh(t))) <= 1e-12

    def test_large_values_no_overflow(self):
        value = dv_log_mgf(np.array([800.0, 0.0]), np.array([0.5, 0.5]))
        assert abs(value - (800.0 + math.log(0.5))) <= 1e-9

    def test_off_support_max_ignored(self):
        # the largest f value sits on a zero-mass state
        value = dv_log_mgf(np.array([100.0, 1.0]), np.array([0.0, 1.0]))
        assert abs(value - 1.0) <= 1e-12


class TestDvOptimalTilt:
    def test_constant_gives_mu_back(self):
        mu = np.array([0.3, 0.7])
        nu, value = dv_optimal_tilt(np.array([2.0, 2.0]), mu)
        assert np.abs(nu - mu).max() <= 1e-15
        assert abs(value - 2.0) <= 1e-12

    def test_two_point_example(self):
        nu, value = dv_optimal_tilt(np.array([0.0, math.log(3.0)]), np.array([0.5, 0.5]))
        assert np.abs(nu - np.array([0.25, 0.75])).max() <= 1e-15
        assert abs(value - math.log(2.0)) <= 1e-12

    def test_extreme_concentration(self):
        nu, _ = dv_optimal_tilt(np.array([10.0, 0.0]), np.array([1e-9, 1.0 - 1e-9]))
        expected = math.exp(10.0) * 1e-9 / (math.exp(10.0) * 1e-9 + (1.0 - 1e-9))
        assert abs(nu[0] - expected) <= 1e-12

    def test_attained_value_matches_mgf(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            n = int(rng.integers(2, 10))
            f = rng.uniform(-4.0, 4.0, n)
            mu = rand_dist(rng, n, 0.01)
            _, attained = dv_optimal_tilt(f, mu)
            assert abs(attained - dv_log_mgf(f, mu)) <= 1e-12


class TestDvDuality:
    def test_inequality_over_random_triples(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            n = int(rng.integers(2, 11))
            f = rng.uniform(-3.0, 3.0, n)
            nu = rand_dist(rng, n)
            mu = rand_dist(rng, n, 0.01)
            gap = float(nu @ f) - relative_entropy(nu, mu) - dv_log_mgf(f, mu)
            assert gap <= 1e-12

    def test_second_direction_equality_at_log_ratio(self):
        rng = np.random.default_rng(32)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            nu = rand_dist(rng, n, 0.05)
            mu = rand_dist(rng, n, 0.05)
            f = np.log(nu / mu)
            lower = float(nu @ f) - dv_log_mgf(f, mu)
            assert abs(relative_entropy(nu, mu) - lower) <= 1e-10


class TestChainRule:
    def test_product_case_splits(self):
        nu1 = np.array([0.3, 0.7])
        nu2 = np.array([0.1, 0.4, 0.5])
        mu1 = np.array([0.5, 0.5])
        mu2 = np.array([0.2, 0.3, 0.5])
        marginal, conditional = entropy_chain_rule(np.outer(nu1, nu2), np.outer(mu1, mu2))
        assert abs(marginal - relative_entropy(nu1, mu1)) <= 1e-14
        assert abs(conditional - relative_entropy(nu2, mu2)) <= 1e-14

    def test_equal_joints_give_zero(self):
        rng = np.random.default_rng(41)
        joint = rng.random((3, 4)) + 0.1
        joint /= joint.sum()
        marginal, conditional = entropy_chain_rule(joint, joint)
        assert marginal == 0.0
        assert abs(conditional) <= 1e-15

    def test_random_joints_match_brute_force(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            nu = rng.random((3, 4)) + 0.02
            nu /= nu.sum()
            mu = rng.random((3, 4)) + 0.02
            mu /= mu.sum()
            marginal, conditional = entropy_chain_rule(nu, mu)
            assert abs(marginal + conditional - brute_force_joint_entropy(nu, mu)) <= 1e-12

    def test_missing_conditional_kernel_infinite(self):
        nu = np.array([[0.5, 0.0], [0.25, 0.25]])
        mu = np.array([[0.0, 0.0], [0.5, 0.5]])
        marginal, conditional = entropy_chain_rule(nu, mu)
        assert math.isinf(marginal) or math.isinf(conditional)


class TestPathRelativeEntropy:
    def test_constant_tilt_is_free(self):
        gen = validate_generator(REF)
        for t in (0.0, 0.5, 2.0):
            assert path_relative_entropy(gen, np.array([3.0, 3.0]), 0, t) <= 1e-12

    def test_zero_time_zero(self):
        gen = validate_generator(REF)
        assert path_relative_entropy(gen, np.array([0.0, 1.0]), 0, 0.0) == 0.0

    def test_two_state_against_discrete_oracle(self):
        gen = validate_generator(REF)
        phi = np.array([0.0, math.log(2.0)])
        value = path_relative_entropy(gen, phi, 0, 1.0)
        ref = discrete_path_entropy(REF, phi, 0, 1.0, dt=1e-3)
        assert value > 0.0
        assert abs(value - ref) <= 1e-3

    def test_nondecreasing_in_t(self):
        gen = validate_generator(REF)
        phi = np.array([0.4, -0.8])
        values = [path_relative_entropy(gen, phi, 1, t) for t in np.linspace(0.0, 2.0, 9)]
        for earlier, later in zip(values, values[1:]):
            assert later >= earlier - 1e-10

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            path_relative_entropy(validate_generator(REF), np.array([0.0, 1.0]), 0, -1.0)


class TestTiltedTailBound:
    def test_zero_tail_is_epsilon_plus_slack(self):
        eps = 0.05
        for r, m in ((1.0, 0.0), (10.0, 2.0), (100.0, 0.5)):
            bound = tilted_tail_bound(0.0, r, m, eps)
            slack = eps / (math.e * r * max(m, eps))
            assert abs(bound - (eps + slack)) <= 1e-15

    def test_zero_budget_example(self):
        bound = tilted_tail_bound(0.01, 10.0, 0.0, 0.1)
        slack = 0.1 / (math.e * 10.0 * 0.1)
        assert abs(bound - (0.11 + slack)) <= 1e-15

    def test_monotone_in_tail_mass(self):
        values = [tilted_tail_bound(tail, 5.0, 1.0, 0.1) for tail in (0.0, 0.01, 0.1, 0.5)]
        for lo, hi in zip(values, values[1:]):
            assert hi > lo

    def test_monotone_in_budget_with_positive_tail(self):
        # the head term grows with M once any tail mass is present
        values = [tilted_tail_bound(0.01, 5.0, m, 0.1) for m in (0.1, 0.5, 1.0, 2.0)]
        for lo, hi in zip(values, values[1:]):
            assert hi > lo

    def test_huge_budget_overflows_to_inf(self):
        assert tilted_tail_bound(0.5, 100.0, 1000.0, 0.01) == math.inf

    def test_epsilon_must_be_positive(self):
        with pytest.raises(ValueError):
            tilted_tail_bound(0.1, 1.0, 1.0, 0.0)

    def test_random_tilted_measures_respect_bound(self):
        # 500 random exponential tilts on a 20-point space; budget set to
        # the realized entropy, K the 15 heaviest mu states
        rng = np.random.default_rng(51)
        r = 10.0
        for _ in range(500):
            mu = rand_dist(rng, 20, 0.002)
            g = rng.uniform(-2.0, 2.0, 20)
            nu = np.exp(g) * mu
            nu /= nu.sum()
            order = np.argsort(mu)
            outside = order[:5]
            tail_mu = float(mu[outside].sum())
            tail_nu = float(nu[outside].sum())
            m = relative_entropy(nu, mu) / r
            for eps in (0.05, 0.2):
                assert tail_nu <= tilted_tail_bound(tail_mu, r, m, eps) + 1e-15
