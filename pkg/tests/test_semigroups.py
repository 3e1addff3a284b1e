import math

import numpy as np
import pytest

from markovexp import (
    DiracClock,
    ExpClock,
    apply_H,
    apply_H_scaled,
    nonlinear_semigroup,
    nonlinear_semigroup_scaled,
    t_plus,
    validate_generator,
)
from oracles import apply_H_reference, nonlinear_semigroup_reference

REF = np.array([[-1.0, 1.0], [2.0, -2.0]])


def two_state():
    return validate_generator(REF)


def random_generator(rng, n, scale=2.0):
    rates = scale * rng.random((n, n))
    np.fill_diagonal(rates, 0.0)
    np.fill_diagonal(rates, -rates.sum(axis=1))
    return validate_generator(rates)


class TestApplyH:
    def test_annihilates_constants(self):
        out = apply_H(two_state(), np.array([4.0, 4.0]))
        assert np.abs(out).max() == 0.0

    def test_two_state_frozen_value(self):
        # e^{-f} (Q e^{f}) with e^f = (1, 2): rows (-1 + 2, (1 - 2)*2/2) = (1, -1)
        out = apply_H(two_state(), np.array([0.0, math.log(2.0)]))
        assert np.abs(out - np.array([1.0, -1.0])).max() <= 1e-14

    def test_diagonal_lower_bound(self):
        # (Hf)(x) >= Q(x,x) since off-diagonal terms are nonnegative
        rng = np.random.default_rng(5)
        gen = random_generator(rng, 5)
        for _ in range(50):
            f = rng.uniform(-3.0, 3.0, 5)
            assert (apply_H(gen, f) >= np.diag(gen.rates) - 1e-12).all()

    def test_matches_reference_on_random_inputs(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            gen = random_generator(rng, 4)
            f = rng.uniform(-2.0, 2.0, 4)
            assert np.abs(apply_H(gen, f) - apply_H_reference(gen.rates, f)).max() <= 1e-12

    def test_dead_transitions_ignore_infinite_gaps(self):
        # zero rate must silence an enormous f difference
        gen = validate_generator(np.array([[-1.0, 1.0, 0.0],
                                           [2.0, -2.0, 0.0],
                                           [0.0, 3.0, -3.0]]))
        f = np.array([0.0, 0.0, 1000.0])
        out = apply_H(gen, f)
        assert np.isfinite(out[:2]).all()


class TestApplyHScaled:
    def test_r_one_equals_plain(self):
        f = np.array([0.3, -0.8])
        assert np.array_equal(apply_H_scaled(two_state(), 1.0, f), apply_H(two_state(), f))

    def test_constants_vanish_for_all_r(self):
        for r in (0.5, 2.0, 16.0):
            out = apply_H_scaled(two_state(), r, np.array([2.0, 2.0]))
            assert np.abs(out).max() == 0.0

    def test_two_state_r2_frozen_value(self):
        # e^{2f} = (1,4); Q e^{2f} = (3, -6); scale by e^{-2f} then 1/2
        out = apply_H_scaled(two_state(), 2.0, np.array([0.0, math.log(2.0)]))
        assert np.abs(out - np.array([1.5, -0.75])).max() <= 1e-13


class TestNonlinearSemigroup:
    def test_fixes_constants(self):
        out = nonlinear_semigroup(two_state(), 2.0, np.array([1.5, 1.5]))
        assert np.abs(out - 1.5).max() <= 1e-12

    def test_t_zero_identity(self):
        f = np.array([0.2, -0.9])
        assert np.array_equal(nonlinear_semigroup(two_state(), 0.0, f), f)

    def test_two_state_closed_form(self):
        # V(1)f = log(e^{Q}(1,2)) entrywise
        p00 = 2.0 / 3.0 + math.exp(-3.0) / 3.0
        p10 = 2.0 / 3.0 - 2.0 * math.exp(-3.0) / 3.0
        expected = np.array([math.log(p00 + 2.0 * (1.0 - p00)),
                             math.log(p10 + 2.0 * (1.0 - p10))])
        out = nonlinear_semigroup(two_state(), 1.0, np.array([0.0, math.log(2.0)]))
        assert np.abs(out - expected).max() <= 1e-13

    def test_matches_scipy_reference(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            gen = random_generator(rng, 5)
            f = rng.uniform(-2.0, 2.0, 5)
            t = float(rng.uniform(0.1, 3.0))
            ref = nonlinear_semigroup_reference(gen.rates, t, f)
            assert np.abs(nonlinear_semigroup(gen, t, f) - ref).max() <= 1e-11

    def test_flow_property(self):
        rng = np.random.default_rng(9)
        gen = random_generator(rng, 4)
        f = rng.uniform(-1.0, 1.0, 4)
        direct = nonlinear_semigroup(gen, 1.3, f)
        nested = nonlinear_semigroup(gen, 0.8, nonlinear_semigroup(gen, 0.5, f))
        assert np.abs(direct - nested).max() <= 1e-11

    def test_contraction_in_sup_norm(self):
        rng = np.random.default_rng(10)
        gen = random_generator(rng, 4)
        for _ in range(50):
            f, g = rng.uniform(-2.0, 2.0, 4), rng.uniform(-2.0, 2.0, 4)
            gap = np.abs(nonlinear_semigroup(gen, 0.9, f) - nonlinear_semigroup(gen, 0.9, g)).max()
            assert gap <= np.abs(f - g).max() + 1e-12

    def test_large_f_values_stable(self):
        # the max shift must keep huge f out of exp overflow
        out = nonlinear_semigroup(two_state(), 1.0, np.array([700.0, 710.0]))
        assert np.isfinite(out).all()
        assert out.min() >= 700.0 and out.max() <= 710.0


class TestNonlinearSemigroupScaled:
    def test_r_one_reduces_to_plain(self):
        f = np.array([0.1, 0.7])
        a = nonlinear_semigroup_scaled(two_state(), 1.0, 0.6, f)
        b = nonlinear_semigroup(two_state(), 0.6, f)
        assert np.array_equal(a, b)

    def test_constants_fixed_for_all_r(self):
        for r in (1.0, 4.0, 32.0):
            out = nonlinear_semigroup_scaled(two_state(), r, 0.8, np.array([2.0, 2.0]))
            assert np.abs(out - 2.0).max() <= 1e-12

    def test_monotone_in_r_toward_max_plus(self):
        # (1/r) log E e^{r f} is nondecreasing in r
        f = np.array([0.0, 1.0])
        gen = two_state()
        values = [nonlinear_semigroup_scaled(gen, r, 1.0, f)[0] for r in (1.0, 2.0, 4.0, 8.0)]
        for lo, hi in zip(values, values[1:]):
            assert hi >= lo - 1e-12


class TestTPlus:
    def test_constant_h_fixed(self):
        out = t_plus(two_state(), ExpClock(0.7), np.array([2.5, 2.5]))
        assert np.abs(out - 2.5).max() <= 1e-10

    def test_dirac_clock_recovers_semigroup(self):
        h = np.array([0.4, -0.3])
        out = t_plus(two_state(), DiracClock(1.2), h)
        assert np.abs(out - nonlinear_semigroup(two_state(), 1.2, h)).max() <= 1e-14

    def test_monotone_in_h(self):
        # V(t) is order preserving, so the clock average is too
        rng = np.random.default_rng(13)
        gen = random_generator(rng, 4)
        for _ in range(20):
            h = rng.uniform(-1.0, 1.0, 4)
            bump = rng.uniform(0.0, 1.0, 4)
            lo = t_plus(gen, ExpClock(0.5), h)
            hi = t_plus(gen, ExpClock(0.5), h + bump)
            assert (hi >= lo - 1e-12).all()
