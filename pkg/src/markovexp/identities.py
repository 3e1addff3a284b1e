"""Cross-module invariant battery.

Every identity the library is built around, exercised on small seeded
models and reported as (name, residual, tolerance, passed) records.  All
randomness flows from one seeded generator, so a fixed seed fixes every
byte of the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import Generator, StateSpace, linear_resolvent_apply
from .clocks import (
    ConvolutionClock,
    ExpClock,
    check_convolution_split,
    check_integration_by_parts,
)
from .entropy import dv_log_mgf, dv_optimal_tilt, entropy_chain_rule, relative_entropy
from .ldp import (
    PathSpec,
    build_density_family,
    check_hamiltonian_convergence,
    conditional_rate_legendre,
    finite_dim_rate,
    path_rate,
)
from .resolvent import (
    fixed_point_resolvent,
    resolvent_iterate_semigroup,
    tilted_generator,
    variational_value,
)
from .semigroups import apply_H, nonlinear_semigroup, t_plus


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    def __post_init__(self):
        # keep plain floats so reports serialize cleanly
        object.__setattr__(self, "residual", float(self.residual))
        object.__setattr__(self, "tolerance", float(self.tolerance))

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)


def _random_generator(rng, n, scale=2.0):
    rates = scale * rng.random((n, n))
    np.fill_diagonal(rates, 0.0)
    np.fill_diagonal(rates, -rates.sum(axis=1))
    return Generator(StateSpace(tuple(range(n))), rates)


def _random_distribution(rng, n):
    p = rng.random(n) + 0.05
    return p / p.sum()


def _sup(v):
    return float(np.abs(np.asarray(v)).max())


def _sup_signed(v):
    """Largest entry (not absolute value); negative means the bound holds."""
    return float(np.asarray(v).max())


def run_battery(seed=0):
    """Run every check; returns a list of CheckResult in a fixed order."""
    rng = np.random.default_rng(seed)
    two_state = Generator(StateSpace((0, 1)), np.array([[-1.0, 1.0], [2.0, -2.0]]))
    gen4 = _random_generator(rng, 4)
    h4 = rng.uniform(-1.0, 1.0, 4)
    f4 = rng.uniform(-1.0, 1.0, 4)
    results = []

    # resolvent equation: f = R(lam)h solves f - lam Hf = h
    lam = 0.5
    sol = fixed_point_resolvent(gen4, lam, h4)
    results.append(CheckResult(
        "resolvent-left-inverse",
        _sup(sol.f - lam * apply_H(gen4, sol.f) - h4), 1e-8))

    # pseudo-resolvent composition law
    alpha, beta = 0.1, 1.0
    f_beta = fixed_point_resolvent(gen4, beta, h4).f
    mixed = (1 - alpha / beta) * f_beta + (alpha / beta) * h4
    f_comp = fixed_point_resolvent(gen4, alpha, mixed).f
    results.append(CheckResult("resolvent-pseudo-identity", _sup(f_beta - f_comp), 1e-8))

    # sup-norm contraction in h
    g4 = h4 + rng.uniform(-1.0, 1.0, 4)
    lhs = _sup(fixed_point_resolvent(gen4, lam, h4).f - fixed_point_resolvent(gen4, lam, g4).f)
    results.append(CheckResult(
        "resolvent-contraction", max(0.0, lhs - _sup(h4 - g4)), 1e-10))

    # additive constants pass through
    shifted = fixed_point_resolvent(gen4, lam, h4 + 0.7).f
    results.append(CheckResult(
        "resolvent-shift-covariance", _sup(shifted - sol.f - 0.7), 1e-9))

    # m-fold resolvent iterates approach V(t) at first order in t/m
    target = nonlinear_semigroup(two_state, 1.0, np.array([0.0, math.log(2.0)]))
    errs = {m: _sup(resolvent_iterate_semigroup(two_state, 1.0, m,
                                                np.array([0.0, math.log(2.0)])) - target)
            for m in (8, 32)}
    results.append(CheckResult("iterate-error-halving", errs[32] / errs[8], 0.5))

    # flow property V(t+s) = V(t)V(s)
    v_both = nonlinear_semigroup(gen4, 0.9, f4)
    v_split = nonlinear_semigroup(gen4, 0.5, nonlinear_semigroup(gen4, 0.4, f4))
    results.append(CheckResult("semigroup-flow", _sup(v_both - v_split), 1e-9))

    # V(t) is a sup-norm contraction
    g_pair = f4 + rng.uniform(-1.0, 1.0, 4)
    gap = _sup(nonlinear_semigroup(gen4, 0.7, f4) - nonlinear_semigroup(gen4, 0.7, g_pair))
    results.append(CheckResult(
        "semigroup-contraction", max(0.0, gap - _sup(f4 - g_pair)), 1e-10))

    # tilting preserves zero row sums (up to summation-order noise)
    tilt = tilted_generator(gen4, f4)
    results.append(CheckResult(
        "tilt-row-sums", _sup(tilt.tilted.rates.sum(axis=1)), 1e-13))

    # Legendre duality of the log moment generating functional
    mu = _random_distribution(rng, 5)
    f5 = rng.uniform(-2.0, 2.0, 5)
    mgf = dv_log_mgf(f5, mu)
    _, attained = dv_optimal_tilt(f5, mu)
    results.append(CheckResult("duality-equality", abs(mgf - attained), 1e-10))
    worst = 0.0
    for _ in range(50):
        nu = _random_distribution(rng, 5)
        worst = max(worst, float(nu @ f5) - relative_entropy(nu, mu) - mgf)
    results.append(CheckResult("duality-inequality", max(0.0, worst), 1e-12))

    # entropy splits into marginal plus conditional on product spaces
    nu_joint = rng.random((3, 4)) + 0.05
    nu_joint /= nu_joint.sum()
    mu_joint = rng.random((3, 4)) + 0.05
    mu_joint /= mu_joint.sum()
    marginal, conditional = entropy_chain_rule(nu_joint, mu_joint)
    total = relative_entropy(nu_joint.ravel(), mu_joint.ravel())
    results.append(CheckResult(
        "entropy-chain-rule", abs(total - marginal - conditional), 1e-12))

    # exponential clock calculus
    def z_of_t(t):
        return math.exp(-0.3 * t) * math.cos(t)

    _, _, res_parts = check_integration_by_parts(ExpClock(0.8), z_of_t)
    results.append(CheckResult("clock-integration-by-parts", res_parts, 1e-9))
    _, _, res_conv = check_convolution_split(0.4, 1.1, z_of_t)
    results.append(CheckResult("clock-convolution-split", res_conv, 1e-9))

    # resolvents sit below the exponential-clock average of semigroups
    r_val = fixed_point_resolvent(gen4, lam, h4).f
    t_val = t_plus(gen4, ExpClock(lam), h4)
    results.append(CheckResult(
        "clock-resolvent-domination", max(0.0, _sup_signed(r_val - t_val)), 1e-8))

    # concatenating clocks dominates composing their averages
    clock_a, clock_b = ExpClock(0.3), ExpClock(0.6)
    composed = t_plus(gen4, clock_a, t_plus(gen4, clock_b, h4))
    joint = t_plus(gen4, ConvolutionClock(clock_a, clock_b), h4)
    results.append(CheckResult(
        "clock-concatenation", max(0.0, _sup_signed(composed - joint)), 1e-8))

    # variational value is capped by the resolvent and attains it at f*
    phi = r_val + rng.uniform(-0.3, 0.3, 4)
    at_opt = variational_value(gen4, lam, h4, r_val, 0)
    off_opt = variational_value(gen4, lam, h4, phi, 0)
    results.append(CheckResult("variational-attainment", abs(at_opt - r_val[0]), 1e-9))
    results.append(CheckResult(
        "variational-domination", max(0.0, off_opt - r_val[0]), 1e-9))

    # scaled Hamiltonians converge at first order in 1/n
    family = build_density_family(n_list=(8, 16))
    errors = check_hamiltonian_convergence(family, lambda x: math.sin(2 * math.pi * x))
    ratio = errors[8] / errors[16]
    results.append(CheckResult(
        "scaling-hamiltonian-ratio",
        max(0.0, 1.5 - ratio, ratio - 2.5), 0.0))

    # indicator-family Legendre supremum reaches the exact conditional rate
    lvl_n = 16
    exact = finite_dim_rate(family, lvl_n, 0.5, 0.25, 0.75)
    c_max = 40.0 / lvl_n + exact
    approx = conditional_rate_legendre(family, lvl_n, 0.5, 0.25, 0.75, c_max)
    results.append(CheckResult("scaling-rate-legendre", abs(approx - exact), 1e-6))

    # path rate sums are nondecreasing under partition refinement
    path = PathSpec((0.0, 0.25), (0.5, 0.5), lambda x: 0.0)
    _, per_depth = path_rate(family, lvl_n, path, refinement_depth=3)
    worst_drop = max(
        (v1 - v2 for v1, v2 in zip(per_depth, per_depth[1:])), default=0.0)
    results.append(CheckResult("path-rate-monotone", max(0.0, worst_drop), 1e-12))

    return results
