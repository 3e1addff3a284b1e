"""Random time clocks and the exponential integral identities.

The central object is the exponential clock with mean lam: the law
lam^{-1} e^{-t/lam} dt on [0, inf), discretized by a Gauss-Laguerre rule
(integrals against it become sums over nodes).  Point masses, finite
mixtures, and two-fold convolutions are also supported; that family is all
the averaging operators downstream ever need.

Two identities tie clocks to the operator calculus and are exposed as
checkable operations with both sides evaluated independently:

  integration by parts   lam * int z dtau_lam = int int_0^t z(s) ds tau_lam(dt)
  convolution split      int z dtau_beta = (a/b) int z dtau_a
                           + (1 - a/b) int int z(s+u) tau_b(du) tau_a(ds)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

DEFAULT_ORDER = 64


@dataclass(frozen=True, eq=False)
class ExpClock:
    """Exponential law with the given mean, carrying its quadrature rule."""

    mean: float
    order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.mean <= 0:
            raise ValueError(f"clock mean must be > 0, got {self.mean}")
        if self.order < 2:
            raise ValueError("quadrature order must be >= 2")

    def nodes(self):
        """(times, weights): int z dtau = sum_i w_i z(t_i), weights sum to 1."""
        x, w = laggauss(self.order)
        w = w / w.sum()  # kill the O(1e-16) rule bias on constants
        return self.mean * x, w


@dataclass(frozen=True)
class DiracClock:
    """Point mass at a single time."""

    time: float

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("point-mass time must be >= 0")

    def nodes(self):
        return np.array([self.time]), np.array([1.0])


class MixtureClock:
    """Finite mixture sum_i p_i * clock_i."""

    def __init__(self, components):
        components = tuple((float(p), c) for p, c in components)
        if not components:
            raise ValueError("mixture needs at least one component")
        probs = np.array([p for p, _ in components])
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("mixture weights must be nonnegative and sum to 1")
        self.components = components

    def nodes(self):
        times, weights = [], []
        for p, clock in self.components:
            t, w = clock.nodes()
            times.append(t)
            weights.append(p * w)
        return np.concatenate(times), np.concatenate(weights)


class ConvolutionClock:
    """Law of T1 + T2 for independent clocks; nodes are all pairwise sums."""

    def __init__(self, first, second):
        self.first = first
        self.second = second

    def nodes(self):
        t1, w1 = self.first.nodes()
        t2, w2 = self.second.nodes()
        times = (t1[:, None] + t2[None, :]).ravel()
        weights = (w1[:, None] * w2[None, :]).ravel()
        return times, weights


def _sample(z, times):
    values = np.asarray([z(t) for t in times], dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand not finite at a quadrature node")
    return values


def exp_integral(clock, z):
    """Quadrature value of int_0^inf z(t) tau(dt) for a clock tau."""
    times, weights = clock.nodes()
    return float(weights @ _sample(z, times))


def check_integration_by_parts(clock, z):
    """Both sides of  lam * int z dtau_lam = int int_0^t z(s) ds tau_lam(dt).

    The two sides are computed by independent routes: the left by the
    clock's own rule, the right by nesting a Gauss-Legendre rule of the
    same order over [0, t] inside the clock rule.  Returns (lhs, rhs,
    residual).
    """
    if not isinstance(clock, ExpClock):
        raise ValueError("identity is specific to exponential clocks")
    lhs = clock.mean * exp_integral(clock, z)

    times, weights = clock.nodes()
    x_leg, w_leg = leggauss(clock.order)
    inner = np.empty_like(times)
    for i, t in enumerate(times):
        s = 0.5 * t * (x_leg + 1.0)
        inner[i] = 0.5 * t * (w_leg @ _sample(z, s))
    rhs = float(weights @ inner)
    return lhs, rhs, abs(lhs - rhs)


def check_convolution_split(alpha, beta, z, order=DEFAULT_ORDER):
    """Both sides of the resolvent-composition clock identity.

    For 0 < alpha < beta:
      int z dtau_beta = (alpha/beta) int z dtau_alpha
        + (1 - alpha/beta) int int z(s+u) tau_beta(du) tau_alpha(ds).
    Returns (lhs, rhs, residual).
    """
    if not 0 < alpha < beta:
        raise ValueError(f"need 0 < alpha < beta, got alpha={alpha}, beta={beta}")
    clock_a = ExpClock(alpha, order)
    clock_b = ExpClock(beta, order)
    lhs = exp_integral(clock_b, z)

    t_a, w_a = clock_a.nodes()
    t_b, w_b = clock_b.nodes()
    grid = t_a[:, None] + t_b[None, :]
    samples = np.asarray([z(t) for t in grid.ravel()], dtype=float).reshape(grid.shape)
    if not np.all(np.isfinite(samples)):
        raise ValueError("integrand not finite at a quadrature node")
    double = float(w_a @ samples @ w_b)
    ratio = alpha / beta
    rhs = ratio * exp_integral(clock_a, z) + (1.0 - ratio) * double
    return lhs, rhs, abs(lhs - rhs)
