"""Nonlinear resolvent of a jump chain: solve f - lam*Hf = h.

The solution operator R(lam) = (I - lam H)^{-1} is sup-norm nonexpansive,
shift covariant, monotone, and satisfies a composition law in lam that
substitutes for the linear resolvent identity.  It is also the value of an
entropy-penalized control problem: over exponentially tilted chain laws Q
with tilt phi started at x,

    R(lam)h(x) = sup_phi  E_Q[ h(X_T) ] - penalty,  T ~ Exp(mean lam),

and `variational_value` evaluates the inner objective in closed form for
any tilt, with the supremum attained exactly at the solution f*.

Solver.  The residual map f -> f - h - lam*Hf has Jacobian I - lam*A^f
with A^f a generator matrix, so the root f* is unique and bracketed by the
constants min h and max h.  Two paths:

  * plain fixed-point iteration f <- h + lam*Hf when its certified
    contraction bound lam * 2q * e^{2(||h||+1)} < 0.5 holds;
  * otherwise a monotone nonlinear Jacobi relaxation.  Freezing the other
    coordinates, the x-th equation is xi - lam*s_x e^{-xi} = c_x with
    s_x = sum_{y != x} Q(x,y) e^{f(y)} >= 0, solved exactly by
    xi = c_x + W0(lam*s_x e^{-c_x}) (Lambert W).  Sweeping from the
    constant sub- and supersolutions min h, max h gives two monotone
    sequences squeezing f*; each sweep is one masked matvec plus one
    vectorized W0.

Multivariate Newton lives in the test suite as an independent oracle, not
here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import lambertw

from .chains import Generator, as_state_function, linear_resolvent_apply
from .semigroups import apply_H


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class TiltedChain:
    """A generator together with its exponential tilt by a potential."""

    base: Generator
    tilt: np.ndarray = field(repr=False)
    tilted: Generator


def tilted_generator(gen, phi):
    """Chain with rates Q(x,y) e^{phi(y)-phi(x)}, diagonal re-balanced.

    This is the generator of the phi-tilted path law; tilting by -phi
    undoes it.  Dead transitions stay dead, so the exponent is masked
    there and large potentials cannot overflow through zero rates.
    """
    phi = as_state_function(gen, phi)
    delta = phi[None, :] - phi[:, None]
    live = gen.rates != 0.0
    off = np.where(live, gen.rates * np.exp(np.where(live, delta, 0.0)), 0.0)
    np.fill_diagonal(off, 0.0)
    rates = off.copy()
    np.fill_diagonal(rates, -off.sum(axis=1))
    return TiltedChain(gen, phi, Generator(gen.space, rates))


@dataclass(frozen=True, eq=False)
class ResolventSolution:
    f: np.ndarray
    iterations: int
    residual: float


def _residual(gen, lam, h, f):
    return f - h - lam * apply_H(gen, f)


def _w0_of_exp(log_arg):
    # W0(e^L), stable for any L: direct where e^L is representable,
    # else Newton on eta + log(eta) = L from the asymptotic start
    out = np.empty_like(log_arg)
    small = log_arg <= 700.0
    out[small] = lambertw(np.exp(log_arg[small])).real
    if np.any(~small):
        L = log_arg[~small]
        eta = L - np.log(L)
        for _ in range(4):
            eta -= (eta + np.log(eta) - L) / (1.0 + 1.0 / eta)
        out[~small] = eta
    return out


def _jacobi_sweep(off, c, log_lam, f):
    # simultaneous coordinate solves xi = c + W0(lam * s * e^{-c});
    # the max shift keeps exp in (0, 1], so s never overflows
    m = f.max()
    s_shifted = off @ np.exp(f - m)
    with np.errstate(divide="ignore"):
        log_s = np.where(s_shifted > 0.0, m + np.log(s_shifted), -np.inf)
    return c + _w0_of_exp(log_lam + log_s - c)


def fixed_point_resolvent(gen, lam, h, tol=1e-10, max_iter=50000):
    """Solve f = h + lam*Hf; returns f with sup-norm residual <= tol."""
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    h = as_state_function(gen, h)

    f = h.copy()
    res = _residual(gen, lam, h, f)
    if np.abs(res).max() <= tol:
        return ResolventSolution(f, 0, float(np.abs(res).max()))

    q = gen.uniformization_rate
    bound = math.fabs(lam) * 2.0 * q  # times e^{2B} below, in logs
    B = float(np.abs(h).max()) + 1.0
    banach_ok = math.log(bound) + 2.0 * B < math.log(0.5) if bound > 0 else True

    if banach_ok:
        for k in range(1, max_iter + 1):
            f_next = np.clip(h + lam * apply_H(gen, f), -B, B)
            res = _residual(gen, lam, h, f_next)
            gap = float(np.abs(res).max())
            if gap <= tol:
                return ResolventSolution(f_next, k, gap)
            f = f_next
        raise ConvergenceError(
            f"contraction iteration stalled after {max_iter} steps, residual {gap:.3e}", gap
        )

    # monotone Jacobi bracket from the constant sub/supersolutions
    off = np.array(gen.rates)
    np.fill_diagonal(off, 0.0)
    d = -np.diag(gen.rates)
    c = h - lam * d
    log_lam = math.log(lam)
    lower = np.full(gen.n, h.min())
    upper = np.full(gen.n, h.max())
    for k in range(1, max_iter + 1):
        lower = _jacobi_sweep(off, c, log_lam, lower)
        upper = _jacobi_sweep(off, c, log_lam, upper)
        best = None
        best_gap = math.inf
        for cand in (lower, upper):
            gap = float(np.abs(_residual(gen, lam, h, cand)).max())
            if gap < best_gap:
                best, best_gap = cand, gap
        if best_gap <= tol:
            return ResolventSolution(best.copy(), k, best_gap)
    raise ConvergenceError(
        f"bracket iteration stalled after {max_iter} sweeps, residual {best_gap:.3e}",
        best_gap,
    )


def resolvent_iterate_semigroup(gen, t, m, h, tol=1e-10):
    """m-fold composition R(t/m)^m h; approaches V(t)h as m grows."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if m < 1 or int(m) != m:
        raise ValueError(f"m must be a positive integer, got {m}")
    h = as_state_function(gen, h)
    if t == 0:
        return h.copy()
    lam = t / m
    f = h
    for _ in range(int(m)):
        f = fixed_point_resolvent(gen, lam, f, tol=tol).f
    return f


def variational_value(gen, lam, h, phi, x):
    """Entropy-penalized payoff of the phi-tilted candidate law at state x.

    Closed form: the clock-averaged payoff minus the accumulated entropy
    collapses, through the exponential integration-by-parts identity, to

        [(I - lam*A^phi)^{-1}(h - phi + lam*H(phi))](x) + phi(x).

    It never exceeds the resolvent R(lam)h(x) and matches it exactly when
    phi is the resolvent solution itself.
    """
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    h = as_state_function(gen, h)
    phi = as_state_function(gen, phi)
    if not 0 <= x < gen.n:
        raise ValueError(f"state index {x} out of range")
    tilted = tilted_generator(gen, phi).tilted
    rhs = h - phi + lam * apply_H(gen, phi)
    return float(linear_resolvent_apply(tilted, lam, rhs)[x] + phi[x])


def resolvent_contraction_check(gen, lam, h1, h2, tol=1e-10):
    """(lhs, rhs) with lhs = ||R(lam)h1 - R(lam)h2||, rhs = ||h1 - h2||."""
    h1 = as_state_function(gen, h1)
    h2 = as_state_function(gen, h2)
    f1 = fixed_point_resolvent(gen, lam, h1, tol=tol).f
    f2 = fixed_point_resolvent(gen, lam, h2, tol=tol).f
    return float(np.abs(f1 - f2).max()), float(np.abs(h1 - h2).max())


def pseudo_resolvent_check(gen, alpha, beta, h, tol=1e-10):
    """Residual of the composition law linking R(beta) and R(alpha).

    R(beta)h should equal R(alpha) applied to the convex mixture
    (1 - alpha/beta) R(beta)h + (alpha/beta) h.
    """
    if not 0 < alpha < beta:
        raise ValueError(f"need 0 < alpha < beta, got alpha={alpha}, beta={beta}")
    h = as_state_function(gen, h)
    f_beta = fixed_point_resolvent(gen, beta, h, tol=tol).f
    mixed = (1.0 - alpha / beta) * f_beta + (alpha / beta) * h
    f_alpha = fixed_point_resolvent(gen, alpha, mixed, tol=tol).f
    return float(np.abs(f_beta - f_alpha).max())


def strong_continuity_check(gen, h, lam_list, tol=1e-10):
    """Gaps ||R(lam)h - h|| for decreasing lam; they vanish linearly.

    At the solution the gap identity ||R(lam)h - h|| = lam*||H(R(lam)h)||
    is an exact rearrangement of the fixed-point equation.
    """
    lam_list = list(lam_list)
    if any(l <= 0 for l in lam_list):
        raise ValueError("lam_list must be positive")
    if any(b >= a for a, b in zip(lam_list, lam_list[1:])):
        raise ValueError("lam_list must be strictly decreasing")
    h = as_state_function(gen, h)
    gaps = []
    for lam in lam_list:
        f = fixed_point_resolvent(gen, lam, h, tol=tol).f
        gaps.append(float(np.abs(f - h).max()))
    return gaps
