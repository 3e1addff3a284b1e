"""Relative entropy on finite spaces and its variational structure.

Covers the Kullback-Leibler divergence S(nu|mu) with the 0*log 0 = 0
convention (+inf exactly when absolute continuity fails), the two
directions of the Donsker-Varadhan duality

    log <e^f, mu> = sup_nu { <f, nu> - S(nu|mu) },
    S(nu|mu)      = sup_f  { <f, nu> - log <e^f, mu> },

the chain rule splitting a joint divergence into marginal plus expected
conditional parts, the closed-form path relative entropy of an
exponentially tilted chain, and an explicit tail bound for measures with
bounded entropy rate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import rel_entr

from .chains import as_state_function
from .resolvent import tilted_generator
from .semigroups import apply_H
from .chains import semigroup_apply

_DIST_TOL = 1e-12


def _check_distribution(p, name):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError(f"{name} has negative or non-finite mass")
    if abs(p.sum() - 1.0) > _DIST_TOL * max(1, p.size):
        raise ValueError(f"{name} sums to {p.sum()}, not 1")
    return p


def relative_entropy(nu, mu):
    """S(nu|mu) = sum nu log(nu/mu); +inf unless nu << mu; always >= 0."""
    nu = _check_distribution(nu, "nu")
    mu = _check_distribution(mu, "mu")
    if nu.shape != mu.shape:
        raise ValueError("distributions live on different spaces")
    total = float(rel_entr(nu, mu).sum())
    return max(total, 0.0) if math.isfinite(total) else math.inf


def dv_log_mgf(f, mu):
    """log sum_x e^{f(x)} mu(x), evaluated with a max shift on the support.

    The shift matters: the scaling-limit module feeds tilts r*f with
    magnitudes in the hundreds.
    """
    f = np.asarray(f, dtype=float)
    mu = _check_distribution(mu, "mu")
    if f.shape != mu.shape:
        raise ValueError("function and distribution live on different spaces")
    if not np.all(np.isfinite(f)):
        raise ValueError("f has non-finite values")
    live = mu > 0
    m = f[live].max()
    return float(m + np.log(np.dot(mu[live], np.exp(f[live] - m))))


def dv_optimal_tilt(f, mu):
    """Maximizer of <f,nu> - S(nu|mu) and its attained value.

    The optimal tilt is nu*(x) = e^{f(x)} mu(x) / <e^f, mu>; the attained
    value recomputed from the definition equals dv_log_mgf(f, mu).
    """
    f = np.asarray(f, dtype=float)
    mu = _check_distribution(mu, "mu")
    if f.shape != mu.shape:
        raise ValueError("function and distribution live on different spaces")
    m = f[mu > 0].max()
    w = mu * np.exp(np.where(mu > 0, f - m, 0.0))
    nu = w / w.sum()
    value = float(np.dot(f, nu)) - relative_entropy(nu, mu)
    return nu, value


def entropy_chain_rule(nu_joint, mu_joint):
    """Split S(nu|mu) for joints on a product space X x Y.

    Returns (marginal, conditional): the divergence of the X-marginals and
    the nu1-average of the divergence between the row-normalized
    conditional kernels.  The two add up to the total joint divergence.
    Rows x with nu1(x) = 0 contribute nothing regardless of mu's kernel
    there; nu1(x) > 0 with mu1(x) = 0 makes the conditional +inf.
    """
    nu = np.asarray(nu_joint, dtype=float)
    mu = np.asarray(mu_joint, dtype=float)
    if nu.ndim != 2 or mu.shape != nu.shape:
        raise ValueError("joints must be matrices of matching shape")
    for name, p in (("nu_joint", nu), ("mu_joint", mu)):
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError(f"{name} has negative or non-finite mass")
        if abs(p.sum() - 1.0) > _DIST_TOL * max(1, p.size):
            raise ValueError(f"{name} sums to {p.sum()}, not 1")

    nu1 = nu.sum(axis=1)
    mu1 = mu.sum(axis=1)
    marginal = float(rel_entr(nu1, mu1).sum())
    marginal = max(marginal, 0.0) if math.isfinite(marginal) else math.inf

    conditional = 0.0
    for x in range(nu.shape[0]):
        if nu1[x] == 0:
            continue
        if mu1[x] == 0:
            conditional = math.inf
            break
        term = float(rel_entr(nu[x] / nu1[x], mu[x] / mu1[x]).sum())
        if not math.isfinite(term):
            conditional = math.inf
            break
        conditional += nu1[x] * max(term, 0.0)
    return marginal, conditional


def _adaptive_simpson(fun, a, b, tol, max_depth=40):
    # standard recursive Simpson with Richardson correction
    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        fl = fun(0.5 * (lo + mid))
        fr = fun(0.5 * (mid + hi))
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, fl, fmid, left, 0.5 * tol, depth + 1) + recurse(
            mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth + 1
        )

    fa, fm, fb = fun(a), fun(0.5 * (a + b)), fun(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def path_relative_entropy(gen, phi, x, t, tol=1e-10):
    """Divergence up to time t of the phi-tilted chain law from the base law.

    Both laws start at state index x.  The tilted law has Radon-Nikodym
    density exp{phi(X_t) - phi(X_0) - int_0^t (H phi)(X_s) ds} on the
    time-t sigma-algebra, which gives the closed form

        S_t = E~[phi(X_t)] - phi(x) - int_0^t E~[(H phi)(X_s)] ds

    with E~ the tilted expectation; the time integral runs through
    adaptive Simpson quadrature at absolute tolerance tol.
    """
    phi = as_state_function(gen, phi)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if not 0 <= x < gen.n:
        raise ValueError(f"state index {x} out of range")
    if t == 0:
        return 0.0
    tilted = tilted_generator(gen, phi).tilted
    h_phi = apply_H(gen, phi)
    end = semigroup_apply(tilted, t, phi)[x]

    def running_cost(s):
        return semigroup_apply(tilted, s, h_phi)[x]

    integral = _adaptive_simpson(running_cost, 0.0, float(t), tol)
    return max(float(end - phi[x] - integral), 0.0)


def tilted_tail_bound(tail_mass_mu, r, M, eps):
    """Tail bound for nu with entropy rate (1/r) S(nu|mu) <= M.

    For any set K with mu(K^c) = tail_mass_mu,

        nu(K^c) <= eps + tail_mass_mu * e^{rM/eps} + eps / (e r max(M, eps)).

    The last term is a documented slack covering thresholds e^{rM/eps}
    close to 1, where the defining split of the integral picks up the
    negative part of t*log t (bounded below by -1/e).
    """
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if not 0 <= tail_mass_mu <= 1:
        raise ValueError(f"tail_mass_mu must be in [0,1], got {tail_mass_mu}")
    if r <= 0:
        raise ValueError(f"speed r must be > 0, got {r}")
    if M < 0:
        raise ValueError(f"entropy budget M must be >= 0, got {M}")
    if tail_mass_mu == 0.0:
        head = 0.0
    else:
        try:
            head = tail_mass_mu * math.exp(r * M / eps)
        except OverflowError:
            head = math.inf
    slack = eps / (math.e * r * max(M, eps))
    return eps + head + slack
