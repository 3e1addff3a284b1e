"""Nonlinear (log-exponential) generator and semigroup of a jump chain.

For a chain with generator Q the nonlinear generator acts as

    (Hf)(x) = sum_y Q(x,y) e^{f(y) - f(x)},

the image of Q under conjugation by e^f, and the nonlinear semigroup is the
conditional log moment generating functional

    V(t)f(x) = log E_x[e^{f(X_t)}] = log(e^{tQ} e^f)(x).

Both have speed-r rescalings (1/r)H(rf) and (1/r)V(t)(rf) used by the
scaling-limit module.  V(t) is evaluated exactly through the linear
semigroup on the exponential scale with a max shift, so values of r*f in
the hundreds stay inside double range.
"""

from __future__ import annotations

import numpy as np

from .chains import as_state_function, semigroup_apply


def apply_H(gen, f):
    """(Hf)(x) = sum_y Q(x,y) e^{f(y)-f(x)}.

    Constants are annihilated: H(f + c) = Hf and H(0) = 0.  Entries where
    Q(x,y) = 0 contribute nothing, so their exponents are masked out and
    widely separated f values cannot overflow through dead transitions.
    """
    f = as_state_function(gen, f)
    delta = f[None, :] - f[:, None]
    live = gen.rates != 0.0
    factors = np.exp(np.where(live, delta, 0.0))
    return (gen.rates * factors).sum(axis=1)


def apply_H_scaled(gen, r, f):
    """Speed-r generator (1/r) e^{-rf} Q e^{rf}; r=1 recovers apply_H."""
    if r <= 0:
        raise ValueError(f"speed r must be > 0, got {r}")
    f = as_state_function(gen, f)
    return apply_H(gen, r * f) / r


def nonlinear_semigroup(gen, t, f):
    """V(t)f = log(e^{tQ} e^f), the log-Laplace image of the linear flow.

    Computed as m + log(e^{tQ} e^{f-m}) with m = max f; the shifted
    exponentials sit in (0, 1], which keeps the evaluation overflow-free.
    """
    f = as_state_function(gen, f)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return f.copy()
    m = f.max()
    w = semigroup_apply(gen, t, np.exp(f - m))
    return m + np.log(w)


def nonlinear_semigroup_scaled(gen, r, t, f):
    """Speed-r semigroup (1/r) log(e^{tQ} e^{rf}); r=1 recovers V(t)."""
    if r <= 0:
        raise ValueError(f"speed r must be > 0, got {r}")
    f = as_state_function(gen, f)
    return nonlinear_semigroup(gen, t, r * f) / r


def t_plus(gen, clock, h):
    """Clock average of the semigroup orbit: integral of V(t)h against tau.

    For a point mass at t this is V(t)h itself; for the exponential clock
    with mean lam it dominates the resolvent of the same mean pointwise.
    """
    h = as_state_function(gen, h)
    times, weights = clock.nodes()
    if np.any(times < 0):
        raise ValueError("clock has negative time nodes")
    out = np.zeros_like(h)
    for t, w in zip(times, weights):
        out += w * nonlinear_semigroup(gen, t, h)
    return out
