"""Independent reference computations that tests pin library values against.

Everything here reaches the same quantities by a different route than the
library: closed forms, dense Newton solves with an explicit Jacobian,
scipy's Pade matrix exponential, or brute-force discretization.  Keeping
these separate means a bug in the library cannot hide inside its own
oracle.
"""

import math

import numpy as np
import scipy.linalg


def two_state_transition(a, b, t):
    """Closed-form e^{tQ} for Q = [[-a, a], [b, -b]]."""
    s = a + b
    if s == 0.0:
        return np.eye(2)
    decay = math.exp(-s * t)
    stay0 = b / s + a * decay / s
    stay1 = a / s + b * decay / s
    return np.array([[stay0, 1.0 - stay0], [1.0 - stay1, stay1]])


def apply_H_reference(rates, f):
    """(Hf)(x) = sum_y Q(x,y) e^{f(y)-f(x)} with masked dead transitions."""
    f = np.asarray(f, dtype=float)
    live = rates != 0
    delta = np.where(live, f[None, :] - f[:, None], 0.0)
    return (rates * np.where(live, np.exp(delta), 0.0)).sum(axis=1)


def newton_resolvent(rates, lam, h, tol=1e-12, max_iter=200):
    """Solve f - lam*Hf = h by dense Newton with the explicit Jacobian.

    dHf(x)/df(y) = Q(x,y) e^{f(y)-f(x)} for y != x, and minus the row sum
    of those terms on the diagonal.
    """
    h = np.asarray(h, dtype=float)
    n = h.size
    f = h.copy()
    for _ in range(max_iter):
        live = rates != 0
        delta = np.where(live, f[None, :] - f[:, None], 0.0)
        weighted = rates * np.where(live, np.exp(delta), 0.0)
        residual = f - lam * weighted.sum(axis=1) - h
        if np.abs(residual).max() <= tol:
            return f
        jac_h = weighted.copy()
        np.fill_diagonal(jac_h, 0.0)
        np.fill_diagonal(jac_h, -jac_h.sum(axis=1))
        f = f - np.linalg.solve(np.eye(n) - lam * jac_h, residual)
    raise RuntimeError(f"Newton stalled at residual {np.abs(residual).max():.3e}")


def semigroup_reference(rates, t, u):
    """e^{tQ}u via scipy's Pade expm, independent of uniformization."""
    return scipy.linalg.expm(t * np.asarray(rates)) @ np.asarray(u, dtype=float)


def nonlinear_semigroup_reference(rates, t, f):
    """V(t)f = log(e^{tQ} e^f) via scipy expm."""
    return np.log(scipy.linalg.expm(t * np.asarray(rates)) @ np.exp(np.asarray(f, float)))


def tilted_rates_reference(rates, phi):
    phi = np.asarray(phi, dtype=float)
    out = rates * np.exp(phi[None, :] - phi[:, None])
    np.fill_diagonal(out, 0.0)
    np.fill_diagonal(out, -out.sum(axis=1))
    return out


def kl(p, q):
    """Plain two-vector relative entropy with the 0 log 0 convention."""
    total = 0.0
    for pi, qi in zip(p, q):
        if pi == 0.0:
            continue
        if qi == 0.0:
            return math.inf
        total += pi * math.log(pi / qi)
    return total


def discrete_path_entropy(rates, phi, x, t, dt=1e-3):
    """Relative entropy of the tilted vs base path law observed on a grid.

    Both laws restricted to the step grid are Markov chains; the chain
    rule turns the total into a sum over steps of the expected one-step
    kernel entropy under the tilted law.  Converges to the continuous
    value from below as dt -> 0.
    """
    steps = int(round(t / dt))
    base_step = scipy.linalg.expm(dt * np.asarray(rates))
    tilt_step = scipy.linalg.expm(dt * tilted_rates_reference(rates, phi))
    law = np.zeros(len(rates))
    law[x] = 1.0
    total = 0.0
    for _ in range(steps):
        total += sum(law[i] * kl(tilt_step[i], base_step[i]) for i in range(len(law)))
        law = law @ tilt_step
    return total


def brute_force_joint_entropy(nu, mu):
    """Direct double sum over the product space."""
    total = 0.0
    for i in range(nu.shape[0]):
        for j in range(nu.shape[1]):
            if nu[i, j] == 0.0:
                continue
            if mu[i, j] == 0.0:
                return math.inf
            total += nu[i, j] * math.log(nu[i, j] / mu[i, j])
    return total


def trapezoid_exp_integral(lam, z, t_max_mult=80.0, n=400_000):
    """Integral of z against the exponential density by brute trapezoid."""
    ts = np.linspace(0.0, lam * t_max_mult, n)
    zs = np.asarray([z(t) for t in ts])
    dens = np.exp(-ts / lam) / lam
    return np.trapezoid(zs * dens, ts)
