"""Finite-state Markov jump chain primitives.

A chain is specified by its rate matrix Q (off-diagonal entries are jump
rates, rows sum to zero).  Everything downstream of this module goes through
exact dense linear algebra: transition matrices come from uniformization,
which is unconditionally stable for generators and preserves nonnegativity,
and the linear resolvent (I - lam*Q)^{-1} u is a direct solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# beyond this the leading Poisson weight exp(-qt) risks underflow; split t
_MAX_POISSON_EXPONENT = 350.0
_POISSON_TAIL = 1e-14
_ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Ordered finite collection of state labels."""

    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) < 1:
            raise ValueError("state space needs at least one state")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("state labels must be distinct")

    @property
    def size(self):
        return len(self.labels)

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown state label {label!r}") from None


def default_space(n):
    return StateSpace(tuple(range(n)))


@dataclass(frozen=True, eq=False)
class Generator:
    """Validated rate matrix of a finite-state chain.

    rates[x, y] for y != x is the jump rate x -> y; diagonal entries make
    rows sum to zero.  Rows of all zeros (absorbing states) are legal.
    """

    space: StateSpace
    rates: np.ndarray = field(repr=False)

    def __post_init__(self):
        rates = np.array(self.rates, dtype=float)
        if rates.ndim != 2 or rates.shape[0] != rates.shape[1]:
            raise ValueError("rate matrix must be square")
        if rates.shape[0] != self.space.size:
            raise ValueError("rate matrix size does not match state space")
        _check_rates(rates)
        rates.setflags(write=False)
        object.__setattr__(self, "rates", rates)

    @property
    def n(self):
        return self.space.size

    @property
    def uniformization_rate(self):
        # max total jump rate, the q of e^{tQ} = sum_k Poisson(qt;k) P^k
        return float(np.max(-np.diag(self.rates), initial=0.0))


def _check_rates(rates):
    bad = np.argwhere(~np.isfinite(rates))
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"non-finite entry ({i},{j})")
    off = rates.copy()
    np.fill_diagonal(off, 0.0)
    bad = np.argwhere(off < 0)
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"negative off-diagonal ({i},{j})")
    sums = rates.sum(axis=1)
    bad = np.nonzero(np.abs(sums) > _ROW_SUM_TOL)[0]
    if bad.size:
        i = bad[0]
        raise ValueError(f"row {i} sums to {sums[i]}")


def validate_generator(rates, labels=None):
    """Build a Generator from a raw matrix, or raise naming the bad entry."""
    rates = np.asarray(rates, dtype=float)
    if rates.ndim != 2 or rates.shape[0] != rates.shape[1]:
        raise ValueError("rate matrix must be square")
    space = StateSpace(tuple(labels) if labels is not None else tuple(range(rates.shape[0])))
    return Generator(space, rates)


def as_state_function(gen, values):
    """Coerce values to a finite float vector on gen's state space."""
    v = np.asarray(values, dtype=float)
    if v.shape != (gen.n,):
        raise ValueError(f"state function has shape {v.shape}, expected ({gen.n},)")
    if not np.all(np.isfinite(v)):
        raise ValueError("state function has non-finite values")
    return v


def _poisson_weighted_action(rates, q, t, mat):
    """sum_k Poisson(qt;k) P^k @ mat with P = I + Q/q, truncated at tail < 1e-14."""
    qt = q * t
    P = np.eye(rates.shape[0]) + rates / q
    weight = np.exp(-qt)
    total = weight
    term = mat.copy()
    acc = weight * term
    k = 0
    # crude upper bound on the number of terms needed for the stated tail
    k_max = int(qt + 40.0 * np.sqrt(qt + 1.0) + 64)
    while total < 1.0 - _POISSON_TAIL and k < k_max:
        k += 1
        term = P @ term
        weight *= qt / k
        acc += weight * term
        total += weight
    return acc


def _expm_generator(rates, t):
    q = float(np.max(-np.diag(rates), initial=0.0))
    n = rates.shape[0]
    if t == 0.0 or q == 0.0:
        return np.eye(n)
    if q * t > _MAX_POISSON_EXPONENT:
        half = _expm_generator(rates, t / 2.0)
        return half @ half
    return _poisson_weighted_action(rates, q, t, np.eye(n))


def transition_matrix(gen, t):
    """e^{tQ} by uniformization; rows are probability vectors."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return _expm_generator(gen.rates, float(t))


def semigroup_apply(gen, t, u):
    """Apply the linear semigroup: x -> E_x u(X_t), i.e. e^{tQ} u."""
    u = as_state_function(gen, u)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return transition_matrix(gen, t) @ u


def linear_resolvent_apply(gen, lam, u):
    """Solve (I - lam*Q) x = u.

    Equals the exponential-clock average of the semigroup orbit,
    integral of e^{tQ}u against the mean-lam exponential law.
    """
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    u = as_state_function(gen, u)
    A = np.eye(gen.n) - lam * gen.rates
    return np.linalg.solve(A, u)
