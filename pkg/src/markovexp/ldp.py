"""Scaling limits of density-dependent birth-death chains on [0,1].

A scaled family is a ladder of chains on grids {0, 1/n, ..., 1} with jump
rates n*b(x) up and n*d(x) down and speed r_n = n.  As n grows the speed-r_n
nonlinear generators converge to a limit Hamiltonian

    Hf(x) = b(x)(e^{f'(x)} - 1) + d(x)(e^{-f'(x)} - 1)

on the interior of the interval, and exponential decay rates of transition
probabilities converge: the conditional rate over a window of length t is
exactly -(1/r_n) log p_t(x, y) on a finite level, the Legendre-type
supremum over scaled indicator observables approaches it from below, and
summing conditional rates over ever finer partitions of a trajectory gives
the path rate functional (initial cost plus a supremum over partitions).

The default model is the Ehrenfest-type choice b(x) = 1-x, d(x) = x, whose
limit dynamics relax to the equilibrium point 1/2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .chains import Generator, StateSpace, transition_matrix
from .semigroups import apply_H_scaled, nonlinear_semigroup_scaled

UNDERFLOW_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class GridLevel:
    """One rung of the ladder: the chain on {0, 1/n, ..., 1} with speed r_n."""

    n: int
    grid: np.ndarray = field(repr=False)
    generator: Generator = field(repr=False)
    speed: float


@dataclass(frozen=True, eq=False)
class ScaledFamily:
    """Ladder of grid chains plus the limit Hamiltonian evaluator.

    limit_hamiltonian(i, values, grid) returns the limit Hf at interior
    grid index i from the function values on that grid (the default model
    estimates f' by a central difference).
    """

    levels: tuple
    limit_hamiltonian: object

    def __post_init__(self):
        speeds = [lvl.speed for lvl in self.levels]
        if any(s2 <= s1 for s1, s2 in zip(speeds, speeds[1:])):
            raise ValueError("level speeds must be strictly increasing")

    @property
    def ns(self):
        return tuple(lvl.n for lvl in self.levels)

    def level(self, n):
        for lvl in self.levels:
            if lvl.n == n:
                return lvl
        raise ValueError(f"family has no level n={n}")


@dataclass(frozen=True, eq=False)
class PathSpec:
    """Piecewise-linear trajectory in [0,1] plus the initial-point cost."""

    times: tuple
    points: tuple
    initial_rate: object

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        points = tuple(float(p) for p in self.points)
        if len(times) != len(points) or not times:
            raise ValueError("times and points must be nonempty and of equal length")
        if times[0] != 0.0:
            raise ValueError("path must start at time 0")
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("path times must be strictly increasing")
        if any(not 0.0 <= p <= 1.0 for p in points):
            raise ValueError("path points must lie in [0,1]")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)


def _default_birth(x):
    return 1.0 - x


def _default_death(x):
    return x


def _bd_limit_hamiltonian(b, d):
    def evaluator(i, values, grid):
        if i <= 0 or i >= len(grid) - 1:
            raise ValueError("limit Hamiltonian needs an interior grid point")
        fp = (values[i + 1] - values[i - 1]) / (grid[i + 1] - grid[i - 1])
        x = grid[i]
        return b(x) * math.expm1(fp) + d(x) * math.expm1(-fp)

    return evaluator


def build_density_family(kind="birth-death", n_list=(8, 16, 32, 64), b=None, d=None,
                         limit_hamiltonian=None):
    """Assemble the grid chains n*b(x) up / n*d(x) down for each n.

    b and d default to the Ehrenfest-type model 1-x and x.  Rates must be
    positive at interior grid points; they may vanish at the boundary
    (no jumps out of the interval are ever created).
    """
    if kind != "birth-death":
        raise ValueError(f"unknown family kind {kind!r}")
    n_list = tuple(int(n) for n in n_list)
    if any(n < 2 for n in n_list):
        raise ValueError("levels need n >= 2")
    if any(n2 <= n1 for n1, n2 in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    b = b if b is not None else _default_birth
    d = d if d is not None else _default_death

    levels = []
    for n in n_list:
        grid = np.arange(n + 1) / n
        rates = np.zeros((n + 1, n + 1))
        for i, x in enumerate(grid):
            up = n * b(x) if i < n else 0.0
            down = n * d(x) if i > 0 else 0.0
            if 0 < i < n and (b(x) <= 0 or d(x) <= 0):
                raise ValueError(f"nonpositive rate at interior grid point x={x}")
            if up < 0 or down < 0:
                raise ValueError(f"negative boundary rate at x={x}")
            if i < n:
                rates[i, i + 1] = up
            if i > 0:
                rates[i, i - 1] = down
            rates[i, i] = -(up + down)
        gen = Generator(StateSpace(tuple(range(n + 1))), rates)
        levels.append(GridLevel(n, grid, gen, float(n)))

    limit = limit_hamiltonian if limit_hamiltonian is not None else _bd_limit_hamiltonian(b, d)
    return ScaledFamily(tuple(levels), limit)


def apply_Hn(family, n, f):
    """Speed-r_n generator of level n applied to f sampled on the grid."""
    lvl = family.level(n)
    values = np.asarray([float(f(x)) for x in lvl.grid])
    return apply_H_scaled(lvl.generator, lvl.speed, values)


def check_hamiltonian_convergence(family, f, interval=(0.1, 0.9)):
    """Per-level sup distance between the grid Hamiltonians and the limit.

    Returns {n: e_n} with e_n the max over grid points inside [a, b] of
    |(H_n f)(x) - Hf(x)|.  Boundary layers are excluded: the limit model's
    derivative terms degenerate where the rates vanish.
    """
    a, bnd = interval
    if not 0.0 < a < bnd < 1.0:
        raise ValueError("interval must satisfy 0 < a < b < 1")
    errors = {}
    for lvl in family.levels:
        values = np.asarray([float(f(x)) for x in lvl.grid])
        hn = apply_H_scaled(lvl.generator, lvl.speed, values)
        idx = [i for i, x in enumerate(lvl.grid) if a - 1e-12 <= x <= bnd + 1e-12]
        if not idx:
            raise ValueError(f"no grid points of level n={lvl.n} inside [{a},{bnd}]")
        gaps = [abs(hn[i] - family.limit_hamiltonian(i, values, lvl.grid)) for i in idx]
        errors[lvl.n] = float(max(gaps))
    return errors


def _grid_index(level, x):
    i = int(round(x * level.n))
    if not 0 <= i <= level.n or abs(level.grid[i] - x) > 1e-9:
        raise ValueError(f"{x} is not a grid point of level n={level.n}")
    return i


def finite_dim_rate(family, n, t, x, y):
    """Exact conditional rate -(1/r_n) log p_t(x, y) on level n.

    Underflowing probabilities (below 1e-300) report +inf rather than a
    garbage logarithm.
    """
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    lvl = family.level(n)
    ix = _grid_index(lvl, x)
    iy = _grid_index(lvl, y)
    p = transition_matrix(lvl.generator, t)[ix, iy]
    if p < UNDERFLOW_FLOOR:
        return math.inf
    return -math.log(p) / lvl.speed


def conditional_rate_legendre(family, n, t, x, y, c_max):
    """Supremum of c*1_y(y) - V_n(t)(c*1_y)(x) over c in [0, c_max].

    The objective c - (1/r_n) log(p e^{r_n c} + 1 - p) is increasing in c,
    so the supremum sits at c_max; it approaches the exact rate
    -(1/r_n) log p from below as c_max grows.
    """
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    if c_max < 0:
        raise ValueError(f"c_max must be >= 0, got {c_max}")
    if c_max == 0:
        return 0.0
    lvl = family.level(n)
    ix = _grid_index(lvl, x)
    iy = _grid_index(lvl, y)
    p = transition_matrix(lvl.generator, t)[ix, iy]
    r = lvl.speed
    with np.errstate(divide="ignore"):
        log_p = np.log(max(p, 0.0))
        log_q = np.log1p(-min(p, 1.0))
    return float(c_max - np.logaddexp(log_p + r * c_max, log_q) / r)


def _snap_to_grid(level, v):
    # nearest grid point, ties toward the lower index
    scaled = v * level.n
    i = int(math.floor(scaled + 0.5))
    if scaled - math.floor(scaled) == 0.5:
        i -= 1
    return min(max(i, 0), level.n)


def path_rate(family, n_ref, path, refinement_depth=0):
    """Initial cost plus the partition supremum of conditional rates.

    The trajectory is sampled by linear interpolation at dyadically
    refined partition points, snapped to the reference grid; each
    refinement inserts midpoints into every interval, and the summed rate
    is nondecreasing in depth.  Returns (deepest value, per-depth list).
    """
    if refinement_depth < 0:
        raise ValueError("refinement_depth must be >= 0")
    lvl = family.level(n_ref)
    times = np.asarray(path.times)
    base = float(path.initial_rate(path.points[0]))
    per_depth = []
    for depth in range(refinement_depth + 1):
        pieces = 2**depth
        knots = [times[0]]
        for t1, t2 in zip(times, times[1:]):
            step = (t2 - t1) / pieces
            knots.extend(t1 + step * (j + 1) for j in range(pieces))
        knots = np.asarray(knots)
        values = np.interp(knots, times, np.asarray(path.points))
        snapped = [lvl.grid[_snap_to_grid(lvl, v)] for v in values]
        total = base
        for k in range(1, len(knots)):
            total += finite_dim_rate(family, n_ref, knots[k] - knots[k - 1],
                                     snapped[k - 1], snapped[k])
        per_depth.append(total)
    return per_depth[-1], per_depth


def semigroup_convergence_check(family, f, t, interval=(0.1, 0.9)):
    """Distance of each level's scaled semigroup action from the finest level.

    d_n = max over grid points of level n inside [a,b] of
    |V_n(t)(f on grid_n) - V_N(t)(f on grid_N)| with the finest level
    interpolated onto the coarser grid.
    """
    if len(family.levels) < 2:
        raise ValueError("need at least two levels to compare")
    a, bnd = interval
    if not 0.0 < a < bnd < 1.0:
        raise ValueError("interval must satisfy 0 < a < b < 1")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    finest = family.levels[-1]
    values_fine = np.asarray([float(f(x)) for x in finest.grid])
    v_fine = nonlinear_semigroup_scaled(finest.generator, finest.speed, t, values_fine)
    deviations = {}
    for lvl in family.levels[:-1]:
        values = np.asarray([float(f(x)) for x in lvl.grid])
        v_lvl = nonlinear_semigroup_scaled(lvl.generator, lvl.speed, t, values)
        v_ref = np.interp(lvl.grid, finest.grid, v_fine)
        mask = (lvl.grid >= a - 1e-12) & (lvl.grid <= bnd + 1e-12)
        deviations[lvl.n] = float(np.abs(v_lvl[mask] - v_ref[mask]).max())
    return deviations


def rate_rows(family, t_values, pairs):
    """RateTable rows (n, t, x, y, value), deterministically ordered."""
    rows = []
    for lvl in family.levels:
        for t in t_values:
            for x, y in pairs:
                rows.append((lvl.n, float(t), float(x), float(y),
                             finite_dim_rate(family, lvl.n, t, x, y)))
    rows.sort(key=lambda row: row[:4])
    return rows


def write_rate_table(path, rows):
    """Emit (n, t, x, y, value) rows as CSV with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "t", "x", "y", "value"])
        for n, t, x, y, value in rows:
            writer.writerow([n, f"{t:.17g}", f"{x:.17g}", f"{y:.17g}", f"{value:.17g}"])
