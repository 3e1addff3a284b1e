"""Density-scaled birth-death chains approaching their deterministic limit.

States are densities k/n on [0,1]; up rate n(1-x), down rate nx.  As n
grows the scaled generators converge to the limit Hamiltonian
b(x)(e^{f'} - 1) + d(x)(e^{-f'} - 1) and transition probabilities decay
exponentially at speed n with an explicit rate.
"""
import math

from markovexp import (
    PathSpec,
    build_density_family,
    check_hamiltonian_convergence,
    conditional_rate_legendre,
    finite_dim_rate,
    path_rate,
)

family = build_density_family(n_list=(8, 16, 32, 64))

print("sup |H_n f - Hf| on [0.1, 0.9]:")
for name, f in (("x", lambda x: x),
                ("x^2", lambda x: x * x),
                ("sin 2pi x", lambda x: math.sin(2 * math.pi * x))):
    errors = check_hamiltonian_convergence(family, f)
    print(f"  f = {name:9s}", {n: f"{e:.2e}" for n, e in errors.items()})

print("\nconditional rate I_t(3/4 | 1/4) at t = 0.5:")
for n in family.ns:
    exact = finite_dim_rate(family, n, 0.5, 0.25, 0.75)
    approx = conditional_rate_legendre(family, n, 0.5, 0.25, 0.75, c_max=3.0)
    print(f"  n={n:3d}  exact {exact:.6f}   indicator sup (c<=3) {approx:.6f}")

# staying at the equilibrium density is asymptotically free
rest = PathSpec((0.0, 0.01), (0.5, 0.5), lambda x: 0.0)
print("\nequilibrium path cost at n_ref=64 by refinement depth:")
value, per_depth = path_rate(family, 64, rest, refinement_depth=4)
for depth, v in enumerate(per_depth):
    print(f"  depth {depth}: {v:.6f}")

# a forced excursion against the drift is not
push = PathSpec((0.0, 0.25, 0.5), (0.5, 0.9, 0.5), lambda x: 0.0)
value, _ = path_rate(family, 64, push, refinement_depth=3)
print(f"\nexcursion to 0.9 and back: {value:.4f}")
