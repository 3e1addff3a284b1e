"""Random-clock averages of the semigroup and how they relate to the resolvent."""
import math

import numpy as np

from markovexp import (
    ConvolutionClock,
    ExpClock,
    check_convolution_split,
    check_integration_by_parts,
    exp_integral,
    fixed_point_resolvent,
    t_plus,
    validate_generator,
)

lam = 0.5
clock = ExpClock(lam)

# int e^{-t} dtau_lam = 1/(1+lam)
print("exp_integral(e^-t) =", exp_integral(clock, lambda t: math.exp(-t)),
      " exact:", 1 / (1 + lam))

lhs, rhs, res = check_integration_by_parts(ExpClock(1.0), lambda t: math.exp(-t))
print("integration by parts, z=e^-t:", lhs, rhs, f"residual {res:.2e}")

lhs, rhs, res = check_convolution_split(0.5, 2.0, lambda t: math.exp(-t))
print("convolution split, z=e^-t:   ", lhs, rhs, f"residual {res:.2e}")

# T+(tau)h averages the semigroup against the clock; with an exponential
# clock of mean lam it dominates the resolvent R(lam)h pointwise
gen = validate_generator(np.array([
    [-1.5, 1.0, 0.5],
    [0.3, -0.8, 0.5],
    [1.0, 1.0, -2.0],
]))
h = np.array([1.0, -0.5, 0.25])

print("\n  lam     R(lam)h(0)   T+(tau_lam)h(0)")
for lam in (0.1, 0.5, 1.0, 2.0):
    r = fixed_point_resolvent(gen, lam, h).f[0]
    tp = t_plus(gen, ExpClock(lam), h)[0]
    print(f"  {lam:4.1f}   {r: .8f}   {tp: .8f}")

# concatenating clocks only increases the averaged value
a, b = ExpClock(0.4), ExpClock(0.9)
joint = t_plus(gen, ConvolutionClock(a, b), h)
nested = t_plus(gen, a, t_plus(gen, b, h))
print("\nT+(a*b)h - T+(a)T+(b)h =", joint - nested, " (componentwise >= 0)")
