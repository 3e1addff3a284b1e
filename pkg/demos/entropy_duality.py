"""Donsker-Varadhan duality and the entropy chain rule, numerically."""
import numpy as np

from markovexp import (
    dv_log_mgf,
    dv_optimal_tilt,
    entropy_chain_rule,
    path_relative_entropy,
    relative_entropy,
    validate_generator,
)

rng = np.random.default_rng(0)

mu = np.array([0.5, 0.25, 0.125, 0.125])
f = np.array([1.0, -1.0, 0.5, 0.0])

print("log E_mu e^f          =", dv_log_mgf(f, mu))
nu_star, attained = dv_optimal_tilt(f, mu)
print("attained at nu*       =", attained)
print("nu*                   =", nu_star)

# any other nu falls strictly short
for _ in range(3):
    w = rng.uniform(0.1, 1.0, size=4)
    nu = w / w.sum()
    gain = float(f @ nu) - relative_entropy(nu, mu)
    print("  suboptimal nu gives ", gain)

# chain rule: joint divergence = marginal part + conditional part
nu_joint = rng.uniform(0.1, 1.0, size=(3, 3))
mu_joint = rng.uniform(0.1, 1.0, size=(3, 3))
nu_joint /= nu_joint.sum()
mu_joint /= mu_joint.sum()
marginal, conditional = entropy_chain_rule(nu_joint, mu_joint)
total = relative_entropy(nu_joint.ravel(), mu_joint.ravel())
print("\njoint divergence      =", total)
print("marginal + conditional=", marginal + conditional)

# entropy of a tilted path law grows with the tilt and with the horizon
gen = validate_generator(np.array([[-1.0, 1.0], [2.0, -2.0]]))
print("\npath entropy of the phi-tilted law started at 0:")
for scale in (0.25, 0.5, 1.0, 2.0):
    phi = scale * np.array([0.0, 1.0])
    row = [path_relative_entropy(gen, phi, 0, t) for t in (0.5, 1.0, 2.0)]
    print(f"  |phi|={scale:4.2f}  t=0.5/1/2 ->", [f"{v:.4f}" for v in row])
