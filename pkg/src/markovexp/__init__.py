"""Exponential semigroup calculus for finite-state Markov jump processes.

Jump-rate generators, their linear and nonlinear (log-Laplace) semigroups
and resolvents, exponential-tilt entropy identities, clock averages, and
the scaling machinery that extracts large-deviation rate functions from
density-dependent birth-death ladders.
"""

from .chains import (
    Generator,
    StateSpace,
    as_state_function,
    default_space,
    linear_resolvent_apply,
    semigroup_apply,
    transition_matrix,
    validate_generator,
)
from .clocks import (
    ConvolutionClock,
    DiracClock,
    ExpClock,
    MixtureClock,
    check_convolution_split,
    check_integration_by_parts,
    exp_integral,
)
from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .entropy import (
    dv_log_mgf,
    dv_optimal_tilt,
    entropy_chain_rule,
    path_relative_entropy,
    relative_entropy,
    tilted_tail_bound,
)
from .identities import CheckResult, run_battery
from .ldp import (
    GridLevel,
    PathSpec,
    ScaledFamily,
    apply_Hn,
    build_density_family,
    check_hamiltonian_convergence,
    conditional_rate_legendre,
    finite_dim_rate,
    path_rate,
    rate_rows,
    semigroup_convergence_check,
    write_rate_table,
)
from .resolvent import (
    ConvergenceError,
    ResolventSolution,
    TiltedChain,
    fixed_point_resolvent,
    pseudo_resolvent_check,
    resolvent_contraction_check,
    resolvent_iterate_semigroup,
    strong_continuity_check,
    tilted_generator,
    variational_value,
)
from .semigroups import (
    apply_H,
    apply_H_scaled,
    nonlinear_semigroup,
    nonlinear_semigroup_scaled,
    t_plus,
)

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "ConfigError",
    "ConvergenceError",
    "ConvolutionClock",
    "DiracClock",
    "ExpClock",
    "ExperimentConfig",
    "Generator",
    "GridLevel",
    "MixtureClock",
    "PathSpec",
    "ResolventSolution",
    "ScaledFamily",
    "StateSpace",
    "TiltedChain",
    "apply_H",
    "apply_H_scaled",
    "apply_Hn",
    "as_state_function",
    "build_density_family",
    "check_convolution_split",
    "check_hamiltonian_convergence",
    "check_integration_by_parts",
    "conditional_rate_legendre",
    "default_space",
    "dv_log_mgf",
    "dv_optimal_tilt",
    "entropy_chain_rule",
    "exp_integral",
    "finite_dim_rate",
    "fixed_point_resolvent",
    "linear_resolvent_apply",
    "load_config",
    "nonlinear_semigroup",
    "nonlinear_semigroup_scaled",
    "parse_config",
    "path_rate",
    "path_relative_entropy",
    "pseudo_resolvent_check",
    "rate_rows",
    "relative_entropy",
    "resolvent_contraction_check",
    "resolvent_iterate_semigroup",
    "run_battery",
    "semigroup_apply",
    "semigroup_convergence_check",
    "strong_continuity_check",
    "t_plus",
    "tilted_generator",
    "tilted_tail_bound",
    "transition_matrix",
    "validate_generator",
    "write_rate_table",
]
