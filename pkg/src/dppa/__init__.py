"""Distributed proximal point and gradient descent over agent networks."""

from .algorithms import (AlgoConfig, ErrorFunctionals, NetworkState, Trajectory, dgd_step,
                         disagreement_ledger, dppa_step, error_functionals, run)
from .costs import (CostFunction, QuadraticCost, ZeroCost, prox_generic, prox_quadratic,
                    smoothness_constant)
from .estimator import DGDRegressor, DPPARegressor
from .instance import Instance, generate_instance
from .mixing import (MixingMatrix, metropolis_hastings_weights, metropolis_weights, mix,
                     spectral_gap_quantities, validate_assumption2)
from .netgraph import CommGraph, generate_random_graph, is_connected
from .theory import (InstanceConstants, dgd_stability_threshold, dppa_stability_threshold,
                     instance_constants, radius_r, solve_global_optimum,
                     solve_network_fixed_point, strong_convexity_alpha, theorem11_bound_a,
                     theorem11_bound_b)

__version__ = "0.1.0"

__all__ = [
    "AlgoConfig",
    "ErrorFunctionals",
    "NetworkState",
    "Trajectory",
    "dgd_step",
    "disagreement_ledger",
    "dppa_step",
    "error_functionals",
    "run",
    "CostFunction",
    "QuadraticCost",
    "ZeroCost",
    "prox_generic",
    "prox_quadratic",
    "smoothness_constant",
    "DGDRegressor",
    "DPPARegressor",
    "Instance",
    "generate_instance",
    "MixingMatrix",
    "metropolis_hastings_weights",
    "metropolis_weights",
    "mix",
    "spectral_gap_quantities",
    "validate_assumption2",
    "CommGraph",
    "generate_random_graph",
    "is_connected",
    "InstanceConstants",
    "dgd_stability_threshold",
    "dppa_stability_threshold",
    "instance_constants",
    "radius_r",
    "solve_global_optimum",
    "solve_network_fixed_point",
    "strong_convexity_alpha",
    "theorem11_bound_a",
    "theorem11_bound_b",
]
