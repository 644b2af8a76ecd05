"""Positive symmetric tensor norms and signed mixture representations."""

from ._colgen import NormBounds, SolverOptions
from .chebyshev import (ChebDecomposition, binary_lower_bound, binary_lower_bound_max,
                        cheb_coefficients, chebyshev_T, optimal_decomposition_m2, psi)
from .euclid2 import (UVWCoords, constants_l2, extreme_points, half_circle_lp,
                      norms_ab, positive_wedge_lp, trace_norm_2x2)
from .exchangeable import (ExchangeableDistribution, ExtendibilityBounds,
                           SignedMixingMeasure, chi_nN, iid, kappa_bounds,
                           kappa_nN_bounds, kappa_nNm_bounds, load_distribution,
                           mu_binary, partition_log_slack, represent, uv_bound,
                           verify_representation)
from .lp_engine import LPSolution, solve_min_tv, verify_solution
from .norm_solver import (PolarizationConstants, SpaceDescriptor, cssp_l1, kappa,
                          l1, l2dim2, norm_pi, norm_pip, norm_pis, norm_pisp,
                          polarization_constants)
from .tensor_core import (PosNegSplit, SignedPowerCombination, SymmetricTensor,
                          entrywise_l1, multi_indices, multiplicity,
                          polarization_expand, pos_neg_split, power, pushforward,
                          tensor_pushforward, vandermonde_decomposition, wedge)

__version__ = "0.1.0"

__all__ = [
    "ChebDecomposition", "ExchangeableDistribution", "ExtendibilityBounds",
    "LPSolution", "NormBounds", "PolarizationConstants", "PosNegSplit",
    "SignedMixingMeasure", "SignedPowerCombination", "SolverOptions",
    "SpaceDescriptor", "SymmetricTensor", "UVWCoords",
    "binary_lower_bound", "binary_lower_bound_max", "cheb_coefficients",
    "chebyshev_T", "chi_nN", "constants_l2", "cssp_l1", "entrywise_l1",
    "extreme_points", "half_circle_lp", "iid", "kappa", "kappa_bounds",
    "kappa_nN_bounds", "kappa_nNm_bounds", "l1", "l2dim2", "load_distribution",
    "mu_binary", "multi_indices", "multiplicity", "norm_pi", "norm_pip",
    "norm_pis", "norm_pisp", "norms_ab", "optimal_decomposition_m2",
    "partition_log_slack", "polarization_constants", "polarization_expand",
    "pos_neg_split", "positive_wedge_lp", "power", "psi", "pushforward",
    "represent", "solve_min_tv", "tensor_pushforward", "trace_norm_2x2",
    "uv_bound", "vandermonde_decomposition", "verify_representation",
    "verify_solution", "wedge",
]
