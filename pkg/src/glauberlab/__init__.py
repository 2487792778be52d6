"""Glauber-Exclusion dynamics on the one-dimensional discrete torus.

Exact-in-law event-driven simulation of spin-flip dynamics superposed with
a speeded-up symmetric exclusion process, monotone two-chain couplings and
coalescence statistics, exact small-system analysis, the reaction-diffusion
scaling limit, and random-walk diagnostics.
"""

from glauberlab.core import SpinConfig, apply_exchange, apply_flip, dominates, magnetization
from glauberlab.rates import (
    ElementaryExpansion,
    LocalRule,
    ReactionProfile,
    ReversibilityCertificate,
    check_attractive,
    check_reversible_form,
    elementary_expansion,
    make_chafee_infante,
    make_constant,
    make_dmfl,
    make_dmfl_field,
    parse_rule_spec,
    reaction_profile,
)
from glauberlab.sim import CoupleResult, SimulateResult, coalescence_quantile, couple, simulate
from glauberlab.oracle import GeneratorMatrix, build_generator, exact_tmix, tv_curve
from glauberlab.pde import DensityField, empirical_density, hydro_compare, solve_rd
from glauberlab.walks import (
    local_average,
    occupation_time_sample,
    replacement_defect,
    srw_heat_kernel,
    ssep_vs_independent,
)

__all__ = [
    "SpinConfig",
    "magnetization",
    "dominates",
    "apply_flip",
    "apply_exchange",
    "LocalRule",
    "ElementaryExpansion",
    "ReactionProfile",
    "ReversibilityCertificate",
    "make_dmfl",
    "make_dmfl_field",
    "make_chafee_infante",
    "make_constant",
    "parse_rule_spec",
    "check_attractive",
    "check_reversible_form",
    "elementary_expansion",
    "reaction_profile",
    "simulate",
    "couple",
    "coalescence_quantile",
    "SimulateResult",
    "CoupleResult",
    "GeneratorMatrix",
    "build_generator",
    "tv_curve",
    "exact_tmix",
    "DensityField",
    "solve_rd",
    "empirical_density",
    "hydro_compare",
    "srw_heat_kernel",
    "local_average",
    "occupation_time_sample",
    "ssep_vs_independent",
    "replacement_defect",
]

__version__ = "0.1.0"
