"""Exact tools for the reduced Collatz map, the three-gap structure of
multiples of log2(3), and binary prefixes of the repetends of 1/3^i."""

from .collatz_core import (
    CollatzStep,
    is_fixed_half_preimage,
    psi,
    psi_inv,
    reduced_collatz,
    rho,
    rho_trajectory,
    trajectory,
)
from .exact_arith import (
    DyadicFraction,
    LinearForm,
    RationalInterval,
    compare_form_rational,
    enclose,
    floor_log2_pow3,
    floor_ratio,
    sign_linear_form,
)
from .seeds import (
    density_search,
    is_prefix,
    min_seed_index,
    p_element,
    p_sorted,
    power_prefix_witness,
    seed,
    seed_index_bound_lemma4,
    seed_index_bound_lemma7,
)
from .three_distance import (
    continued_fraction_log2_3,
    gap_structure,
    levels,
    oracle_gap_structure,
    translation_check,
)

__version__ = "0.1.0"

__all__ = [
    "CollatzStep",
    "is_fixed_half_preimage",
    "psi",
    "psi_inv",
    "reduced_collatz",
    "rho",
    "rho_trajectory",
    "trajectory",
    "DyadicFraction",
    "LinearForm",
    "RationalInterval",
    "compare_form_rational",
    "enclose",
    "floor_log2_pow3",
    "floor_ratio",
    "sign_linear_form",
    "density_search",
    "is_prefix",
    "min_seed_index",
    "p_element",
    "p_sorted",
    "power_prefix_witness",
    "seed",
    "seed_index_bound_lemma4",
    "seed_index_bound_lemma7",
    "continued_fraction_log2_3",
    "gap_structure",
    "levels",
    "oracle_gap_structure",
    "translation_check",
]
