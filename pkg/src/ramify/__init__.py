"""Exact-arithmetic ramification invariants of local-field covers."""

from .bounds import (
    DecompositionData,
    ExplicitConstants,
    InertiaStructure,
    claim1_check,
    decomposition_counts,
    explicit_constants,
    inertia_structure,
    jordan_bound,
    star_kernel_check,
    tameizing_subgroup,
    wild_order_bound_check,
)
from .covers import (
    BreakTable,
    GaloisCover,
    build_artin_schreier,
    build_compositum_tower,
    build_kummer,
    lower_break_table,
)
from .fields import FieldElement, FiniteField, element_multiplicative_order, field_create
from .groups import (
    FiniteGroup,
    abelian_p_bound_probe,
    group_closure,
    inertia_candidate_sample,
    max_ell_element_order,
)
from .linalg import MatrixFF, fixed_subspace
from .ramification import (
    HerbrandFunction,
    RamFiltration,
    Representation,
    SwanReport,
    break_decomposition,
    filtration_from_breaks,
    hasse_arf_check,
    herbrand_phi,
    herbrand_psi,
    phi_transitivity_check,
    pullback_bound_check,
    swan_conductor,
    swan_single_break,
    upper_jumps,
)
from .series import LaurentSeries, compose, hensel_lift_root

__version__ = "0.1.0"

__all__ = [
    "BreakTable",
    "DecompositionData",
    "ExplicitConstants",
    "FieldElement",
    "FiniteField",
    "FiniteGroup",
    "GaloisCover",
    "HerbrandFunction",
    "InertiaStructure",
    "LaurentSeries",
    "MatrixFF",
    "RamFiltration",
    "Representation",
    "SwanReport",
    "abelian_p_bound_probe",
    "break_decomposition",
    "build_artin_schreier",
    "build_compositum_tower",
    "build_kummer",
    "claim1_check",
    "compose",
    "decomposition_counts",
    "element_multiplicative_order",
    "explicit_constants",
    "field_create",
    "filtration_from_breaks",
    "fixed_subspace",
    "group_closure",
    "hasse_arf_check",
    "hensel_lift_root",
    "herbrand_phi",
    "herbrand_psi",
    "inertia_candidate_sample",
    "inertia_structure",
    "jordan_bound",
    "lower_break_table",
    "max_ell_element_order",
    "phi_transitivity_check",
    "pullback_bound_check",
    "star_kernel_check",
    "swan_conductor",
    "swan_single_break",
    "tameizing_subgroup",
    "upper_jumps",
    "wild_order_bound_check",
]
