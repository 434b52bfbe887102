"""Finite braces, post-braces and Rota-Baxter operators, with exhaustive verification."""
from .braces import Brace, enumerate_braces, make_brace, trivial_brace, validate_brace
from .errors import (
    AxiomError,
    BoundError,
    BraceForgeError,
    FormatError,
    InternalConsistencyError,
    KindError,
    StructureError,
)
from .groups import GroupTable, abelian_group, cyclic_group, validate_group
from .heisenberg import LinearMap3, build_heisenberg_brace, census, classify_linear_rbo
from .matched_pairs import (
    double_brace,
    factor_ideal_criterion,
    mp_from_enhanced_rbo,
    transported_brace,
    validate_mp_braces,
)
from .post import PostBrace, make_post_brace, validate_post_brace
from .report import Report
from .rota_baxter import (
    adjoint_action,
    enumerate_relative_rbos,
    factorization_data,
    make_relative_rbo,
    make_two_sided_rbo,
    trivial_action,
    validate_relative_rbo,
)
from .ybe import BraidedMap, derived_solution, post_brace_solutions, solution_from_brace

__all__ = [
    "AxiomError", "BoundError", "Brace", "BraceForgeError", "BraidedMap", "FormatError",
    "GroupTable", "InternalConsistencyError", "KindError", "LinearMap3", "PostBrace", "Report",
    "StructureError", "abelian_group", "adjoint_action", "build_heisenberg_brace", "census",
    "classify_linear_rbo", "cyclic_group", "derived_solution", "double_brace", "enumerate_braces",
    "enumerate_relative_rbos", "factor_ideal_criterion", "factorization_data", "make_brace",
    "make_post_brace", "make_relative_rbo", "make_two_sided_rbo", "mp_from_enhanced_rbo",
    "post_brace_solutions", "solution_from_brace", "transported_brace", "trivial_action",
    "trivial_brace", "validate_brace", "validate_group", "validate_mp_braces", "validate_post_brace",
    "validate_relative_rbo",
]
