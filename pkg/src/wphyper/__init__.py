"""Rationality and singularity checks for hypersurfaces in weighted projective space."""

from .delsarte import (DelsarteMatrix, DiagonalAutGroup, derive_weights, delsarte_rational,
                       diagonal_aut, lattice_order_check, loop_matrix, loop_quasismooth,
                       main_family)
from .equation import Equation, EquationSyntaxError, format_equation, parse_equation
from .rationality import FamilyReport, Field, certify
from .search import SearchSpec, run_search, search_loops, search_two_weight
from .singularities import (CyclicQuotientType, classify_hypersurface, eqii_min,
                            eqii_sufficient, reid_tai)
from .wps import (MonomialBasis, WeightSystem, count_monomials, degree_criterion, dim_aut,
                  enumerate_monomials, is_fano, is_well_formed, moduli_lower_bound)

__all__ = [
    "CyclicQuotientType", "DelsarteMatrix", "DiagonalAutGroup", "Equation",
    "EquationSyntaxError", "FamilyReport", "Field", "MonomialBasis", "SearchSpec",
    "WeightSystem", "certify", "classify_hypersurface", "count_monomials",
    "degree_criterion", "delsarte_rational", "derive_weights", "diagonal_aut", "dim_aut",
    "enumerate_monomials", "eqii_min", "eqii_sufficient", "format_equation", "is_fano",
    "is_well_formed", "lattice_order_check", "loop_matrix", "loop_quasismooth",
    "main_family", "moduli_lower_bound", "parse_equation", "reid_tai", "run_search",
    "search_loops", "search_two_weight",
]
