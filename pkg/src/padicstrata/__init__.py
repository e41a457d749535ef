"""Exact arithmetic for quasi-polarized graded Frobenius modules:
Newton polygons, symplectic normal forms, and stratum combinatorics."""

from .cayley import MainPart, ch_newton_polygon, ch_polynomial, diagram_render
from .deform import (Specialization, StratumSpec, UniversalDisplay,
                     chain_strata, sample_generic, specialize, ss_dimension,
                     stratum_spec, t_variables)
from .exceptions import (FieldTooSmallError, HypothesisViolationError,
                         InvalidInputError, PadicStrataError, PrecisionError,
                         ResourceLimitError, ValidityError)
from .module import DieudonneModule, NormalFormCoeffs, normal_form_matrix
from .normal_form import NormalFormResult, normalize
from .polygon import (AdmissibleParams, NewtonPolygon, admissible_below,
                      compare, enumerate_admissible, is_admissible, ordinary,
                      supersingular)
from .witt import VAL_INF, WittContext, WittElement, make_context

__version__ = "1.0.0"

__all__ = [
    "AdmissibleParams", "DieudonneModule", "FieldTooSmallError",
    "HypothesisViolationError", "InvalidInputError", "MainPart",
    "NewtonPolygon", "NormalFormCoeffs", "NormalFormResult",
    "PadicStrataError", "PrecisionError", "ResourceLimitError",
    "Specialization", "StratumSpec", "UniversalDisplay", "VAL_INF",
    "ValidityError", "WittContext", "WittElement", "admissible_below",
    "chain_strata", "ch_newton_polygon", "ch_polynomial", "compare",
    "diagram_render", "enumerate_admissible", "is_admissible", "make_context",
    "normal_form_matrix", "normalize", "ordinary", "sample_generic",
    "specialize", "ss_dimension", "stratum_spec", "supersingular",
    "t_variables",
]
