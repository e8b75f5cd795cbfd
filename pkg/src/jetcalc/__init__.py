"""Exact jet-space computations for polynomial germs over Q."""

__version__ = "0.1.0"

from .artinian import (
    PointNotOnGerm,
    Subspace,
    TruncatedLocalAlgebra,
    annihilator,
    ideal_image_subspace,
    infinitesimal_algebra,
    omega_fiber_dimension,
    project,
)
from .diffops import (
    DiffOperator,
    IdealNotPreserved,
    InducedOperator,
    JetFunctional,
    JetPresentation,
    apply,
    bracket,
    functional_to_operator,
    induce_on_quotient,
    jet_fiber_dimension,
    jet_map,
    lift_from_quotient,
    operator_to_functional,
    operators_preserving_ideal,
    verify_order,
)
from .ideal import (
    GroebnerBasis,
    Ideal,
    PolynomialMap,
    ResourceLimitExceeded,
    groebner,
    ideal_equal,
    ideal_power,
    ideal_sum,
    normal_form,
    pullback,
)
from .parse import PolynomialSyntaxError, parse_point, parse_polynomial
from .poly import (
    DimensionMismatch,
    Polynomial,
    divided_derivative,
    evaluate,
    taylor_shift,
    truncate,
)
from .separation import (
    AgreeUpTo,
    Family,
    GrassPoint,
    NotOnBothFibers,
    Separated,
    SeparationReport,
    canonical_family_check,
    fiber_ideal,
    grass_point,
    jets_agree,
    separating_order,
)

__all__ = [
    "__version__",
    "PointNotOnGerm",
    "Subspace",
    "TruncatedLocalAlgebra",
    "annihilator",
    "ideal_image_subspace",
    "infinitesimal_algebra",
    "omega_fiber_dimension",
    "project",
    "DiffOperator",
    "IdealNotPreserved",
    "InducedOperator",
    "JetFunctional",
    "JetPresentation",
    "apply",
    "bracket",
    "functional_to_operator",
    "induce_on_quotient",
    "jet_fiber_dimension",
    "jet_map",
    "lift_from_quotient",
    "operator_to_functional",
    "operators_preserving_ideal",
    "verify_order",
    "GroebnerBasis",
    "Ideal",
    "PolynomialMap",
    "ResourceLimitExceeded",
    "groebner",
    "ideal_equal",
    "ideal_power",
    "ideal_sum",
    "normal_form",
    "pullback",
    "PolynomialSyntaxError",
    "parse_point",
    "parse_polynomial",
    "DimensionMismatch",
    "Polynomial",
    "divided_derivative",
    "evaluate",
    "taylor_shift",
    "truncate",
    "AgreeUpTo",
    "Family",
    "GrassPoint",
    "NotOnBothFibers",
    "Separated",
    "SeparationReport",
    "canonical_family_check",
    "fiber_ideal",
    "grass_point",
    "jets_agree",
    "separating_order",
]
