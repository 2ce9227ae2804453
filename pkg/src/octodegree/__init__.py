"""Octonion arithmetic, octonion-valued fields, and mapping degrees from Cauchy-kernel integrals."""

from .degree import (
    INTEGER_TOLERANCE,
    NORMALIZATION,
    ArgumentReport,
    DegreeResult,
    Family,
    HurwitzReport,
    OracleResult,
    RoucheReport,
    ZeroSpec,
    argument_principle,
    cauchy_kernel,
    degree_oracle,
    hurwitz_check,
    order_isolated,
    order_of,
    order_variety,
    rouche_check,
    surface_degree,
    winding_number,
)
from .errors import ContractViolation, DomainError, OctoError, OracleInconclusive, OrientationError, SingularityError
from .fields import (
    HEMPFLING_ZERO,
    OctonionField,
    adjugate,
    catalog_get,
    cr_residual,
    fueter_V,
    fueter_Z,
    jacobian,
    parse_field,
)
from .octonion import Octonion, associator, conjugate, inverse, multiply, octonion_norm, scalar_product
from .surfaces import CoreManifold, ParamSurface, QuadratureSpec, integrate, parse_surface, sphere, surface_area, surface_element, tube

__version__ = "0.1.0"

__all__ = [
    "ArgumentReport",
    "ContractViolation",
    "CoreManifold",
    "DegreeResult",
    "DomainError",
    "Family",
    "HEMPFLING_ZERO",
    "HurwitzReport",
    "INTEGER_TOLERANCE",
    "NORMALIZATION",
    "OctoError",
    "Octonion",
    "OctonionField",
    "OracleInconclusive",
    "OracleResult",
    "OrientationError",
    "ParamSurface",
    "QuadratureSpec",
    "RoucheReport",
    "SingularityError",
    "ZeroSpec",
    "adjugate",
    "argument_principle",
    "associator",
    "catalog_get",
    "cauchy_kernel",
    "conjugate",
    "cr_residual",
    "degree_oracle",
    "fueter_V",
    "fueter_Z",
    "hurwitz_check",
    "integrate",
    "inverse",
    "jacobian",
    "multiply",
    "octonion_norm",
    "order_isolated",
    "order_of",
    "order_variety",
    "parse_field",
    "parse_surface",
    "rouche_check",
    "scalar_product",
    "sphere",
    "surface_area",
    "surface_degree",
    "surface_element",
    "tube",
    "winding_number",
]
