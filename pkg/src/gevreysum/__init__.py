"""Gevrey classification and Borel-Laplace summation of formal series.

The package classifies formal power-series solutions of linear complex ODEs
by growth order (Newton polygon), generates those solutions by coefficient
recurrence, and evaluates their Borel-Laplace sums numerically.
"""

from .asymptotics import (
    AsymptoticFit,
    DerivativeFit,
    FlatDecayFit,
    Sector,
    check_asymptotic_fit,
    check_flat_decay,
    derivative_bounds_check,
)
from .borel import (
    BorelSumPlan,
    BorelSumResult,
    ClosedFormContinuation,
    GrowthFit,
    PadeApproximant,
    PadeSpec,
    borel_sum,
    borel_sum_detailed,
    domain_check,
    fit_exponential_growth,
    formal_borel,
    formal_laplace,
    laplace_numeric,
    radius_estimate,
    truncated_laplace_numeric,
)
from .newton import (
    LinearOperator,
    NewtonPolygon,
    gevrey_candidates,
    newton_polygon,
    vanishing_order,
)
from .opparse import OperatorExpression, operator_to_text, parse_operator
from .series import (
    FormalPowerSeries,
    GevreyFit,
    SharpnessResult,
    add,
    derive,
    estimate_gevrey_order,
    euler_series,
    is_sharp_class,
    load_series,
    mul,
    series_from_json,
    series_to_json,
)
from .solver import (
    EulerClassification,
    SolveResult,
    apply_operator,
    euler_alpha,
    euler_operator,
    formal_solve,
    residual_check,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticFit",
    "BorelSumPlan",
    "BorelSumResult",
    "ClosedFormContinuation",
    "DerivativeFit",
    "EulerClassification",
    "FlatDecayFit",
    "FormalPowerSeries",
    "GevreyFit",
    "GrowthFit",
    "LinearOperator",
    "NewtonPolygon",
    "OperatorExpression",
    "PadeApproximant",
    "PadeSpec",
    "Sector",
    "SharpnessResult",
    "SolveResult",
    "add",
    "apply_operator",
    "borel_sum",
    "borel_sum_detailed",
    "check_asymptotic_fit",
    "check_flat_decay",
    "derivative_bounds_check",
    "derive",
    "domain_check",
    "estimate_gevrey_order",
    "euler_alpha",
    "euler_operator",
    "euler_series",
    "fit_exponential_growth",
    "formal_borel",
    "formal_laplace",
    "formal_solve",
    "gevrey_candidates",
    "is_sharp_class",
    "laplace_numeric",
    "load_series",
    "mul",
    "newton_polygon",
    "operator_to_text",
    "parse_operator",
    "radius_estimate",
    "residual_check",
    "series_from_json",
    "series_to_json",
    "truncated_laplace_numeric",
    "vanishing_order",
]
