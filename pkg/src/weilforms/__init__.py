"""Exact verification of groupoid differential-form coboundary identities.

Everything is computed over the rationals in algebras of square-zero
infinitesimals, so the shipped identity suites are exact zero tests, not
approximate ones.
"""

from .weil import (
    GeneratorContext,
    ResidueError,
    WeilElement,
    WeilMatrix,
    factor_top,
    monomial,
)
from .poly import Polynomial, parse_polynomial
from .groupoid import (
    BUNDLE,
    PAIR,
    GroupArrow,
    Microcube,
    PairArrow,
    TangentVector,
    axis,
    bracket,
    compose,
    degeneracy,
    face,
    permute_slots,
    random_microcube,
    random_tangent,
    scale_axis,
    shifted_face,
    star,
    tangent_add,
    tangent_eval,
    tangent_of,
    tangent_scale,
)
from .representations import Representation, apply_fiber_map, check_star_homomorphism, transport
from .forms import DifferentialForm, eval_form, random_form, validate_form
from .operators import OperatorOutputForm, d_contour, d_plus, d_times, mc_defect, transport_derivative
from .checks import CheckConfig, CheckReport, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "BUNDLE",
    "CheckConfig",
    "CheckReport",
    "DifferentialForm",
    "GeneratorContext",
    "GroupArrow",
    "Microcube",
    "OperatorOutputForm",
    "PAIR",
    "PairArrow",
    "Polynomial",
    "Representation",
    "ResidueError",
    "TangentVector",
    "WeilElement",
    "WeilMatrix",
    "apply_fiber_map",
    "axis",
    "bracket",
    "check_star_homomorphism",
    "compose",
    "d_contour",
    "d_plus",
    "d_times",
    "degeneracy",
    "eval_form",
    "face",
    "factor_top",
    "mc_defect",
    "monomial",
    "parse_polynomial",
    "permute_slots",
    "random_form",
    "random_microcube",
    "random_tangent",
    "run_check",
    "run_suite",
    "scale_axis",
    "shifted_face",
    "star",
    "tangent_add",
    "tangent_eval",
    "tangent_of",
    "tangent_scale",
    "transport",
    "transport_derivative",
    "validate_form",
]
