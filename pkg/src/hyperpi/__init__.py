"""hyperpi: pi from hypersphere slice series.

The volume of an i-dimensional ball factors through a normalized slice
integral S(i); consecutive pairs satisfy pi = 2 * i * S(i) * S(i-1) for
every i >= 1, giving a whole family of series estimates of pi.  This
package evaluates the family on interchangeable arithmetic backends,
scores results against an independent arctan reference, and ships scan,
verify and bench tooling around it.
"""

from .backends import (
    Accumulator,
    Backend,
    BackendKind,
    BackendMismatchError,
    BackendSpec,
    Numeric,
    UnsupportedOperationError,
    accumulate,
    make_backend,
    parse_backend_tag,
    to_decimal_string,
)
from .series import (
    EXACT_TAIL,
    CoefficientStream,
    PiEstimate,
    SeriesEvaluation,
    coefficient_product,
    coefficient_stream,
    effective_terms,
    evaluate_series,
    exact_odd_value,
    first_coefficient,
    next_coefficient,
    pi_estimate,
    truncation_tail_bound,
)
from .hypersphere import (
    QuadratureRule,
    QuadratureSpec,
    ball_coefficient,
    ball_coefficient_even_closed,
    coefficient_identity_residual,
    hypervolume,
    slice_integral,
)
from .reference import (
    ReferenceDigits,
    ReferenceMismatchError,
    correct_digits,
    double_factorial_ratio,
    machin_pi,
    pi_numeric,
)
from .scan import (
    ScanGrid,
    ScanRecord,
    default_grid,
    emit_csv,
    emit_json,
    parse_json,
    run_scan,
)
from .verify import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "Accumulator",
    "Backend",
    "BackendKind",
    "BackendMismatchError",
    "BackendSpec",
    "CheckResult",
    "CoefficientStream",
    "EXACT_TAIL",
    "Numeric",
    "PiEstimate",
    "QuadratureRule",
    "QuadratureSpec",
    "ReferenceDigits",
    "ReferenceMismatchError",
    "ScanGrid",
    "ScanRecord",
    "SeriesEvaluation",
    "UnsupportedOperationError",
    "accumulate",
    "ball_coefficient",
    "ball_coefficient_even_closed",
    "coefficient_identity_residual",
    "coefficient_product",
    "coefficient_stream",
    "correct_digits",
    "default_grid",
    "double_factorial_ratio",
    "effective_terms",
    "emit_csv",
    "emit_json",
    "evaluate_series",
    "exact_odd_value",
    "first_coefficient",
    "hypervolume",
    "machin_pi",
    "make_backend",
    "next_coefficient",
    "parse_backend_tag",
    "parse_json",
    "pi_estimate",
    "pi_numeric",
    "run_scan",
    "run_verification",
    "slice_integral",
    "to_decimal_string",
    "truncation_tail_bound",
]
