"""Unit-ball coefficients, hypervolumes, and the geometric checks that tie
the slice series back to them.

The volume of an i-ball of radius R is k_i * R^i, where the coefficient
obeys k_1 = 2, k_2 = pi, and k_i = (2 * pi / i) * k_{i-2}.  The slice
view of the same volume says

    integral_0^R (R^2 - x^2)^((i-1)/2) dx = R^i * S(i)

with S(i) the normalized slice series, and chaining the two gives the
product identity k_i = 4 * k_{i-2} * S(i) * S(i-1), the geometric origin
of the pi estimates.  This module evaluates both sides so tests can
measure the residual instead of trusting the algebra.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .backends import Backend, BackendKind, Numeric, UnsupportedOperationError
from .reference import pi_numeric
from . import series as series_mod


class QuadratureRule(enum.Enum):
    MIDPOINT_COMPOSITE = "midpoint"


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel count and rule for the slice-integral cross-check."""

    points: int
    rule: QuadratureRule = QuadratureRule.MIDPOINT_COMPOSITE

    def __post_init__(self) -> None:
        if not isinstance(self.points, int) or self.points < 16:
            raise ValueError(f"points must be an integer >= 16, got {self.points!r}")


def _check_dim(dim: int) -> None:
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim!r}")


def pow_int(value: Numeric, exponent: int) -> Numeric:
    """Left-to-right repeated multiplication; deterministic rounding order."""
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    result = value.backend.one
    for _ in range(exponent):
        result = result * value
    return result


def ball_coefficient(dim: int, pi_value: Numeric) -> Numeric:
    """k_dim by the two-step recursion k_i = (2 pi / i) k_{i-2}.

    ``pi_value`` supplies pi in the target backend, so the coefficient is
    exact-rational-in-pi when the backend is exact.
    """
    _check_dim(dim)
    backend = pi_value.backend
    if dim % 2 == 1:
        coeff = backend.from_int(2)
        start = 3
    else:
        coeff = pi_value
        start = 4
    for d in range(start, dim + 1, 2):
        coeff = coeff * (2 * pi_value / d)
    return coeff


def ball_coefficient_even_closed(dim: int, pi_value: Numeric) -> Numeric:
    """k_dim = pi^(dim/2) / (dim/2)! — the closed form, even dimensions only."""
    _check_dim(dim)
    if dim % 2 != 0:
        raise ValueError(f"closed form requires an even dimension, got {dim}")
    half = dim // 2
    backend = pi_value.backend
    return pow_int(pi_value, half) / backend.from_int(math.factorial(half))


def hypervolume(dim: int, radius: Numeric, pi_value: Numeric) -> Numeric:
    """Volume k_dim * radius^dim of the dim-ball."""
    _check_dim(dim)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    return ball_coefficient(dim, pi_value) * pow_int(radius, dim)


def slice_integral(
    dim: int, radius: Numeric, quad: QuadratureSpec, backend: Backend
) -> Numeric:
    """integral_0^R (R^2 - x^2)^((dim-1)/2) dx by composite midpoint rule.

    An independent route to R^dim * S(dim): no series, no coefficient
    recurrence, just the integrand.  Even dimensions need a square root,
    so the exact rational backend is refused up front rather than half
    supported.
    """
    _check_dim(dim)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if backend.spec.kind is BackendKind.RATIONAL:
        raise UnsupportedOperationError(
            "slice integrand needs sqrt for even dimensions; "
            "use a floating backend"
        )
    if quad.rule is not QuadratureRule.MIDPOINT_COMPOSITE:
        raise ValueError(f"unsupported rule: {quad.rule!r}")

    panels = quad.points
    half = (dim - 1) // 2
    needs_sqrt = dim % 2 == 0

    raw_mul = backend.raw_mul
    raw_sub = backend.raw_sub
    raw_sqrt = backend.raw_sqrt
    raw_ratio = backend.raw_from_ratio
    r_raw = radius.raw
    r2 = raw_mul(r_raw, r_raw)

    acc = backend.accumulator()
    add_raw = acc.add_raw
    two_panels = 2 * panels
    for k in range(panels):
        x = raw_mul(r_raw, raw_ratio(2 * k + 1, two_panels))
        u = raw_sub(r2, raw_mul(x, x))
        f = backend.raw_from_int(1)
        for _ in range(half):
            f = raw_mul(f, u)
        if needs_sqrt:
            f = raw_mul(f, raw_sqrt(u))
        add_raw(f)
    width = radius / panels
    return acc.total() * width


def coefficient_identity_residual(dim: int, terms: int, backend: Backend) -> Numeric:
    """|k_dim - 4 * k_{dim-2} * S(dim) * S(dim-1)| for dim >= 3.

    Both ball coefficients come from the recursion seeded with reference
    pi; the series factors are truncated at ``terms``.  The residual
    shrinks as the even-subscript factor converges.
    """
    if not isinstance(dim, int) or dim < 3:
        raise ValueError(f"identity needs dimension >= 3, got {dim!r}")
    pi_value = pi_numeric(backend)
    lhs = ball_coefficient(dim, pi_value)
    prev = ball_coefficient(dim - 2, pi_value)
    s_i = series_mod.evaluate_series(dim, terms, backend).value
    s_prev = series_mod.evaluate_series(dim - 1, terms, backend).value
    rhs = 4 * prev * s_i * s_prev
    return abs(lhs - rhs)
