"""Independent reference digits of pi and digit-agreement scoring.

The reference comes from Machin's identity

    pi = 16 * arctan(1/5) - 4 * arctan(1/239)

evaluated in fixed-precision binary with generous guard bits, and is
cross-checked against the structurally different identity

    pi = 4 * arctan(1/2) + 4 * arctan(1/3)

before any digits are released.  A disagreement raises instead of
returning digits.  Everything here is deliberately independent of the
slice-series machinery so the two routes can audit each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2

from .backends import (
    Backend,
    BackendKind,
    Numeric,
    _decimal_exponent,
    _truncate_decimal,
    to_decimal_string,
)

MAX_REFERENCE_DIGITS = 10_000


class ReferenceMismatchError(ArithmeticError):
    """Two independent identities disagreed; the reference is unusable."""


@dataclass(frozen=True)
class ReferenceDigits:
    """Frozen decimal reference: ``decimal`` holds "3." plus ``digits``
    truncated (not rounded) digits, so any shorter reference is a prefix
    of any longer one."""

    digits: int
    decimal: str
    precision_bits: int

    def as_fraction(self) -> Fraction:
        """The truncated decimal as an exact rational (a hair below pi)."""
        return Fraction(int(self.decimal.replace(".", "")), 10**self.digits)


def _arctan_recip(inv: int, ctx: gmpy2.context, prec: int) -> gmpy2.mpfr:
    """arctan(1/inv) by the Taylor series, summed until terms vanish.

    Terms shrink by at least 1/inv^2 per step (inv >= 2), so stopping
    once a term drops below 2^-(prec + 8) leaves the truncation error
    far under the rounding floor.
    """
    x = ctx.div(gmpy2.mpz(1), gmpy2.mpz(inv))
    x2 = ctx.mul(x, x)
    total = x
    power = x
    n = 1
    cutoff = gmpy2.mpfr(2) ** -(prec + 8)
    while True:
        power = ctx.mul(power, x2)
        term = ctx.div(power, gmpy2.mpz(2 * n + 1))
        if abs(term) < cutoff:
            break
        if n % 2 == 1:
            total = ctx.sub(total, term)
        else:
            total = ctx.add(total, term)
        n += 1
    return total


def _pi_machin(ctx: gmpy2.context, prec: int) -> gmpy2.mpfr:
    a = _arctan_recip(5, ctx, prec)
    b = _arctan_recip(239, ctx, prec)
    return ctx.sub(ctx.mul(gmpy2.mpz(16), a), ctx.mul(gmpy2.mpz(4), b))


def _pi_cross(ctx: gmpy2.context, prec: int) -> gmpy2.mpfr:
    a = _arctan_recip(2, ctx, prec)
    b = _arctan_recip(3, ctx, prec)
    return ctx.mul(gmpy2.mpz(4), ctx.add(a, b))


@lru_cache(maxsize=64)
def machin_pi(digits: int) -> ReferenceDigits:
    """Reference pi, truncated to ``digits`` decimal digits.

    Both arctan identities are evaluated at the same precision and must
    agree on every released digit.  Results are memoized; instances are
    immutable, so sharing across threads is safe.
    """
    if not isinstance(digits, int) or digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits!r}")
    if digits > MAX_REFERENCE_DIGITS:
        raise ValueError(f"digits capped at {MAX_REFERENCE_DIGITS}, got {digits}")
    prec = math.ceil(digits * math.log2(10)) + 64
    ctx = gmpy2.context(precision=prec)
    main = _pi_machin(ctx, prec)
    check = _pi_cross(ctx, prec)
    main_text = _truncate_decimal(Fraction(*main.as_integer_ratio()), digits)
    check_text = _truncate_decimal(Fraction(*check.as_integer_ratio()), digits)
    if main_text != check_text:
        raise ReferenceMismatchError(
            f"arctan identities disagree at {digits} digits: "
            f"{main_text} vs {check_text}"
        )
    return ReferenceDigits(digits=digits, decimal=main_text, precision_bits=prec)


def correct_digits(candidate: "Numeric | Fraction", reference: ReferenceDigits) -> int:
    """How many decimal places of ``candidate`` agree with the reference.

    Returns the largest k (up to the reference length) such that rounding
    both the candidate and the reference to k places gives the same
    string; 0 if even the integer part disagrees.  Rounding both sides
    means a candidate like 3.14159999 scores 4, not 5: its fifth place
    rounds to ...1600 while pi's stays ...1593.
    """
    if isinstance(candidate, Numeric):
        candidate = candidate.to_fraction()
    ref = reference.as_fraction()
    if candidate // 1 != 3:
        return 0
    diff = abs(candidate - ref)
    if diff == 0:
        return reference.digits
    # agreement at k places forces |candidate - ref| <= 10^-k, so start
    # at that ceiling; agreement is not monotone in k (both sides can
    # straddle a rounding boundary at an isolated k), hence the descent
    start = min(reference.digits, -_decimal_exponent(diff))
    for k in range(start, 0, -1):
        if _round_match(candidate, ref, k):
            return k
    return 0


def _round_match(a: Fraction, b: Fraction, places: int) -> bool:
    return to_decimal_string(a, places) == to_decimal_string(b, places)


def double_factorial_ratio(subscript: int) -> Fraction:
    """(s - 1)!! / s!! for odd s, the closed form of the terminating series."""
    if not isinstance(subscript, int) or subscript < 1 or subscript % 2 == 0:
        raise ValueError(f"subscript must be a positive odd integer, got {subscript!r}")
    num = 1
    for k in range(2, subscript, 2):
        num *= k
    den = 1
    for k in range(1, subscript + 1, 2):
        den *= k
    return Fraction(num, den)


def default_reference_digits(backend: Backend) -> int:
    """Enough reference digits to score this backend's estimates.

    Binary64 carries at most 17 meaningful digits; a p-bit float about
    p * log10(2) + 1.  Exact rationals are truncation-limited rather than
    representation-limited, so they get a generous fixed allowance.
    """
    kind = backend.spec.kind
    if kind in (BackendKind.FLOAT64, BackendKind.FLOAT64_COMPENSATED):
        meaningful = 17
    elif kind is BackendKind.BIGFLOAT:
        assert backend.spec.precision_bits is not None
        meaningful = math.ceil(backend.spec.precision_bits * math.log10(2)) + 1
    else:
        meaningful = 28
    return meaningful + 3


def pi_numeric(backend: Backend, digits: "int | None" = None) -> Numeric:
    """Reference pi lifted into ``backend`` (one rounding, or exact-as-
    truncated for the rational backend)."""
    if digits is None:
        digits = default_reference_digits(backend)
    ref = machin_pi(digits)
    value = ref.as_fraction()
    return backend.from_ratio(value.numerator, value.denominator)
