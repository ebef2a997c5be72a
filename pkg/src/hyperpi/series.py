"""Alternating series for the normalized slice integral and the estimates
of pi built from consecutive pairs of them.

For a subscript s the series value is

    S(s) = 1 + sum_{n>=1} (-1)^n * c(s, n) / (2n + 1)

where the coefficients follow the running product

    c(s, n) = prod_{j=1..n} ((s + 1) / (2j) - 1),

so consecutive coefficients differ by the single factor
((s + 1) / (2n) - 1).  For odd s the factor at j = (s + 1) / 2 is zero:
the series terminates after (s - 1) / 2 terms and S(s) is an exact
rational, equal to the double-factorial ratio (s - 1)!! / s!!.  For even
s the series is infinite, so evaluation truncates at a caller-chosen
number of terms; past n = s / 2 the remaining terms share a single sign
and decay polynomially, which is what the tail bound exploits.

Two consecutive values multiply into pi:

    pi = 2 * i * S(i) * S(i - 1)        for every integer i >= 1,

which is what :func:`pi_estimate` computes.  S(0) = pi / 4 and the
terminating odd values are exact, so the truncation error of the product
is driven entirely by the even-subscript factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .backends import (
    Accumulator,
    Backend,
    BackendKind,
    BackendSpec,
    Numeric,
)

#: Sentinel stored in :attr:`SeriesEvaluation.tail_bound` when the series
#: terminated and the value carries no truncation error at all.
EXACT_TAIL = "exact"


def _check_subscript(subscript: int) -> None:
    if not isinstance(subscript, int) or subscript < 0:
        raise ValueError(f"subscript must be a natural number, got {subscript!r}")


def _check_terms(terms: int) -> None:
    if not isinstance(terms, int) or terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms!r}")


class CoefficientStream(NamedTuple):
    """State after emitting coefficient ``index`` of subscript ``subscript``."""

    subscript: int
    index: int
    value: Numeric


def first_coefficient(subscript: int, backend: Backend) -> Numeric:
    """c(s, 1) = (s - 1) / 2."""
    _check_subscript(subscript)
    return backend.from_ratio(subscript - 1, 2)


def coefficient_stream(subscript: int, backend: Backend) -> CoefficientStream:
    """Stream positioned on the first coefficient."""
    return CoefficientStream(subscript, 1, first_coefficient(subscript, backend))


def next_coefficient(stream: CoefficientStream) -> CoefficientStream:
    """Advance one step: multiply by ((s + 1) / (2(n + 1)) - 1)."""
    sub, n, value = stream
    backend = value.backend
    factor = backend.from_ratio(sub + 1 - 2 * (n + 1), 2 * (n + 1))
    return CoefficientStream(sub, n + 1, value * factor)


def coefficient_product(subscript: int, n: int, backend: Backend) -> Numeric:
    """c(s, n) evaluated as the explicit product, factor by factor.

    Slower than the stream but independent of it; used to cross-check
    the recurrence.
    """
    _check_subscript(subscript)
    _check_terms(n)
    value = backend.one
    for j in range(1, n + 1):
        value = value * backend.from_ratio(subscript + 1 - 2 * j, 2 * j)
    return value


def effective_terms(subscript: int, terms: int) -> int:
    """Number of series terms actually summed.

    Odd subscripts terminate at (s - 1) / 2 terms no matter how many were
    requested; even subscripts consume the full budget.
    """
    _check_subscript(subscript)
    _check_terms(terms)
    if subscript % 2 == 1:
        return min(terms, (subscript - 1) // 2)
    return terms


@dataclass(frozen=True)
class SeriesEvaluation:
    """Result of one truncated series evaluation.

    ``tail_bound`` is ``EXACT_TAIL`` when the series terminated (odd
    subscript, full term budget), a Numeric upper bound on the dropped
    tail when one is available, and None otherwise.
    """

    subscript: int
    terms_used: int
    value: Numeric
    last_term_magnitude: Numeric
    tail_bound: Union[Numeric, str, None]


def evaluate_series(subscript: int, terms: int, backend: Backend) -> SeriesEvaluation:
    """Sum the series for ``subscript`` keeping at most ``terms`` terms.

    Terms are accumulated strictly in index order through the backend's
    accumulator, so compensated summation sees exactly the sequence the
    recurrence produces.
    """
    _check_subscript(subscript)
    _check_terms(terms)
    limit = effective_terms(subscript, terms)

    acc = backend.accumulator(backend.one)
    add_raw = acc.add_raw
    raw_mul = backend.raw_mul
    raw_div = backend.raw_div
    raw_neg = backend.raw_neg
    raw_ratio = backend.raw_from_ratio
    raw_int = backend.raw_from_int

    coeff = raw_ratio(subscript - 1, 2)
    last = raw_int(0)
    for n in range(1, limit + 1):
        if n > 1:
            coeff = raw_mul(coeff, raw_ratio(subscript + 1 - 2 * n, 2 * n))
        term = raw_div(coeff, raw_int(2 * n + 1))
        if n & 1:
            term = raw_neg(term)
        add_raw(term)
        last = term

    value = acc.total()
    last_mag = abs(backend.wrap(last))
    tail: Union[Numeric, str, None]
    if subscript % 2 == 1 and limit == (subscript - 1) // 2:
        tail = EXACT_TAIL
    elif subscript % 2 == 0 and limit >= subscript // 2 + 1:
        tail = _tail_bound_from_last(subscript, limit, last_mag)
    else:
        tail = None
    return SeriesEvaluation(subscript, limit, value, last_mag, tail)


def exact_odd_value(subscript: int) -> Fraction:
    """Exact terminating value for an odd subscript, as a Fraction."""
    _check_subscript(subscript)
    if subscript % 2 == 0:
        raise ValueError(f"subscript must be odd, got {subscript}")
    total = Fraction(1)
    coeff = Fraction(subscript - 1, 2)
    for n in range(1, (subscript - 1) // 2 + 1):
        if n > 1:
            coeff *= Fraction(subscript + 1 - 2 * n, 2 * n)
        total += Fraction(-1) ** n * coeff / (2 * n + 1)
    return total


def _tail_bound_from_last(subscript: int, terms: int, last_mag: Numeric) -> Numeric:
    # Past n = s/2 every product factor is negative, so the coefficient
    # sign flips each step and cancels the (-1)^n: the dropped terms all
    # share one sign and decay like n^(-(s+3)/2).  Integral comparison
    # gives |tail| <= |t_N| * (2N + 1) / (s + 1).
    return last_mag * (2 * terms + 1) / (subscript + 1)


def truncation_tail_bound(subscript: int, terms: int, backend: Backend) -> Numeric:
    """Upper bound on the dropped tail of an even-subscript series.

    Requires an even subscript and ``terms >= subscript/2 + 1`` (the
    point past which the terms share one sign and shrink monotonically).
    Empirically the bound is tight to within a factor of ten.
    """
    _check_subscript(subscript)
    _check_terms(terms)
    if subscript % 2 != 0:
        raise ValueError("tail bound applies to even subscripts only")
    if terms < subscript // 2 + 1:
        raise ValueError(
            f"need terms >= {subscript // 2 + 1} for subscript {subscript}"
        )
    evaluation = evaluate_series(subscript, terms, backend)
    return _tail_bound_from_last(subscript, terms, evaluation.last_term_magnitude)


@dataclass(frozen=True)
class PiEstimate:
    """pi approximated as 2 * i * S(i) * S(i-1), with both factors kept."""

    i: int
    terms: int
    spec: BackendSpec
    value: Numeric
    series_i: SeriesEvaluation
    series_prev: SeriesEvaluation


def pi_estimate(i: int, terms: int, backend: Backend) -> PiEstimate:
    """Estimate pi from the consecutive pair (S(i), S(i-1)).

    Any ``i >= 1`` works.  Exactly one of the two subscripts is even; its
    truncation error dominates the estimate.  i = 1 pairs with S(0),
    whose terms decay like 1/n^{3/2}, so expect slow convergence there.
    """
    if not isinstance(i, int) or i < 1:
        raise ValueError(f"i must be >= 1, got {i!r}")
    _check_terms(terms)
    series_i = evaluate_series(i, terms, backend)
    series_prev = evaluate_series(i - 1, terms, backend)
    value = 2 * i * series_i.value * series_prev.value
    return PiEstimate(i, terms, backend.spec, value, series_i, series_prev)
