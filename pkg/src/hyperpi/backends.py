"""Interchangeable arithmetic backends with a uniform raw-operation surface.

Four strategies are supported:

* ``RATIONAL``: exact rational arithmetic (gmpy2.mpq), no rounding ever.
* ``FLOAT64``: plain IEEE-754 binary64.
* ``FLOAT64_COMPENSATED``: binary64 values, but ordered summation runs
  through a Neumaier compensated accumulator.
* ``BIGFLOAT``: correctly rounded binary floating point at a configurable
  precision (gmpy2.mpfr driven through a private context, so instances
  never touch gmpy2's global/thread context).

Values are wrapped in :class:`Numeric`, which refuses to mix backends:
every binary operation requires both operands to carry the same
:class:`BackendSpec`.  All rounding happens inside backend operations,
round-to-nearest-even, one rounding per operation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import gmpy2


class BackendMismatchError(TypeError):
    """Raised when an operation would silently mix two different backends."""


class UnsupportedOperationError(TypeError):
    """Raised when a backend cannot honour an operation (e.g. exact sqrt)."""


class BackendKind(enum.Enum):
    RATIONAL = "rational"
    FLOAT64 = "f64"
    FLOAT64_COMPENSATED = "f64c"
    BIGFLOAT = "ap"


@dataclass(frozen=True)
class BackendSpec:
    """Which arithmetic to use; ``precision_bits`` only applies to BIGFLOAT."""

    kind: BackendKind
    precision_bits: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is BackendKind.BIGFLOAT:
            if self.precision_bits is None:
                raise ValueError("BIGFLOAT needs precision_bits")
            if self.precision_bits < 64:
                raise ValueError(
                    f"precision_bits must be >= 64, got {self.precision_bits}"
                )
        elif self.precision_bits is not None:
            raise ValueError(f"{self.kind.name} does not take precision_bits")

    @property
    def tag(self) -> str:
        """Short stable identifier, e.g. ``f64`` or ``ap256``."""
        if self.kind is BackendKind.BIGFLOAT:
            return f"ap{self.precision_bits}"
        return self.kind.value


def parse_backend_tag(tag: str) -> BackendSpec:
    """Inverse of :attr:`BackendSpec.tag`.

    Accepts ``rational``, ``f64``, ``f64c`` and ``ap<bits>``.
    """
    tag = tag.strip()
    if tag == "rational":
        return BackendSpec(BackendKind.RATIONAL)
    if tag == "f64":
        return BackendSpec(BackendKind.FLOAT64)
    if tag == "f64c":
        return BackendSpec(BackendKind.FLOAT64_COMPENSATED)
    if tag.startswith("ap"):
        try:
            bits = int(tag[2:])
        except ValueError:
            raise ValueError(f"bad backend tag: {tag!r}") from None
        return BackendSpec(BackendKind.BIGFLOAT, precision_bits=bits)
    raise ValueError(f"bad backend tag: {tag!r}")


class Numeric:
    """A value tied to the backend that produced it.

    Arithmetic between two Numerics demands identical backend specs;
    plain Python ints are coerced through the backend so loop code can
    write ``x / 3`` without ceremony.  Floats are *not* coerced, since
    their intended precision would be ambiguous.
    """

    __slots__ = ("backend", "raw")

    def __init__(self, backend: "Backend", raw: object) -> None:
        self.backend = backend
        self.raw = raw

    @property
    def spec(self) -> BackendSpec:
        return self.backend.spec

    def _coerce(self, other: object) -> object:
        if isinstance(other, Numeric):
            if other.backend.spec != self.backend.spec:
                raise BackendMismatchError(
                    f"cannot mix {self.backend.spec.tag} with {other.backend.spec.tag}"
                )
            return other.raw
        if isinstance(other, int):
            return self.backend.raw_from_int(other)
        return None

    def __add__(self, other: object) -> "Numeric":
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return Numeric(self.backend, self.backend.raw_add(self.raw, raw))

    __radd__ = __add__

    def __sub__(self, other: object) -> "Numeric":
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return Numeric(self.backend, self.backend.raw_sub(self.raw, raw))

    def __rsub__(self, other: object) -> "Numeric":
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return Numeric(self.backend, self.backend.raw_sub(raw, self.raw))

    def __mul__(self, other: object) -> "Numeric":
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return Numeric(self.backend, self.backend.raw_mul(self.raw, raw))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Numeric":
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return Numeric(self.backend, self.backend.raw_div(self.raw, raw))

    def __rtruediv__(self, other: object) -> "Numeric":
        raw = self._coerce(other)
        if raw is None:
            return NotImplemented
        return Numeric(self.backend, self.backend.raw_div(raw, self.raw))

    def __neg__(self) -> "Numeric":
        return Numeric(self.backend, self.backend.raw_neg(self.raw))

    def __abs__(self) -> "Numeric":
        return Numeric(self.backend, self.backend.raw_abs(self.raw))

    def sqrt(self) -> "Numeric":
        return Numeric(self.backend, self.backend.raw_sqrt(self.raw))

    def _cmp_raw(self, other: object) -> object:
        raw = self._coerce(other)
        if raw is None:
            raise BackendMismatchError(f"cannot compare Numeric with {type(other)}")
        return raw

    def __lt__(self, other: object) -> bool:
        return self.raw < self._cmp_raw(other)

    def __le__(self, other: object) -> bool:
        return self.raw <= self._cmp_raw(other)

    def __gt__(self, other: object) -> bool:
        return self.raw > self._cmp_raw(other)

    def __ge__(self, other: object) -> bool:
        return self.raw >= self._cmp_raw(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Numeric):
            return self.backend.spec == other.backend.spec and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.backend.raw_from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.backend.spec, self.to_fraction()))

    def is_zero(self) -> bool:
        return self.raw == 0

    def to_fraction(self) -> Fraction:
        """Exact value of the underlying representation."""
        return self.backend.raw_to_fraction(self.raw)

    def to_float(self) -> float:
        return self.backend.raw_to_float(self.raw)

    def decimal(self, digits: int) -> str:
        return to_decimal_string(self, digits)

    def __repr__(self) -> str:
        return f"Numeric[{self.backend.spec.tag}]({self.raw!r})"


class Accumulator:
    """Ordered summation state.

    One writer at a time: an accumulator must not be shared between
    concurrent writers.  ``running_sum`` and ``compensation`` expose the
    internal state; ``total()`` is the value the summation stands for.
    For every backend except FLOAT64_COMPENSATED the compensation term
    is fixed at zero and ``total()`` equals ``running_sum``.
    """

    __slots__ = ("backend", "_running")

    def __init__(self, backend: "Backend", initial: Optional[Numeric] = None) -> None:
        self.backend = backend
        if initial is None:
            self._running = backend.raw_from_int(0)
        else:
            if initial.backend.spec != backend.spec:
                raise BackendMismatchError("initial value from a different backend")
            self._running = initial.raw

    def add(self, term: Numeric) -> "Accumulator":
        if term.backend.spec != self.backend.spec:
            raise BackendMismatchError(
                f"accumulator is {self.backend.spec.tag}, term is {term.backend.spec.tag}"
            )
        self.add_raw(term.raw)
        return self

    def add_raw(self, raw: object) -> None:
        # hot path: one bound call per term, no wrapper allocation
        self._running = self.backend.raw_add(self._running, raw)

    @property
    def running_sum(self) -> Numeric:
        return Numeric(self.backend, self._running)

    @property
    def compensation(self) -> Numeric:
        return Numeric(self.backend, self.backend.raw_from_int(0))

    def total(self) -> Numeric:
        return Numeric(self.backend, self._running)


class _CompensatedAccumulator(Accumulator):
    """Neumaier variant: compensation catches the low-order bits that a
    plain running sum sheds, including the case |term| > |running sum|."""

    __slots__ = ("_comp",)

    def __init__(self, backend: "Backend", initial: Optional[Numeric] = None) -> None:
        super().__init__(backend, initial)
        self._comp = 0.0

    def add_raw(self, raw: object) -> None:
        s = self._running
        t = s + raw
        if abs(s) >= abs(raw):
            self._comp += (s - t) + raw
        else:
            self._comp += (raw - t) + s
        self._running = t

    @property
    def compensation(self) -> Numeric:
        return Numeric(self.backend, self._comp)

    def total(self) -> Numeric:
        return Numeric(self.backend, self._running + self._comp)


def accumulate(acc: Accumulator, term: Numeric) -> Accumulator:
    """Fold one term into ``acc`` (mutating it) and return it."""
    return acc.add(term)


class Backend:
    """Raw-value arithmetic; see concrete subclasses.

    ``raw_*`` methods operate on unwrapped values and perform at most one
    rounding each.  Wrapper helpers (``from_int``, ``from_ratio``, ...)
    return :class:`Numeric`.
    """

    spec: BackendSpec

    # --- raw surface ----------------------------------------------------
    def raw_from_int(self, value: int) -> object:
        raise NotImplementedError

    def raw_from_ratio(self, numer: int, denom: int) -> object:
        raise NotImplementedError

    def raw_add(self, a: object, b: object) -> object:
        raise NotImplementedError

    def raw_sub(self, a: object, b: object) -> object:
        raise NotImplementedError

    def raw_mul(self, a: object, b: object) -> object:
        raise NotImplementedError

    def raw_div(self, a: object, b: object) -> object:
        raise NotImplementedError

    def raw_neg(self, a: object) -> object:
        return -a

    def raw_abs(self, a: object) -> object:
        return abs(a)

    def raw_sqrt(self, a: object) -> object:
        raise NotImplementedError

    def raw_to_fraction(self, a: object) -> Fraction:
        raise NotImplementedError

    def raw_to_float(self, a: object) -> float:
        return float(a)

    # --- wrapper helpers -------------------------------------------------
    def from_int(self, value: int) -> Numeric:
        return Numeric(self, self.raw_from_int(value))

    def from_ratio(self, numer: int, denom: int) -> Numeric:
        if denom == 0:
            raise ZeroDivisionError("from_ratio with zero denominator")
        return Numeric(self, self.raw_from_ratio(numer, denom))

    def from_fraction(self, value: Fraction) -> Numeric:
        return self.from_ratio(value.numerator, value.denominator)

    @property
    def zero(self) -> Numeric:
        return Numeric(self, self.raw_from_int(0))

    @property
    def one(self) -> Numeric:
        return Numeric(self, self.raw_from_int(1))

    def accumulator(self, initial: Optional[Numeric] = None) -> Accumulator:
        return Accumulator(self, initial)

    def wrap(self, raw: object) -> Numeric:
        return Numeric(self, raw)


class RationalBackend(Backend):
    """Exact arithmetic on normalized fractions; order of operations
    cannot change a result.  Square roots are refused rather than
    approximated."""

    def __init__(self) -> None:
        self.spec = BackendSpec(BackendKind.RATIONAL)

    def raw_from_int(self, value: int) -> object:
        return gmpy2.mpq(value)

    def raw_from_ratio(self, numer: int, denom: int) -> object:
        return gmpy2.mpq(numer, denom)

    def raw_add(self, a, b):
        return a + b

    def raw_sub(self, a, b):
        return a - b

    def raw_mul(self, a, b):
        return a * b

    def raw_div(self, a, b):
        return a / b

    def raw_sqrt(self, a):
        raise UnsupportedOperationError(
            "rational backend cannot take square roots exactly"
        )

    def raw_to_fraction(self, a) -> Fraction:
        return Fraction(int(a.numerator), int(a.denominator))


class Float64Backend(Backend):
    """IEEE-754 binary64 with native operations."""

    def __init__(self) -> None:
        self.spec = BackendSpec(BackendKind.FLOAT64)

    def raw_from_int(self, value: int) -> object:
        return float(value)

    def raw_from_ratio(self, numer: int, denom: int) -> object:
        # int/int true division is correctly rounded even for huge operands
        return numer / denom

    def raw_add(self, a, b):
        return a + b

    def raw_sub(self, a, b):
        return a - b

    def raw_mul(self, a, b):
        return a * b

    def raw_div(self, a, b):
        return a / b

    def raw_sqrt(self, a):
        return math.sqrt(a)

    def raw_to_fraction(self, a) -> Fraction:
        return Fraction(a)


class CompensatedFloat64Backend(Float64Backend):
    """Same value arithmetic as FLOAT64; only ordered summation differs."""

    def __init__(self) -> None:
        self.spec = BackendSpec(BackendKind.FLOAT64_COMPENSATED)

    def accumulator(self, initial: Optional[Numeric] = None) -> Accumulator:
        return _CompensatedAccumulator(self, initial)


class BigFloatBackend(Backend):
    """Correctly rounded binary floats at a fixed precision.

    Every instance owns a private gmpy2 context, so two backends with
    different precisions coexist in one process and threads never race
    on a global precision setting.
    """

    def __init__(self, precision_bits: int) -> None:
        self.spec = BackendSpec(BackendKind.BIGFLOAT, precision_bits=precision_bits)
        self._ctx = gmpy2.context(precision=precision_bits)

    def raw_from_int(self, value: int) -> object:
        return self._ctx.add(gmpy2.mpz(value), gmpy2.mpz(0))

    def raw_from_ratio(self, numer: int, denom: int) -> object:
        # single correctly rounded division of exact integers
        return self._ctx.div(gmpy2.mpz(numer), gmpy2.mpz(denom))

    def raw_add(self, a, b):
        return self._ctx.add(a, b)

    def raw_sub(self, a, b):
        return self._ctx.sub(a, b)

    def raw_mul(self, a, b):
        return self._ctx.mul(a, b)

    def raw_div(self, a, b):
        return self._ctx.div(a, b)

    def raw_neg(self, a):
        return self._ctx.minus(a)

    def raw_sqrt(self, a):
        return self._ctx.sqrt(a)

    def raw_to_fraction(self, a) -> Fraction:
        if not gmpy2.is_finite(a):
            raise ValueError(f"cannot convert non-finite value {a!r}")
        return Fraction(*a.as_integer_ratio())


def make_backend(spec: BackendSpec) -> Backend:
    """Construct the backend described by ``spec``."""
    if spec.kind is BackendKind.RATIONAL:
        return RationalBackend()
    if spec.kind is BackendKind.FLOAT64:
        return Float64Backend()
    if spec.kind is BackendKind.FLOAT64_COMPENSATED:
        return CompensatedFloat64Backend()
    if spec.kind is BackendKind.BIGFLOAT:
        assert spec.precision_bits is not None
        return BigFloatBackend(spec.precision_bits)
    raise ValueError(f"unknown backend kind: {spec.kind!r}")


# --------------------------------------------------------------------------
# Decimal rendering.  All rendering goes through exact Fraction arithmetic,
# so the printed digits are a property of the value alone, never of any
# intermediate binary rounding.
# --------------------------------------------------------------------------


def _round_half_away(value: Fraction, digits: int) -> str:
    """Fixed-point decimal string with ``digits`` fractional digits.

    Rounds to nearest; exact halves round away from zero, which keeps
    rendering independent of the parity quirks of banker's rounding.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    sign = "-" if value < 0 else ""
    scaled = abs(value) * Fraction(10) ** digits
    whole, part = divmod(scaled.numerator, scaled.denominator)
    if 2 * part >= scaled.denominator:
        whole += 1
    text = str(whole).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def _truncate_decimal(value: Fraction, digits: int) -> str:
    """Fixed-point decimal string, extra digits dropped (no rounding)."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    sign = "-" if value < 0 else ""
    scaled = abs(value) * Fraction(10) ** digits
    whole = scaled.numerator // scaled.denominator
    text = str(whole).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def _decimal_exponent(value: Fraction) -> int:
    """Largest e with 10**e <= value, for positive ``value``."""
    num, den = value.numerator, value.denominator
    e = len(str(num)) - len(str(den))
    while value >= Fraction(10) ** (e + 1):
        e += 1
    while value < Fraction(10) ** e:
        e -= 1
    return e


def format_scientific(value: Fraction, sig: int = 3) -> str:
    """Scientific notation with ``sig`` significant digits, e.g. 1.22e-16."""
    if sig < 1:
        raise ValueError("sig must be >= 1")
    if value == 0:
        mantissa = "0" if sig == 1 else "0." + "0" * (sig - 1)
        return f"{mantissa}e+00"
    sign = "-" if value < 0 else ""
    mag = abs(value)
    e = _decimal_exponent(mag)
    scaled = mag / Fraction(10) ** (e - sig + 1)
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    digits = str(q)
    if len(digits) > sig:  # rounding carried over, e.g. 9.99 -> 10.0
        digits = digits[:-1]
        e += 1
    mantissa = digits[0] if sig == 1 else f"{digits[0]}.{digits[1:]}"
    return f"{sign}{mantissa}e{e:+03d}"


def format_significant(value: Fraction, sig: int) -> str:
    """Plain decimal with ``sig`` significant digits."""
    if sig < 1:
        raise ValueError("sig must be >= 1")
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    mag = abs(value)
    e = _decimal_exponent(mag)
    frac_digits = sig - e - 1
    if frac_digits >= 1:
        return sign + _round_half_away(mag, frac_digits)
    # magnitude swamps the requested significance: round at a positive
    # power of ten and pad with zeros instead of failing
    scaled = mag / Fraction(10) ** (-frac_digits)
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    return sign + str(q) + "0" * (-frac_digits)


def to_decimal_string(value: Union[Numeric, Fraction], digits: int) -> str:
    """Render ``value`` with exactly ``digits`` digits after the point.

    The conversion is exact: the binary value is taken as a rational and
    rounded once, to nearest with ties away from zero.
    """
    if isinstance(value, Numeric):
        value = value.to_fraction()
    return _round_half_away(value, digits)
