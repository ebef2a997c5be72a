"""Backend arithmetic: construction, coercion rules, accumulation, rendering."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperpi.backends import (
    BackendKind,
    BackendMismatchError,
    BackendSpec,
    UnsupportedOperationError,
    accumulate,
    format_scientific,
    format_significant,
    make_backend,
    parse_backend_tag,
    to_decimal_string,
)
from hyperpi.series import evaluate_series


class TestBackendSpec:
    @pytest.mark.parametrize("tag", ["rational", "f64", "f64c", "ap64", "ap256", "ap1024"])
    def test_tag_round_trip(self, tag):
        assert parse_backend_tag(tag).tag == tag

    @pytest.mark.parametrize("tag", ["", "float", "ap", "ap32", "ap0", "apx", "F64", "ap256.5"])
    def test_bad_tags_rejected(self, tag):
        with pytest.raises(ValueError):
            parse_backend_tag(tag)

    def test_bigfloat_needs_bits(self):
        with pytest.raises(ValueError):
            BackendSpec(BackendKind.BIGFLOAT)

    def test_bigfloat_minimum_bits(self):
        with pytest.raises(ValueError):
            BackendSpec(BackendKind.BIGFLOAT, precision_bits=32)
        BackendSpec(BackendKind.BIGFLOAT, precision_bits=64)

    def test_fixed_kinds_take_no_bits(self):
        with pytest.raises(ValueError):
            BackendSpec(BackendKind.FLOAT64, precision_bits=64)


class TestNumeric:
    def test_rational_third_times_three_is_one(self, rational):
        assert (rational.from_ratio(1, 3) * 3).to_fraction() == 1

    def test_bigfloat_third_rounding_error(self, ap256):
        err = abs(ap256.from_ratio(1, 3).to_fraction() - Fraction(1, 3))
        assert err <= Fraction(1, 3) * Fraction(1, 2**255)

    def test_int_coercion_both_sides(self, f64):
        x = f64.from_ratio(1, 4)
        assert (2 * x).to_float() == 0.5
        assert (x * 2).to_float() == 0.5
        assert (1 - x).to_float() == 0.75
        assert (x / 2).to_float() == 0.125
        assert (1 / f64.from_int(2)).to_float() == 0.5

    def test_float_operands_refused(self, f64):
        # floats must enter through from_ratio so every backend sees the
        # same exact inputs; a bare float literal is a porting bug
        with pytest.raises(TypeError):
            f64.from_int(1) + 0.5
        with pytest.raises(TypeError):
            0.5 * f64.from_int(1)

    def test_cross_backend_arithmetic_refused(self, f64, ap128):
        with pytest.raises(BackendMismatchError):
            f64.one + ap128.one

    def test_cross_backend_equality_is_false(self, f64, ap128):
        assert not (f64.one == ap128.one)
        assert f64.one != ap128.one

    def test_comparisons(self, rational):
        a, b = rational.from_ratio(1, 3), rational.from_ratio(1, 2)
        assert a < b and b > a and a <= a and a >= a
        assert a == rational.from_ratio(2, 6)

    def test_neg_abs_is_zero(self, f64):
        x = f64.from_ratio(-3, 4)
        assert (-x).to_float() == 0.75
        assert abs(x).to_float() == 0.75
        assert not x.is_zero()
        assert f64.zero.is_zero()

    def test_sqrt_float_backends(self, f64, ap128):
        assert f64.from_int(9).sqrt().to_float() == 3.0
        err = abs(ap128.from_int(2).sqrt().to_fraction() ** 2 - 2)
        assert err < Fraction(1, 2**120)

    def test_sqrt_rational_refused(self, rational):
        with pytest.raises(UnsupportedOperationError):
            rational.from_int(2).sqrt()

    def test_from_fraction(self, rational, f64):
        assert rational.from_fraction(Fraction(22, 7)).to_fraction() == Fraction(22, 7)
        assert f64.from_fraction(Fraction(1, 4)).to_float() == 0.25


class TestAccumulator:
    def test_plain_f64_drifts(self, f64):
        # 3e6 copies of a non-representable step: naive binary64 addition
        # must drift from the exact 0.3 by far more than one ulp
        acc = f64.accumulator()
        step = f64.from_ratio(1, 10**7)
        for _ in range(3_000_000):
            acc.add(step)
        drift = abs(acc.total().to_fraction() - Fraction(3, 10))
        assert drift > Fraction(math.ulp(0.3))

    def test_compensated_f64_stays_tight(self, f64c):
        acc = f64c.accumulator()
        step = f64c.from_ratio(1, 10**7)
        for _ in range(3_000_000):
            acc.add(step)
        drift = abs(acc.total().to_fraction() - Fraction(3, 10))
        assert drift <= Fraction(math.ulp(0.3))

    def test_rational_harmonic_sum_exact(self, rational):
        acc = rational.accumulator()
        for k in range(1, 101):
            accumulate(acc, rational.from_ratio(1, k))
        expected = sum(Fraction(1, k) for k in range(1, 101))
        assert acc.total().to_fraction() == expected
        assert expected == Fraction(
            14466636279520351160221518043104131447711,
            2788815009188499086581352357412492142272,
        )

    def test_initial_value(self, f64):
        acc = f64.accumulator(f64.from_int(10))
        acc.add(f64.from_ratio(1, 2))
        assert acc.total().to_float() == 10.5

    def test_mismatched_term_refused(self, f64, ap128):
        acc = f64.accumulator()
        with pytest.raises(BackendMismatchError):
            acc.add(ap128.one)

    def test_compensation_visible(self, f64c):
        acc = f64c.accumulator()
        for _ in range(10):
            acc.add(f64c.from_ratio(1, 10))
        total = acc.total().to_float()
        assert total == 1.0  # the compensated sum lands on the exact value
        assert acc.running_sum.to_float() + acc.compensation.to_float() == total

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(
            st.fractions(min_value=-100, max_value=100, max_denominator=10**6),
            min_size=1,
            max_size=40,
        ),
        st.randoms(use_true_random=False),
    )
    def test_rational_sum_order_independent(self, terms, rng):
        backend = make_backend(BackendSpec(BackendKind.RATIONAL))
        forward = backend.accumulator()
        for t in terms:
            forward.add(backend.from_fraction(t))
        shuffled = list(terms)
        rng.shuffle(shuffled)
        scrambled = backend.accumulator()
        for t in shuffled:
            scrambled.add(backend.from_fraction(t))
        assert forward.total().to_fraction() == scrambled.total().to_fraction()


class TestCompensationOnSeriesTerms:
    @pytest.mark.parametrize("sub", [2, 4, 16])
    @pytest.mark.parametrize("terms", [100, 1000, 10000])
    def test_compensated_no_worse_than_plain(self, sub, terms, rational, f64, f64c):
        exact = evaluate_series(sub, terms, rational).value.to_fraction()
        plain = Fraction(evaluate_series(sub, terms, f64).value.to_float())
        comp = Fraction(evaluate_series(sub, terms, f64c).value.to_float())
        ulp = Fraction(math.ulp(float(exact)))
        assert abs(comp - exact) <= abs(plain - exact) + 2 * ulp


class TestFixedPrecisionAgainstExact:
    @pytest.mark.parametrize("bits", [64, 128, 256])
    def test_expression_within_four_ulp(self, bits):
        backend = make_backend(BackendSpec(BackendKind.BIGFLOAT, precision_bits=bits))
        value = ((backend.from_ratio(1, 3) + backend.from_ratio(1, 7)) * 22 - 3) / 5
        value = value + backend.from_ratio(355, 113)
        exact = ((Fraction(1, 3) + Fraction(1, 7)) * 22 - 3) / 5 + Fraction(355, 113)
        ulp = Fraction(2) ** (math.floor(math.log2(float(exact))) - bits + 1)
        assert abs(value.to_fraction() - exact) <= 4 * ulp


class TestRendering:
    def test_decimal_thirds(self, rational):
        assert to_decimal_string(rational.from_ratio(1, 3), 5) == "0.33333"
        assert to_decimal_string(rational.from_ratio(2, 3), 5) == "0.66667"

    def test_decimal_double_pi(self, f64):
        value = f64.from_fraction(Fraction(math.pi))
        assert to_decimal_string(value, 15) == "3.141592653589793"

    def test_ties_round_away_from_zero(self):
        assert to_decimal_string(Fraction(1, 8), 2) == "0.13"
        assert to_decimal_string(Fraction(-1, 8), 2) == "-0.13"

    def test_decimal_accepts_fraction_and_numeric(self, rational):
        assert to_decimal_string(Fraction(5, 4), 1) == "1.3"
        assert rational.from_ratio(5, 4).decimal(1) == "1.3"

    def test_scientific(self):
        assert format_scientific(Fraction(122, 10**18)) == "1.22e-16"
        assert format_scientific(Fraction(-314159, 10**5)) == "-3.14e+00"
        assert format_scientific(Fraction(0)) == "0.00e+00"

    def test_significant(self):
        assert format_significant(Fraction(2, 3), 3) == "0.667"
        assert format_significant(Fraction(-2, 3), 3) == "-0.667"
        assert format_significant(Fraction(0), 5) == "0"
        assert format_significant(Fraction(12345), 3) == "12300"
        assert format_significant(Fraction(1, 8), 2) == "0.13"

    def test_determinism(self, ap256):
        one_third = ap256.from_ratio(1, 3)
        first = to_decimal_string(one_third, 40)
        assert all(to_decimal_string(ap256.from_ratio(1, 3), 40) == first for _ in range(3))


def test_make_backend_kinds_round_trip():
    for tag in ("rational", "f64", "f64c", "ap128"):
        spec = parse_backend_tag(tag)
        assert make_backend(spec).spec == spec
