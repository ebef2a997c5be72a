"""Self-check suites wiring the independent routes against each other.

Four families of checks:

* coefficient-equivalence: the stream recurrence against the explicit
  product, in exact rationals, plus the vanishing that terminates odd
  subscripts.
* odd-closed-form: terminating series values against double-factorial
  ratios.
* volume-identity: ball coefficients against 4 * k_{i-2} * S(i) * S(i-1).
* slice-quadrature: the midpoint integral against R^i * S(i).

``quick`` keeps i <= 12 and N <= 1000 and finishes in seconds; ``full``
widens to the bounds the acceptance tests use, including the slow
3-million-term double evaluation and its known digit counts.

Checks call through the module namespaces (``series_mod.next_coefficient``
and friends), so a monkeypatched or corrupted implementation is what
actually gets exercised.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .backends import BackendKind, BackendSpec, make_backend
from . import hypersphere as hypersphere_mod
from . import reference as reference_mod
from . import series as series_mod

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    passed: bool
    detail: str
    elapsed_s: float


def _rational_stream_coefficients(subscript: int, count: int) -> "list[Fraction]":
    backend = make_backend(BackendSpec(BackendKind.RATIONAL))
    out = []
    stream = series_mod.coefficient_stream(subscript, backend)
    out.append(stream.value.to_fraction())
    for _ in range(count - 1):
        stream = series_mod.next_coefficient(stream)
        out.append(stream.value.to_fraction())
    return out


def check_coefficient_equivalence(max_subscript: int, max_n: int) -> CheckResult:
    """Recurrence == product, exactly, plus odd-subscript termination."""
    start = time.perf_counter()
    backend = make_backend(BackendSpec(BackendKind.RATIONAL))
    for sub in range(0, max_subscript + 1):
        streamed = _rational_stream_coefficients(sub, max_n)
        for n in range(1, max_n + 1):
            direct = series_mod.coefficient_product(sub, n, backend).to_fraction()
            if streamed[n - 1] != direct:
                return CheckResult(
                    "coefficient-equivalence",
                    False,
                    f"recurrence and product disagree at sub={sub}, n={n}: "
                    f"{streamed[n - 1]} vs {direct}",
                    time.perf_counter() - start,
                )
        if sub % 2 == 1:
            cutoff = (sub - 1) // 2
            for n in range(cutoff + 1, min(cutoff + 4, max_n) + 1):
                if streamed[n - 1] != 0:
                    return CheckResult(
                        "coefficient-equivalence",
                        False,
                        f"odd sub={sub} coefficient at n={n} should vanish, "
                        f"got {streamed[n - 1]}",
                        time.perf_counter() - start,
                    )
    return CheckResult(
        "coefficient-equivalence",
        True,
        f"sub <= {max_subscript}, n <= {max_n}, exact agreement",
        time.perf_counter() - start,
    )


def check_odd_closed_form(max_subscript: int) -> CheckResult:
    """Terminating series == (s-1)!!/s!! for every odd s in range."""
    start = time.perf_counter()
    for sub in range(1, max_subscript + 1, 2):
        series_value = series_mod.exact_odd_value(sub)
        ratio = reference_mod.double_factorial_ratio(sub)
        if series_value != ratio:
            return CheckResult(
                "odd-closed-form",
                False,
                f"sub={sub}: series gives {series_value}, ratio gives {ratio}",
                time.perf_counter() - start,
            )
    return CheckResult(
        "odd-closed-form",
        True,
        f"odd sub <= {max_subscript}, exact agreement",
        time.perf_counter() - start,
    )


def check_volume_identity(terms: int, tolerance: Fraction) -> CheckResult:
    """k_i vs 4 k_{i-2} S(i) S(i-1) residuals for i in 3..12."""
    start = time.perf_counter()
    backend = make_backend(BackendSpec(BackendKind.BIGFLOAT, precision_bits=128))
    for dim in range(3, 13):
        residual = hypersphere_mod.coefficient_identity_residual(
            dim, terms, backend
        ).to_fraction()
        if residual > tolerance:
            return CheckResult(
                "volume-identity",
                False,
                f"dim={dim}, terms={terms}: residual {float(residual):.3e} "
                f"exceeds {float(tolerance):.1e}",
                time.perf_counter() - start,
            )
    return CheckResult(
        "volume-identity",
        True,
        f"dims 3..12 at {terms} terms within {float(tolerance):.1e}",
        time.perf_counter() - start,
    )


def check_slice_quadrature(
    dims: "tuple[int, ...]",
    radii: "tuple[Fraction, ...]",
    panels: int,
    rel_tolerance: Fraction,
) -> CheckResult:
    """Midpoint integral of the slice integrand vs R^i * S(i)."""
    start = time.perf_counter()
    backend = make_backend(BackendSpec(BackendKind.BIGFLOAT, precision_bits=128))
    quad = hypersphere_mod.QuadratureSpec(points=panels)
    for dim in dims:
        # series side: odd dims are exact; even dims converge far below
        # the quadrature error at this budget
        evaluation = series_mod.evaluate_series(dim, 20_000, backend)
        for radius_fr in radii:
            radius = backend.from_fraction(radius_fr)
            integral = hypersphere_mod.slice_integral(dim, radius, quad, backend)
            expected = hypersphere_mod.pow_int(radius, dim) * evaluation.value
            rel = abs(integral - expected).to_fraction() / expected.to_fraction()
            if rel > rel_tolerance:
                return CheckResult(
                    "slice-quadrature",
                    False,
                    f"dim={dim}, R={radius_fr}: relative gap {float(rel):.3e} "
                    f"exceeds {float(rel_tolerance):.1e} at {panels} panels",
                    time.perf_counter() - start,
                )
    return CheckResult(
        "slice-quadrature",
        True,
        f"dims {list(dims)}, radii {[str(r) for r in radii]}, "
        f"{panels} panels within {float(rel_tolerance):.1e} relative",
        time.perf_counter() - start,
    )


def check_reference_digits(digits: int) -> CheckResult:
    """The two arctan identities must agree; machin_pi raises otherwise."""
    start = time.perf_counter()
    try:
        ref = reference_mod.machin_pi(digits)
    except reference_mod.ReferenceMismatchError as exc:
        return CheckResult(
            "reference-digits", False, str(exc), time.perf_counter() - start
        )
    known = "3.141592653589793"
    if not ref.decimal.startswith(known[: min(len(known), digits + 2)]):
        return CheckResult(
            "reference-digits",
            False,
            f"reference digits {ref.decimal[:18]}... lost the known prefix",
            time.perf_counter() - start,
        )
    return CheckResult(
        "reference-digits",
        True,
        f"{digits} digits, both identities agree",
        time.perf_counter() - start,
    )


def check_anchor_points() -> CheckResult:
    """Two anchor points for plain doubles.

    (i=5, N=3e6) reaches 11 digits and then stalls on rounding noise;
    (i=17, N=130) reaches about 15 digits almost instantly.
    """
    start = time.perf_counter()
    backend = make_backend(BackendSpec(BackendKind.FLOAT64))
    ref = reference_mod.machin_pi(30)
    slow = series_mod.pi_estimate(5, 3_000_000, backend)
    slow_digits = reference_mod.correct_digits(slow.value, ref)
    if slow_digits < 11:
        return CheckResult(
            "reproduction-points",
            False,
            f"(5, 3e6, f64) gave {slow_digits} digits, expected >= 11",
            time.perf_counter() - start,
        )
    fast = series_mod.pi_estimate(17, 130, backend)
    fast_digits = reference_mod.correct_digits(fast.value, ref)
    if fast_digits < 14:
        return CheckResult(
            "reproduction-points",
            False,
            f"(17, 130, f64) gave {fast_digits} digits, expected >= 14",
            time.perf_counter() - start,
        )
    return CheckResult(
        "reproduction-points",
        True,
        f"(5, 3e6) -> {slow_digits} digits; (17, 130) -> {fast_digits} digits",
        time.perf_counter() - start,
    )


def run_verification(level: str) -> "list[CheckResult]":
    """Run every suite for ``level`` ("quick" or "full")."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    results = []
    if level == "quick":
        results.append(check_coefficient_equivalence(12, 60))
        results.append(check_odd_closed_form(11))
        results.append(check_volume_identity(1000, Fraction(1, 10**4)))
        results.append(
            check_slice_quadrature(
                (1, 2, 3, 5, 8),
                (Fraction(1),),
                4096,
                Fraction(1, 10**3),
            )
        )
        results.append(check_reference_digits(50))
    else:
        results.append(check_coefficient_equivalence(40, 200))
        results.append(check_odd_closed_form(99))
        results.append(check_volume_identity(10_000, Fraction(1, 10**6)))
        results.append(
            check_slice_quadrature(
                tuple(range(1, 11)),
                (Fraction(1, 2), Fraction(1), Fraction(2)),
                2**16,
                Fraction(1, 10**4),
            )
        )
        results.append(check_reference_digits(1000))
        results.append(check_anchor_points())
    return results
