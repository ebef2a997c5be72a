"""Command-line front end: compute, scan, verify, bench.

Standard output carries data and reports only; diagnostics go to
standard error.  Exit codes: 0 success, 1 verification failure, 2 usage
error, 3 I/O error.  There is no randomness anywhere, so identical
invocations produce identical output apart from elapsed-time columns.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
import time

from .backends import (
    BackendKind,
    BackendSpec,
    format_scientific,
    make_backend,
    parse_backend_tag,
    to_decimal_string,
)
from .reference import correct_digits, machin_pi
from .scan import ScanGrid, default_grid, emit_csv, emit_json, run_scan
from .series import EXACT_TAIL, pi_estimate
from .verify import LEVELS, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

RATIONAL_WARN_TERMS = 10_000


class UsageError(ValueError):
    pass


def parse_int_list(text: str) -> "list[int]":
    """Comma-separated integers and inclusive start..end..step ranges.

    ``2..20..1`` expands to 2,3,...,20; ``100,1000`` stays a pair.
    """
    values: "list[int]" = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise UsageError(f"empty entry in list: {text!r}")
        if ".." in part:
            pieces = part.split("..")
            if len(pieces) == 2:
                pieces.append("1")
            if len(pieces) != 3:
                raise UsageError(f"bad range (want start..end..step): {part!r}")
            try:
                start, end, step = (int(p) for p in pieces)
            except ValueError:
                raise UsageError(f"non-integer in range: {part!r}") from None
            if step < 1:
                raise UsageError(f"range step must be >= 1: {part!r}")
            values.extend(range(start, end + 1, step))
        else:
            try:
                values.append(int(part))
            except ValueError:
                raise UsageError(f"non-integer value: {part!r}") from None
    if not values:
        raise UsageError(f"empty list: {text!r}")
    return values


def parse_backend_list(text: str) -> "list[BackendSpec]":
    specs = []
    for part in text.split(","):
        try:
            specs.append(parse_backend_tag(part))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return specs


def resolve_jobs(flag_value: "int | None") -> int:
    """--jobs flag, HYPERPI_JOBS fallback, then available parallelism."""
    if flag_value is not None:
        jobs = flag_value
    else:
        env = os.environ.get("HYPERPI_JOBS")
        if env is not None:
            try:
                jobs = int(env)
            except ValueError:
                raise UsageError(f"HYPERPI_JOBS must be an integer, got {env!r}")
        else:
            jobs = os.cpu_count() or 1
    if jobs < 1:
        raise UsageError(f"jobs must be >= 1, got {jobs}")
    return jobs


def _write_output(data: bytes, out_path: "str | None") -> None:
    if out_path is None:
        sys.stdout.write(data.decode("utf-8"))
        return
    try:
        with open(out_path, "wb") as handle:
            handle.write(data)
    except OSError as exc:
        raise IOError(f"cannot write {out_path}: {exc}") from exc


def _series_report_line(label: str, evaluation, spec: BackendSpec, digits: int) -> str:
    if evaluation.tail_bound == EXACT_TAIL:
        if spec.kind is BackendKind.RATIONAL:
            exact = evaluation.value.to_fraction()
            return f"{label} = {exact.numerator}/{exact.denominator} (exact)"
        return (
            f"{label} = {to_decimal_string(evaluation.value, digits)}"
            f" (series terminated after {evaluation.terms_used} terms)"
        )
    return (
        f"{label} = {to_decimal_string(evaluation.value, digits)}"
        f" ({evaluation.terms_used} terms kept)"
    )


def cmd_compute(args: argparse.Namespace) -> int:
    if args.i is None or args.terms is None:
        raise UsageError("compute needs --i and --terms")
    if args.i < 1:
        raise UsageError(f"--i must be >= 1, got {args.i}")
    if args.terms < 1:
        raise UsageError(f"--terms must be >= 1, got {args.terms}")
    digits = args.digits if args.digits is not None else 20
    if digits < 1:
        raise UsageError(f"--digits must be >= 1, got {digits}")
    spec = parse_backend_tag(args.backend)
    if spec.kind is BackendKind.RATIONAL and args.terms > RATIONAL_WARN_TERMS:
        print(
            f"warning: rational backend with {args.terms} terms is exact "
            f"but slow (term denominators grow quadratically)",
            file=sys.stderr,
        )
    backend = make_backend(spec)
    estimate = pi_estimate(args.i, args.terms, backend)
    reference = machin_pi(digits)
    error = abs(estimate.value.to_fraction() - reference.as_fraction())
    digit_count = correct_digits(estimate.value, reference)

    print(f"i              = {args.i}")
    print(f"terms          = {args.terms}")
    print(f"backend        = {spec.tag}")
    print(f"estimate       = {to_decimal_string(estimate.value, digits)}")
    print(f"reference      = {reference.decimal}")
    print(f"abs_error      = {format_scientific(error)}")
    print(f"correct_digits = {digit_count}")
    print(_series_report_line(f"series[{args.i}]", estimate.series_i, spec, digits))
    print(
        _series_report_line(f"series[{args.i - 1}]", estimate.series_prev, spec, digits)
    )
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    base = default_grid()
    i_values = parse_int_list(args.i) if args.i is not None else base.i_values
    n_values = parse_int_list(args.terms) if args.terms is not None else base.n_values
    backends = (
        parse_backend_list(args.backend)
        if args.backend is not None
        else base.backends
    )
    try:
        grid = ScanGrid(
            i_values=tuple(i_values),
            n_values=tuple(n_values),
            backends=tuple(backends),
            reference_digits=args.digits,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    jobs = resolve_jobs(args.jobs)
    records = run_scan(grid, jobs=jobs)
    data = emit_csv(records) if args.format == "csv" else emit_json(records)
    _write_output(data, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_verification(args.level)
    failures = [r for r in results if not r.passed]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.suite}: {result.detail} [{result.elapsed_s:.2f}s]")
    print(
        f"{len(results) - len(failures)}/{len(results)} suites passed "
        f"at level {args.level}"
    )
    return EXIT_VERIFY_FAILED if failures else EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    if args.i is None or args.terms is None:
        raise UsageError("bench needs --i and --terms")
    if args.repeat < 1:
        raise UsageError(f"--repeat must be >= 1, got {args.repeat}")
    i_values = parse_int_list(args.i)
    n_values = parse_int_list(args.terms)
    backends = parse_backend_list(args.backend)
    for i in i_values:
        if i < 1:
            raise UsageError(f"--i entries must be >= 1, got {i}")
    for n in n_values:
        if n < 1:
            raise UsageError(f"--terms entries must be >= 1, got {n}")

    lines = ["i,N,backend,repeats,median_elapsed_ns"]
    # timing wants isolation, so points always run one at a time
    for i in i_values:
        for n in n_values:
            for spec in backends:
                backend = make_backend(spec)
                samples = []
                for _ in range(args.repeat):
                    start = time.perf_counter_ns()
                    pi_estimate(i, n, backend)
                    samples.append(time.perf_counter_ns() - start)
                median = statistics.median_low(samples)
                lines.append(f"{i},{n},{spec.tag},{args.repeat},{median}")
    _write_output(("\n".join(lines) + "\n").encode("utf-8"), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperpi",
        description="pi from hypersphere slice series: compute, scan, verify, bench",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    compute = sub.add_parser("compute", help="one estimate with a digit report")
    compute.add_argument("--i", type=int, help="family index (>= 1)")
    compute.add_argument("--terms", "-N", type=int, help="series term budget")
    compute.add_argument("--backend", default="f64", help="rational|f64|f64c|ap<bits>")
    compute.add_argument("--digits", type=int, help="report digits (default 20)")

    scan = sub.add_parser("scan", help="grid scan to CSV or JSON")
    scan.add_argument("--i", help="list/range, e.g. 2..20..1 or 2,3,5")
    scan.add_argument("--terms", "-N", help="list/range of term budgets")
    scan.add_argument("--backend", help="comma-separated backend tags")
    scan.add_argument("--digits", type=int, help="reference digits (default: auto)")
    scan.add_argument("--format", choices=("csv", "json"), default="csv")
    scan.add_argument("--out", help="output path (default: standard output)")
    scan.add_argument("--jobs", type=int, help="parallel workers (default: cores)")

    verify = sub.add_parser("verify", help="run the identity check suites")
    verify.add_argument("--level", choices=LEVELS, default="quick")

    bench = sub.add_parser("bench", help="median-of-k timings to CSV")
    bench.add_argument("--i", help="list/range of family indices")
    bench.add_argument("--terms", "-N", help="list/range of term budgets")
    bench.add_argument("--backend", default="f64", help="comma-separated tags")
    bench.add_argument("--repeat", type=int, default=3, help="runs per point")
    bench.add_argument("--out", help="output path (default: standard output)")

    return parser


_COMMANDS = {
    "compute": cmd_compute,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def main(argv: "list[str] | None" = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = _COMMANDS[args.subcommand]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # domain validation surfaced from the library: a usage problem
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
