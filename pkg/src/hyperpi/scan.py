"""Convergence scans over (i, N, backend) grids.

Each grid point runs one pi estimate, scores it against a single shared
reference, and lands in a :class:`ScanRecord` whose numeric fields are
already rendered as decimal strings — records are what gets serialized,
compared and replayed, so they must not depend on float formatting.

The ``last_term`` and ``tail_bound`` columns describe the even-subscript
series factor of the estimate (the one that actually truncates; its odd
partner terminates and contributes no error).

Records come back in lexicographic grid order (i, then N, then backend
position) no matter how many worker processes ran the points.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields as dataclass_fields
from typing import Iterable, Optional, Sequence

from .backends import (
    BackendKind,
    BackendSpec,
    format_scientific,
    format_significant,
    make_backend,
)
from .reference import ReferenceDigits, correct_digits, machin_pi
from .series import EXACT_TAIL, pi_estimate

CSV_HEADER = (
    "i",
    "N",
    "backend",
    "estimate",
    "abs_error",
    "correct_digits",
    "last_term",
    "tail_bound",
    "elapsed_ns",
)


def _meaningful_digits(spec: BackendSpec) -> int:
    if spec.kind in (BackendKind.FLOAT64, BackendKind.FLOAT64_COMPENSATED):
        return 17
    if spec.kind is BackendKind.BIGFLOAT:
        assert spec.precision_bits is not None
        return math.ceil(spec.precision_bits * math.log10(2)) + 1
    return 28  # rational: truncation-limited, fixed allowance


def required_reference_digits(backends: Sequence[BackendSpec]) -> int:
    """Smallest reference length that can score every backend in the list."""
    return 2 + max(_meaningful_digits(spec) for spec in backends)


@dataclass(frozen=True)
class ScanGrid:
    """The cross product of family indices, term budgets and backends.

    ``reference_digits`` defaults to the smallest length that can score
    the most precise backend present; passing fewer than that is an
    error rather than a silent mis-score.
    """

    i_values: "tuple[int, ...]"
    n_values: "tuple[int, ...]"
    backends: "tuple[BackendSpec, ...]"
    reference_digits: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "i_values", tuple(self.i_values))
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "backends", tuple(self.backends))
        if not self.i_values or not self.n_values or not self.backends:
            raise ValueError("grid lists must be non-empty")
        for i in self.i_values:
            if not isinstance(i, int) or i < 1:
                raise ValueError(f"family index must be >= 1, got {i!r}")
        for n in self.n_values:
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"term count must be >= 1, got {n!r}")
        needed = required_reference_digits(self.backends)
        if self.reference_digits is None:
            object.__setattr__(self, "reference_digits", needed)
        elif self.reference_digits < needed:
            raise ValueError(
                f"reference_digits={self.reference_digits} cannot score the "
                f"most precise backend in the grid; need >= {needed}"
            )

    def points(self) -> "list[tuple[int, int, BackendSpec]]":
        return [
            (i, n, spec)
            for i in self.i_values
            for n in self.n_values
            for spec in self.backends
        ]


def default_grid() -> ScanGrid:
    """The standing regression grid: small and odd/even-mixed family
    members at three term budgets, on plain doubles and 256-bit floats."""
    return ScanGrid(
        i_values=(2, 3, 5, 9, 17),
        n_values=(100, 1000, 10000),
        backends=(
            BackendSpec(BackendKind.FLOAT64),
            BackendSpec(BackendKind.BIGFLOAT, precision_bits=256),
        ),
    )


@dataclass(frozen=True)
class ScanRecord:
    """One scored grid point; every numeric field pre-rendered."""

    i: int
    N: int
    backend: str
    estimate: str
    abs_error: str
    correct_digits: int
    last_term: str
    tail_bound: str
    elapsed_ns: int


def _scan_point(point, reference: ReferenceDigits) -> ScanRecord:
    i, n, spec = point
    backend = make_backend(spec)
    start = time.perf_counter_ns()
    estimate = pi_estimate(i, n, backend)
    elapsed = time.perf_counter_ns() - start

    value = estimate.value.to_fraction()
    error = abs(value - reference.as_fraction())
    even_series = (
        estimate.series_i if i % 2 == 0 else estimate.series_prev
    )
    tail = even_series.tail_bound
    if isinstance(tail, str):
        tail_text = tail
    elif tail is None:
        tail_text = ""
    else:
        tail_text = format_scientific(tail.to_fraction())
    return ScanRecord(
        i=i,
        N=n,
        backend=spec.tag,
        estimate=format_significant(value, 20),
        abs_error=format_scientific(error),
        correct_digits=correct_digits(estimate.value, reference),
        last_term=format_scientific(even_series.last_term_magnitude.to_fraction()),
        tail_bound=tail_text,
        elapsed_ns=elapsed,
    )


def run_scan(grid: ScanGrid, jobs: int = 1) -> list:
    """Evaluate every grid point; ``jobs`` > 1 fans points out to worker
    processes.  Output order is grid order either way."""
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    reference = machin_pi(grid.reference_digits)
    points = grid.points()
    if jobs == 1 or len(points) <= 1:
        return [_scan_point(p, reference) for p in points]
    workers = min(jobs, len(points))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scan_point, points, [reference] * len(points)))


def emit_csv(records: Iterable[ScanRecord]) -> bytes:
    """UTF-8 CSV with LF line endings; bit-reproducible for equal records."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(
            [
                record.i,
                record.N,
                record.backend,
                record.estimate,
                record.abs_error,
                record.correct_digits,
                record.last_term,
                record.tail_bound,
                record.elapsed_ns,
            ]
        )
    return out.getvalue().encode("utf-8")


def emit_json(records: Iterable[ScanRecord]) -> bytes:
    """JSON array of record objects; decimal fields stay strings."""
    payload = [
        {
            "i": record.i,
            "N": record.N,
            "backend": record.backend,
            "estimate": record.estimate,
            "abs_error": record.abs_error,
            "correct_digits": record.correct_digits,
            "last_term": record.last_term,
            "tail_bound": record.tail_bound,
            "elapsed_ns": record.elapsed_ns,
        }
        for record in records
    ]
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def parse_json(data: bytes) -> list:
    """Inverse of :func:`emit_json`."""
    names = {f.name for f in dataclass_fields(ScanRecord)}
    out = []
    for obj in json.loads(data.decode("utf-8")):
        unknown = set(obj) - names
        if unknown:
            raise ValueError(f"unknown record fields: {sorted(unknown)}")
        missing = names - set(obj)
        if missing:
            raise ValueError(f"missing record fields: {sorted(missing)}")
        out.append(ScanRecord(**obj))
    return out
