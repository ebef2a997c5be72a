"""Command-line surface: flag parsing, reports, exit codes, output files."""

import pytest

import hyperpi.cli as cli
import hyperpi.series as series_mod
from hyperpi.backends import BackendKind, BackendSpec, make_backend
from hyperpi.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    UsageError,
    main,
    parse_backend_list,
    parse_int_list,
    resolve_jobs,
)
from hyperpi.scan import CSV_HEADER
from hyperpi.series import pi_estimate

HEADER_LINE = ",".join(CSV_HEADER)


class TestFlagParsing:
    def test_ranges_and_lists(self):
        assert parse_int_list("2..20..1") == list(range(2, 21))
        assert parse_int_list("2..6..2") == [2, 4, 6]
        assert parse_int_list("5..8") == [5, 6, 7, 8]
        assert parse_int_list("7") == [7]
        assert parse_int_list("100,1000,10000") == [100, 1000, 10000]

    @pytest.mark.parametrize("bad", ["", "a", "5..1", "2..8..0", "1..2..3..4", "1,,2"])
    def test_rejected_lists(self, bad):
        with pytest.raises(UsageError):
            parse_int_list(bad)

    def test_backend_lists(self):
        specs = parse_backend_list("f64,ap256")
        assert [s.tag for s in specs] == ["f64", "ap256"]
        with pytest.raises(UsageError):
            parse_backend_list("f64,hexfloat")

    def test_jobs_resolution(self, monkeypatch):
        monkeypatch.delenv("HYPERPI_JOBS", raising=False)
        assert resolve_jobs(4) == 4
        assert resolve_jobs(None) >= 1
        monkeypatch.setenv("HYPERPI_JOBS", "3")
        assert resolve_jobs(None) == 3
        assert resolve_jobs(2) == 2  # explicit flag beats the environment
        monkeypatch.setenv("HYPERPI_JOBS", "zero?")
        with pytest.raises(UsageError):
            resolve_jobs(None)


class TestCompute:
    def test_report_fields(self, capsys):
        assert main(["compute", "--i", "17", "--terms", "130", "--backend", "f64"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "estimate       = 3.14159265358979" in out
        digits = int(out.split("correct_digits = ")[1].splitlines()[0])
        assert digits >= 14
        assert "series[17]" in out and "series[16]" in out
        assert "(series terminated after 8 terms)" in out

    def test_rational_exact_factor_report(self, capsys):
        assert main(["compute", "--i", "3", "--terms", "5", "--backend", "rational"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "series[3] = 2/3 (exact)" in out
        assert "(5 terms kept)" in out

    def test_rejects_zero_index(self, capsys):
        assert main(["compute", "--i", "0", "--terms", "10"]) == EXIT_USAGE
        assert capsys.readouterr().err

    def test_requires_terms(self):
        assert main(["compute", "--i", "2"]) == EXIT_USAGE

    def test_rational_term_warning(self, capsys, monkeypatch, rational):
        # the warning must fire before the (deliberately slow) evaluation,
        # so stub the evaluation itself
        stub = pi_estimate(2, 10, rational)
        monkeypatch.setattr(cli, "pi_estimate", lambda i, terms, backend: stub)
        assert (
            main(["compute", "--i", "2", "--terms", "10001", "--backend", "rational"])
            == EXIT_OK
        )
        err = capsys.readouterr().err
        assert "warning" in err and "rational" in err

    def test_no_warning_at_threshold(self, capsys, monkeypatch, rational):
        stub = pi_estimate(2, 10, rational)
        monkeypatch.setattr(cli, "pi_estimate", lambda i, terms, backend: stub)
        main(["compute", "--i", "2", "--terms", "10000", "--backend", "rational"])
        assert "warning" not in capsys.readouterr().err


class TestScan:
    def test_full_range_grid(self, capsys):
        code = main(
            [
                "scan",
                "--i", "2..20..1",
                "--terms", "100,1000,10000",
                "--backend", "ap256",
                "--format", "csv",
            ]
        )
        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == HEADER_LINE
        assert len(lines) == 1 + 19 * 3

    def test_terms_alias(self, capsys):
        assert main(["scan", "--i", "2", "-N", "100", "--backend", "f64"]) == EXIT_OK
        assert len(capsys.readouterr().out.splitlines()) == 2

    def test_compensated_dominates_at_drift_point(self, capsys):
        # plain doubles are accumulation-limited at this depth, so the
        # compensated row must score at least as many digits
        assert (
            main(["scan", "--i", "5", "--terms", "3000000", "--backend", "f64,f64c"])
            == EXIT_OK
        )
        rows = [l.split(",") for l in capsys.readouterr().out.splitlines()[1:]]
        digits = {row[2]: int(row[5]) for row in rows}
        assert digits["f64c"] >= digits["f64"]

    def test_json_format(self, capsys):
        assert main(["scan", "--i", "3", "-N", "50", "--backend", "f64", "--format", "json"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.lstrip().startswith("[")
        assert '"estimate"' in out

    def test_rejects_unknown_format(self, capsys):
        assert (
            main(["scan", "--i", "2", "-N", "10", "--backend", "f64", "--format", "xml"])
            == EXIT_USAGE
        )

    def test_rejects_zero_index_via_grid(self, capsys):
        assert main(["scan", "--i", "0", "-N", "10", "--backend", "f64"]) == EXIT_USAGE

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "points.csv"
        code = main(["scan", "--i", "2", "-N", "20", "--backend", "f64", "--out", str(target)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        content = target.read_bytes().decode("utf-8")
        assert content.splitlines()[0] == HEADER_LINE

    def test_unwritable_out_path(self, tmp_path):
        target = tmp_path / "missing" / "deep" / "points.csv"
        code = main(["scan", "--i", "2", "-N", "20", "--backend", "f64", "--out", str(target)])
        assert code == EXIT_IO

    def test_jobs_env_fallback(self, capsys, monkeypatch):
        args = ["scan", "--i", "2,5", "-N", "40,80", "--backend", "f64"]
        assert main(args) == EXIT_OK
        serial = [l.rsplit(",", 1)[0] for l in capsys.readouterr().out.splitlines()]
        monkeypatch.setenv("HYPERPI_JOBS", "2")
        assert main(args) == EXIT_OK
        parallel = [l.rsplit(",", 1)[0] for l in capsys.readouterr().out.splitlines()]
        assert serial == parallel

    def test_deterministic_output(self, capsys):
        args = ["scan", "--i", "2,17", "-N", "60,130", "--backend", "f64,ap128"]
        assert main(args) == EXIT_OK
        first = [l.rsplit(",", 1)[0] for l in capsys.readouterr().out.splitlines()]
        assert main(args) == EXIT_OK
        second = [l.rsplit(",", 1)[0] for l in capsys.readouterr().out.splitlines()]
        assert first == second


class TestVerify:
    def test_quick_passes(self, capsys):
        assert main(["verify", "--level", "quick"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_mutation_fails_with_suite_name(self, capsys, monkeypatch):
        from test_verify import drop_minus_one

        monkeypatch.setattr(series_mod, "next_coefficient", drop_minus_one)
        assert main(["verify", "--level", "quick"]) == EXIT_VERIFY_FAILED
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "coefficient-equivalence" in out

    def test_rejects_unknown_level(self):
        assert main(["verify", "--level", "paranoid"]) == EXIT_USAGE


class TestBench:
    def test_single_point(self, capsys):
        assert (
            main(["bench", "--i", "17", "--terms", "130", "--backend", "f64", "--repeat", "5"])
            == EXIT_OK
        )
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "i,N,backend,repeats,median_elapsed_ns"
        i, n, tag, repeats, elapsed = lines[1].split(",")
        assert (i, n, tag, repeats) == ("17", "130", "f64", "5")
        assert int(elapsed) > 0

    def test_rejects_zero_repeat(self):
        assert main(["bench", "--i", "2", "--terms", "10", "--repeat", "0"]) == EXIT_USAGE


class TestTopLevel:
    def test_no_subcommand_is_usage_error(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_subcommand(self):
        assert main(["transcend"]) == EXIT_USAGE

    def test_console_entry_point_exists(self):
        import importlib.metadata as md

        entries = md.entry_points(group="console_scripts")
        assert any(e.name == "hyperpi" and e.value.startswith("hyperpi.cli") for e in entries)
