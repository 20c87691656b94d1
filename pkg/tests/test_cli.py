"""Tests for the command-line front end."""
import json

import pytest

from cmlt import __version__
from cmlt.cli import COMPARE_COLUMNS, main, significant


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_significant_rounding():
    """Test rounding to significant digits."""
    assert significant(123456.789) == 123500.0
    assert significant(0.000123456) == 0.0001235
    assert significant(0.0) == 0.0
    assert significant(None) is None


def test_constant_with_odd_trace_for_d2(capsys):
    """Test that the D=2 constant vanishes at r = 3."""
    code, report = run_json(capsys, "constant", "--D", "2", "--g", "5", "--r", "3")
    assert code == 0
    assert report["command"] == "constant"
    assert report["results"]["varpi"] == 0.0
    assert report["results"]["reason"] == "xi = 0"
    assert report["metadata"]["version"] == __version__


def test_classify_anomalous_reports_witness(capsys):
    """Test the sextic witness for g = 80."""
    code, report = run_json(capsys, "classify", "--D", "3", "--g", "80", "--mode", "anomalous")
    assert code == 0
    assert report["results"]["result"] == "FINITE"
    assert report["results"]["witness"] == "80·⬡²"


def test_classify_positivity_text(capsys):
    """Test the text rendering of a verdict."""
    assert main(["classify", "--D", "7", "--g", "1", "--r", "1"]) == 0
    out = capsys.readouterr().out
    assert "VANISHES" in out
    assert "condition 9" in out


def test_json_is_deterministic_apart_from_runtime(capsys):
    """Test that two runs differ only in metadata.runtime."""
    argv = ("compare", "--D", "3", "--g", "-432", "--r", "2", "--x", "20000", "--route", "formula", "--threads", "1")
    _, first = run_json(capsys, *argv)
    _, second = run_json(capsys, *argv)
    first["metadata"].pop("runtime")
    second["metadata"].pop("runtime")
    assert first == second


def test_traces_csv(capsys):
    """Test the histogram CSV."""
    argv = ["traces", "--D", "1", "--g", "-4", "--x", "1000", "--r-min", "-2", "--r-max", "2"]
    assert main(argv + ["--format", "csv", "--threads", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "r,count"
    assert [line.split(",")[0] for line in lines[1:]] == ["-2", "-1", "0", "1", "2"]
    counts = {int(r): int(c) for r, c in (line.split(",") for line in lines[1:])}
    assert counts[-1] == counts[1] == 0
    assert counts[0] > 0


def test_compare_csv_header(capsys):
    """Test the comparison CSV columns."""
    argv = ["compare", "--D", "1", "--g", "-4", "--r", "2", "--x", "10000", "--route", "formula"]
    assert main(argv + ["--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(COMPARE_COLUMNS)
    assert len(lines) == 2


def test_fixed_trace_json(capsys):
    """Test both fixed-trace routes for D=2."""
    code, report = run_json(capsys, "fixed-trace", "--D", "2", "--r", "2", "--x", "1000")
    assert code == 0
    assert report["results"]["via_elements"] == report["results"]["via_polynomial"] == 5
    assert report["results"]["difference"] == 0


def test_hl_json(capsys):
    """Test primes of the form n^2 + 1 below 100."""
    code, report = run_json(capsys, "hl", "--a", "1", "--b", "0", "--c", "1", "--x", "100")
    assert code == 0
    assert report["results"]["count"] == 4
    code, report = run_json(capsys, "hl", "--a", "1", "--b", "0", "--c", "1", "--x", "100", "--q", "3", "--u", "1")
    assert code == 0
    assert report["results"]["q"] == 3


def test_verify_quick_suite(capsys):
    """Test a passing suite from the command line."""
    assert main(["verify", "--suite", "gauss-sums", "--quick"]) == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1] == "PASS"


@pytest.mark.parametrize(
    "argv",
    [
        ["constant", "--D", "5", "--g", "1", "--r", "2"],
        ["classify", "--D", "1", "--g", "1"],
        ["traces", "--D", "1"],
        ["traces", "--D", "1", "--g", "1", "--x", "100", "--r-min", "3", "--r-max", "1"],
        ["constant", "--D", "1", "--g", "0", "--r", "2"],
        ["hl", "--a", "1", "--b", "0", "--c", "-4", "--x", "100"],
        ["verify", "--suite", "nothing"],
        ["frobenius"],
    ],
)
def test_invalid_arguments_exit_with_two(argv, capsys):
    """Test exit code 2 on rejected arguments."""
    assert main(argv) == 2
    capsys.readouterr()


def test_version_flag(capsys):
    """Test --version."""
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
