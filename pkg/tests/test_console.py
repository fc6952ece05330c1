"""Tests for console module"""
# pylint: disable=no-self-use

import colorama as cr  # type: ignore

from mmslab.console import (
    COLORS,
    SUMMARY_WIDTH,
    format_error,
    get_printable_value,
    print_error,
    print_summary,
)
from mmslab.errors import ConfigError, ConvergenceError, MMSLabError
from mmslab.runner import ExperimentReport


class TestFormatError:
    "Tests of error line formatting"

    def test_fields(self):
        "kind, exit code, operation and message"
        line = format_error(ConfigError("seed: required", "config"))
        assert line == "mms-lab: error: kind=ConfigError code=2 op=config msg=seed: required"

    def test_operation_fallback(self):
        "the error's own operation wins over the fallback"
        assert "op=solve" in format_error(ConvergenceError("cap", "solve"), "run")
        assert "op=run" in format_error(ConvergenceError("cap"), "run")
        assert "op=- " in format_error(MMSLabError("boom"))

    def test_single_line(self):
        "messages are collapsed to one line"
        line = format_error(ConfigError("first\n  second", "config"))
        assert "\n" not in line
        assert line.endswith("msg=first second")

    def test_print_error(self, capsys):
        "errors go to stderr"
        print_error(ConfigError("bad", "config"))
        captured = capsys.readouterr()
        assert captured.out == ""
        assert captured.err == "mms-lab: error: kind=ConfigError code=2 op=config msg=bad\n"


class TestPrintableValue:
    "Tests of get_printable_value() function"

    def test_flags(self):
        "booleans and None are color-coded"
        assert get_printable_value(True) == COLORS[True] + "True" + cr.Style.RESET_ALL
        assert get_printable_value(False) == COLORS[False] + "False" + cr.Style.RESET_ALL
        assert get_printable_value(None) == COLORS[None] + "None" + cr.Style.RESET_ALL

    def test_numbers(self):
        "floats to six significant figures"
        assert get_printable_value(3.14159265) == "3.14159"
        assert get_printable_value(2.0) == "2"
        assert get_printable_value(7) == "7"

    def test_collections(self):
        "long collections are summarized"
        assert get_printable_value([1, 2]) == "[1, 2]"
        assert get_printable_value(list(range(SUMMARY_WIDTH + 1))) == f"[{SUMMARY_WIDTH + 1} values]"
        wide = {str(index): index for index in range(SUMMARY_WIDTH + 1)}
        assert get_printable_value(wide) == f"{{{SUMMARY_WIDTH + 1} entries}}"


class TestPrintSummary:
    "Tests of print_summary() function"

    def test_summary(self, capsys):
        "scalars, nested documents and table sizes"
        report = ExperimentReport(
            command="seminorm",
            scalars={"value": 0.5, "p": 2.0, "growth": {"doubling": 3.0}},
            tables={"rows": [{"a": 1}, {"a": 2}]},
            provenance={"config_sha256": "abc123"},
        )
        print_summary(report)
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert "seminorm" in lines[0]
        assert any(line.strip().startswith("value") and line.endswith("0.5") for line in lines)
        assert any(line.strip() == "growth:" for line in lines)
        assert any("doubling" in line and line.endswith("3") for line in lines)
        assert "2 rows" in out
        assert "abc123" in out
