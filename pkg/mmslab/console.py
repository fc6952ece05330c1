"""Functions to manage console output

Output functions:
    format_error(error, operation): the single stderr line for a failed run
    print_error(error, operation): prints that line to stderr
    get_printable_value(value): a scalar formatted for the summary, flags color-coded
    print_summary(report): prints the named scalars of a report

"""

import sys
from typing import Any, Optional

import colorama as cr  # type: ignore

from .errors import MMSLabError
from .runner import ExperimentReport

COLORS = {
    None: cr.Fore.WHITE,
    False: cr.Style.BRIGHT + cr.Fore.RED,
    True: cr.Style.BRIGHT + cr.Fore.GREEN,
}

# Nested documents wider than this are summarized by their size
SUMMARY_WIDTH = 8


def format_error(error: MMSLabError, operation: Optional[str] = None) -> str:
    """Single line describing a failed run

    Args:
        error: the raised error
        operation: fallback when the error names no operation

    Returns:
        'mms-lab: error: kind=<class> code=<exit code> op=<operation> msg=<message>'
    """
    op = error.operation or operation or "-"
    message = " ".join(str(error.message).split())
    return f"mms-lab: error: kind={type(error).__name__} code={error.exit_code} op={op} msg={message}"


def print_error(error: MMSLabError, operation: Optional[str] = None):
    """Print the error line to stderr, in RED when stderr is a terminal"""
    line = format_error(error, operation)
    if sys.stderr.isatty():
        line = COLORS[False] + line + cr.Style.RESET_ALL
    print(line, file=sys.stderr)


def get_printable_value(value: Any) -> str:
    """Scalar formatted for the console

    Booleans are printed GREEN (True) or RED (False),
    None in WHITE, floats with 6 significant figures.
    Long lists and dicts are shown by their size.
    """
    if value is None or isinstance(value, bool):
        return COLORS[value] + str(value) + cr.Style.RESET_ALL
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list) and len(value) > SUMMARY_WIDTH:
        return f"[{len(value)} values]"
    if isinstance(value, dict) and len(value) > SUMMARY_WIDTH:
        return f"{{{len(value)} entries}}"
    return str(value)


def print_summary(report: ExperimentReport):
    """Print the scalars of a report, one per line

    Nested documents are printed one level deep with indented keys.
    """
    print(cr.Style.BRIGHT + report.command + cr.Style.RESET_ALL)
    for name in sorted(report.scalars):
        value = report.scalars[name]
        if isinstance(value, dict) and len(value) <= 4 * SUMMARY_WIDTH:
            print(f"  {name}:")
            for key in sorted(value):
                print(f"    {key:<24}{get_printable_value(value[key])}")
        else:
            print(f"  {name:<26}{get_printable_value(value)}")

    for name, rows in report.tables.items():
        print(f"  table {name:<20}{len(rows)} rows")
    print(f"  config_sha256             {report.provenance.get('config_sha256', '-')}")
