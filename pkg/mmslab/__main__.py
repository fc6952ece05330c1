"""Entry point for mmslab package

>>> python3 -m mmslab <subcommand> --config <path> [options]

usage: mms-lab [-h] [-c CONFIG] [-o OUT] [--seed SEED] [--threads THREADS] [-v]
               {space-gen,bvy,seminorm,...,stability,schema}

mms-lab computes functionals on finite metric measure spaces

positional arguments:
  subcommand            experiment to run, or 'schema' to print the configuration schema

optional arguments:
  -h, --help            show this help message and exit
  -c CONFIG, --config CONFIG
                        JSON configuration file
  -o OUT, --out OUT     directory for the JSON summary and CSV tables
  --seed SEED           random seed (overrides the configuration)
  --threads THREADS     worker processes for sweeps (overrides the configuration)
  -v, --verbose         increase log verbosity

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 file I/O failure.

"""

import argparse
import json
import logging
import sys

import colorama as cr  # type: ignore

from mmslab.config import COMMANDS, config_schema, load_config, validate_config
from mmslab.console import print_error, print_summary
from mmslab.errors import ConfigError, MMSLabError
from mmslab.runner import Runner, write_report

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def main(clargs: argparse.Namespace) -> int:
    """Run one subcommand

    Loads the configuration, applies command line overrides,
    runs the experiment and writes its reports.
    Errors are reported as a single line on stderr.

    Args:
        clargs: command line arguments as returned by argparse.parse_args()

    Returns:
        exit code
    """
    logging.basicConfig(
        level=LOG_LEVELS[min(clargs.verbose, len(LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )

    # schema needs no configuration
    if clargs.subcommand == "schema":
        print(json.dumps(config_schema(), indent=2, sort_keys=True))
        return 0

    try:
        if clargs.config is None:
            raise ConfigError("--config is required", clargs.subcommand)
        config = load_config(clargs.config)

        # command line overrides
        overrides = {}
        if clargs.seed is not None:
            overrides["seed"] = clargs.seed
        if clargs.threads is not None:
            overrides["threads"] = clargs.threads
        if clargs.out is not None:
            overrides["out"] = clargs.out
        if overrides:
            config = validate_config({**config.model_dump(), **overrides})

        report = Runner(config).run(clargs.subcommand)

        if config.out is not None:
            write_report(report, config.out)

    except MMSLabError as error:
        print_error(error, clargs.subcommand)
        return error.exit_code

    cr.init()
    print_summary(report)
    return 0


def parse_args(args: list[str]) -> argparse.Namespace:
    """Parse command line arguments

    Unknown subcommands are rejected by argparse with exit code 2.

    Args:
        args: sys.argv[1:]

    Returns:
        Namespace object containing parsed argument data
    """

    # Build command line options
    parser = argparse.ArgumentParser(
        prog="mms-lab",
        description="mms-lab computes functionals on finite metric measure spaces",
    )

    # experiment
    parser.add_argument(
        "subcommand",
        help="experiment to run, or 'schema' to print the configuration schema",
        choices=COMMANDS + ("schema",),
    )

    # configuration file
    parser.add_argument("-c", "--config", help="JSON configuration file")

    # output directory
    parser.add_argument(
        "-o", "--out", help="directory for the JSON summary and CSV tables"
    )

    # seed
    parser.add_argument(
        "--seed", help="random seed (overrides the configuration)", type=int
    )

    # worker count
    parser.add_argument(
        "--threads",
        help="worker processes for sweeps (overrides the configuration)",
        type=int,
    )

    # verbosity
    parser.add_argument(
        "-v",
        "--verbose",
        help="increase log verbosity",
        action="count",
        default=0,
    )

    return parser.parse_args(args)


def run():
    """Console script entry point"""
    sys.exit(main(parse_args(sys.argv[1:])))


if __name__ == "__main__":  # pragma: no cover
    run()
