#!/usr/bin/env python3
"""
TPSA Simulator CLI
==================
Command-line front end:

    tpsa-sim run <scenario.json> [--output-dir DIR]
    tpsa-sim compare <reference.csv> <produced.csv> --tol X
    tpsa-sim presets list
    tpsa-sim presets run <name> [--output-dir DIR]

Exit codes: 0 ok, 1 configuration or file error, 2 numerical/domain error,
3 comparison outside tolerance. Errors are printed as a single line
`error: <ExceptionClass>: <message>` on stderr.
"""

import argparse
import logging
import sys
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")

from config.scenarios import get_scenario_config, print_all_scenarios  # noqa: E402
from core.analysis import compare_distributions  # noqa: E402
from core.errors import ComparisonError, ConfigurationError, DomainError  # noqa: E402
from core.simulator import run_scenario  # noqa: E402
from data_io import DataIOError, read_distribution_csv  # noqa: E402

logger = logging.getLogger("tpsa_cli")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DOMAIN = 2
EXIT_COMPARE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpsa-sim",
        description="Two-photon spectral amplitude simulator for pulsed SPDC "
                    "and fibre dispersion measurements",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="do not print the report")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("config", help="scenario JSON file")
    run.add_argument("--output-dir", default=None, help="override the output directory")

    compare = sub.add_parser("compare", help="compare two delay-distribution CSV files")
    compare.add_argument("reference")
    compare.add_argument("produced")
    compare.add_argument("--tol", type=float, required=True,
                         help="maximum allowed deviation of peak-normalized curves")

    presets = sub.add_parser("presets", help="bundled scenario presets")
    preset_sub = presets.add_subparsers(dest="preset_command", required=True)
    preset_sub.add_parser("list", help="list presets")
    preset_run = preset_sub.add_parser("run", help="run a preset")
    preset_run.add_argument("name")
    preset_run.add_argument("--output-dir", default=None, help="override the output directory")
    return parser


def _run(source, output_dir: Optional[str], quiet: bool) -> int:
    simulator = run_scenario(source, output_dir=output_dir)
    if not quiet:
        simulator.print_report()
        print(f"✅ {len(simulator.artifacts)} files written")
        for path in simulator.artifacts:
            print(f"   - {path}")
    return EXIT_OK


def cmd_run(args) -> int:
    return _run(args.config, args.output_dir, args.quiet)


def cmd_compare(args) -> int:
    reference = read_distribution_csv(args.reference)
    produced = read_distribution_csv(args.produced)
    result = compare_distributions(reference, produced, args.tol)
    print(f"max_deviation: {result.max_deviation:.6e}")
    print(f"l2_deviation: {result.l2_deviation:.6e}")
    print(f"tolerance: {result.tolerance:.6e}")
    print(f"result: {'PASS' if result.passed else 'FAIL'}")
    return EXIT_OK if result.passed else EXIT_COMPARE


def cmd_presets(args) -> int:
    if args.preset_command == "list":
        print_all_scenarios()
        return EXIT_OK
    try:
        document = get_scenario_config(args.name)
    except KeyError as e:
        raise ConfigurationError(e.args[0])
    return _run(document, args.output_dir, args.quiet)


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "presets": cmd_presets,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.debug("command: %s", args.command)
    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, DataIOError) as e:
        code = EXIT_CONFIG
        error = e
    except (OSError, UnicodeDecodeError) as e:
        code = EXIT_CONFIG
        error = e
    except (DomainError, ComparisonError) as e:
        code = EXIT_DOMAIN
        error = e
    message = " ".join(str(error).split())
    print(f"error: {type(error).__name__}: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
