#!/usr/bin/env python3
# ============================================================================
# IMPORTS
# ============================================================================
import argparse
import logging
import sys
from typing import List, Optional

import config
from commands import COMMAND_GROUPS
from commands.common import shared_options
from exceptions import (
    AlphabetMismatch, CAError, LengthBelowThreshold, MalformedBlock, RuleSpecError, WordTooShort,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_MALFORMED = 2

# Errors caused by the input rather than by the analysis
MALFORMED_INPUT = (RuleSpecError, MalformedBlock, LengthBelowThreshold, WordTooShort, AlphabetMismatch, ValueError)


# ============================================================================
# PARSER - subcommands are registered from the commands package
# ============================================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='idemca',
        description='Cellular automata generated by idempotents: deciders, constructions and verdicts',
    )
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    parents = [shared_options()]
    for group in COMMAND_GROUPS:
        group.register(subparsers, parents)
    return parser


# ============================================================================
# ENTRY POINT
# ============================================================================
def run(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code; output on stdout, diagnostics on stderr"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_MALFORMED if e.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_MALFORMED

    previous = config.settings
    try:
        config.configure(window_budget=args.budget, seed=args.seed,
                         log_level=args.log_level.upper() if args.log_level else None)
        config.configure_logging()
        args.handler(args)
        return EXIT_OK
    except MALFORMED_INPUT as e:
        logger.debug(f"{args.command}: malformed input", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except CAError as e:
        logger.debug(f"{args.command}: analysis stopped", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    finally:
        config.settings = previous


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
