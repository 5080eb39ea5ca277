"""Command-line entry point for session scripts."""
import argparse
import logging
import sys
from typing import List, Optional

from rich.console import Console

from src import config
from src.checks import run_self_check
from src.errors import QBorelError, SessionParseError
from src.render import CommandResult, JSON, TEXT, render
from src.runner import execute
from src.session import parse_session
from src.utils_helpers import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_PARSE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qborel",
        description="Run Q-Borel ideal session scripts",
    )
    parser.add_argument("session", nargs="?",
                        help="Session file, or '-' for standard input")
    parser.add_argument("--format", choices=[TEXT, JSON],
                        default=config.OUTPUT_FORMAT, help="Output format")
    parser.add_argument("--degree-bound", type=int,
                        default=config.DEGREE_BOUND,
                        help="Truncation and verification degree bound")
    parser.add_argument("--limit-nodes", type=int,
                        default=config.LIMIT_NODES,
                        help="Closure search node limit")
    parser.add_argument("--seed", type=int, default=config.SEED,
                        help="Seed for the randomized property checks")
    parser.add_argument("--self-check", action="store_true",
                        help="Run the seeded property checks")
    parser.add_argument("--rounds", type=int, default=10,
                        help="Rounds per property in --self-check")
    parser.add_argument("--log-level", default=config.LOG_LEVEL,
                        help="Logging level")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _self_check(args: argparse.Namespace) -> int:
    outcomes = run_self_check(args.seed, args.rounds)
    results = [
        CommandResult(index=k, command="self-check", args=[o.name],
                      text="pass" if o.passed else f"FAIL: {o.detail}",
                      data={"passed": o.passed, "detail": o.detail})
        for k, o in enumerate(outcomes, start=1)
    ]
    print(render(results, args.format))
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_MATH


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the session and print the rendered results.

    Returns:
        0 on success, 1 on a mathematical failure, 2 on a parse error
    """
    args = build_parser().parse_args(argv)
    setup_logging(config.LOG_FILE, args.log_level, config.LOG_FORMAT)
    config.LIMIT_NODES = args.limit_nodes
    errors = Console(stderr=True, highlight=False)

    if args.self_check:
        return _self_check(args)
    if not args.session:
        errors.print("error: no session file given", markup=False)
        return EXIT_PARSE

    try:
        session = parse_session(_read(args.session))
        results = execute(session, args.degree_bound)
    except SessionParseError as e:
        errors.print(f"parse error: {e}", markup=False)
        return EXIT_PARSE
    except QBorelError as e:
        partial = getattr(e, "partial_results", [])
        if partial:
            print(render(partial, args.format))
        index = getattr(e, "command_index", None)
        where = f"command {index}: " if index else ""
        errors.print(f"error: {where}{e}", markup=False)
        return EXIT_MATH
    except OSError as e:
        errors.print(f"error: {e}", markup=False)
        return EXIT_PARSE

    output = render(results, args.format)
    if output:
        print(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
