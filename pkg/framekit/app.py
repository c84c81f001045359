"""
framekit command-line entry point.
"""
import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from config.settings import get_settings
from framekit import cli
from framekit.errors import FramekitError, InvalidInput, NotLowerSemiFrame, ProjectsOntoSpan

logger = logging.getLogger("framekit")


def configure_logging(level: Optional[str] = None) -> None:
    """Log to stderr so stdout carries only the JSON report."""
    settings = get_settings()
    level = (level or settings.app.log_level).upper()
    if settings.is_debug:
        level = "DEBUG"
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framekit", description="Frames and semi-frames in finite truncations")
    parser.add_argument("--log-level", dest="log_level", default=None)
    parser.add_argument("--version", action="version", version=f"framekit {get_settings().app.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)
    cli.register_commands(sub)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; 0 on success, 2 on invalid input, 3 on numerical failure."""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(exc.code or 0)
    configure_logging(args.log_level)
    del args.log_level

    try:
        code = cli.handle(args)
    except (InvalidInput, NotLowerSemiFrame, ProjectsOntoSpan) as exc:
        logger.error("invalid input: %s", exc)
        return cli.EXIT_INVALID
    except ValidationError as exc:
        logger.error("invalid configuration: %s", exc)
        return cli.EXIT_INVALID
    except FramekitError as exc:
        logger.error("numerical failure: %s", exc)
        return cli.EXIT_NUMERICAL
    return cli.EXIT_INVALID if code is None else code


if __name__ == "__main__":
    sys.exit(main())
