"""
multinorm - exact computations for multinorm-one tori.
Main command-line entry point.

Author: Mounia Tonazzini
Date: October 2026
"""

import logging
import sys

from multinorm.cli.interface import MultinormCLI


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the application. Returns the exit code."""
    arguments = sys.argv[1:] if argv is None else argv
    verbose = "-v" in arguments or "--verbose" in arguments
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s | %(name)s | %(message)s",
        stream=sys.stderr,
    )
    cli = MultinormCLI()
    return cli.start(arguments)


if __name__ == "__main__":
    sys.exit(main())
