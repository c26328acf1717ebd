"""
Command-line entry point
"""
import argparse
import logging
import sys
from typing import List, Optional

from lzhm import __version__
from lzhm.core.config import settings
from lzhm.core.errors import LzhmError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    from lzhm.cli import codec, complexity, experiments, models

    parser = argparse.ArgumentParser(
        prog="lzhm",
        description="LZ and Iterated Huffman compression laboratory for hidden Markov sources",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.log_level, help="logging level (default: %(default)s)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for group in (models, codec, experiments, complexity):
        group.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper())
    try:
        return args.func(args)
    except (LzhmError, OSError) as e:
        logger.error(f"[{args.command.upper()}] {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
