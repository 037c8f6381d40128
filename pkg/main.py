# main.py
import argparse
import logging
import sys
from typing import List, Optional, TextIO

from config import LOG_LEVEL, VERSION, RunConfig
from errors import QctlError
from handlers import common_router, denotation_router
from handlers.router import EXIT_ERROR, CommandContext, Dispatcher
from services.messages import MessageCatalog

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(module)s.%(funcName)s:%(lineno)d - %(message)s'

logger = logging.getLogger(__name__)


def setup_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def common_options() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--fuel", type=int, default=None, help="iterations per while node, the exiting one included")
    parser.add_argument("--prune-eps", type=float, default=None, help="drop non-default values below this mass")
    parser.add_argument("--tol", type=float, default=None, help="fixpoint tolerance")
    parser.add_argument("--max-iter", type=int, default=None, help="fixpoint iteration cap")
    parser.add_argument("--seed", type=int, default=None, help="random seed")
    return parser


def build_parser(catalog: MessageCatalog) -> argparse.ArgumentParser:
    dp = Dispatcher(catalog)
    dp.include_router(common_router)
    dp.include_router(denotation_router)
    parser = dp.build_parser("qctl", common_options())
    parser.add_argument("--version", action="version", version=f"qctl {VERSION}")
    return parser


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    catalog = MessageCatalog()
    parser = build_parser(catalog)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else 0

    setup_logging(args.verbose)
    ctx = CommandContext(catalog, RunConfig.from_env(), out or sys.stdout, err or sys.stderr)
    try:
        ctx.config = ctx.config.with_overrides(fuel=args.fuel, tol=args.tol, max_iter=args.max_iter,
                                               seed=args.seed, prune_eps=args.prune_eps, json=args.json or None)
        return args.handler(args, ctx)
    except QctlError as e:
        logger.info(f"{args.command} failed: {e}")
        ctx.complain(e.message_key, **e.message_args())
    except OSError as e:
        ctx.complain("error_io", path=e.filename or "?", detail=e.strerror or str(e))
    except ValueError as e:
        ctx.complain("error_input", detail=str(e))
    except Exception as e:
        logger.critical(f"Unexpected error in '{args.command}': {e}", exc_info=True)
        ctx.complain("error_unexpected", detail=str(e))
    return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
