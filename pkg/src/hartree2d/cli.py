"""Command line entry point: ``hartree2d solve --config run.cfg``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, parse_config
from .sweep import run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartree2d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="run a kappa sweep and write result files")
    solve.add_argument("--config", help="key = value configuration file")
    solve.add_argument("--kappa", help="comma separated, strictly increasing kappa list")
    solve.add_argument("--out", help="output directory")
    solve.add_argument("--threads", type=int)
    solve.add_argument("--conv", choices=("direct", "fast"))
    solve.add_argument("--init", help="uniform, gaussian or from-file:<path>")
    solve.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any configuration key")
    solve.add_argument("-v", "--verbose", action="count", default=0)
    solve.add_argument("--no-figures", action="store_true", help="skip matplotlib figures")
    return parser


def _overrides(args) -> dict:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value
    for key, value in (("kappa", args.kappa), ("output_dir", args.out),
                       ("threads", args.threads), ("convolution", args.conv),
                       ("init", args.init)):
        if value is not None:
            overrides[key] = value
    if args.no_figures:
        overrides["figures"] = "false"
    return overrides


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = parse_config(args.config, _overrides(args))
    except ConfigError as exc:
        print(f"hartree2d: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        outcome = run_sweep(config)
    except (FileNotFoundError, ValueError) as exc:
        # bad from-file start state
        print(f"hartree2d: input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"hartree2d: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not outcome.converged:
        print(f"hartree2d: not converged: {outcome.failure}", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
