"""Argument parsing for the simulate.py entry point."""

import argparse
import logging

from cli import __version__
from cli.commands import cmd_check, cmd_run, cmd_sweep
from cli.verify import LEVELS, cmd_verify


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulate.py",
        description="Pseudo-spectral damped non-homogeneous Euler on the periodic square.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="integrate one configuration")
    run.add_argument("--config", required=True, help="YAML or JSON run configuration")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--no-progress", action="store_true", help="hide the progress bar")

    check = subparsers.add_parser("check", help="evaluate the smallness conditions for the initial data")
    check.add_argument("--config", required=True)

    verify = subparsers.add_parser("verify", help="run the numerical self-checks")
    verify.add_argument("--level", choices=LEVELS, default="quick")

    sweep = subparsers.add_parser("sweep", help="run one simulation per value of a config key")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--param", required=True, help="dotted key, e.g. physics.alpha")
    sweep.add_argument("--values", required=True, help="comma separated values")
    sweep.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.command == "run":
        return cmd_run(args.config, args.out, show_progress=not args.no_progress)
    elif args.command == "check":
        return cmd_check(args.config)
    elif args.command == "verify":
        return cmd_verify(args.level)
    elif args.command == "sweep":
        return cmd_sweep(args.config, args.param, args.values.split(","), args.out)
    raise ValueError(f"unknown command {args.command}")
