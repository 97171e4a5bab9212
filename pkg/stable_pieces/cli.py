import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from stable_pieces.commands import COMMANDS, default_dispatcher
from stable_pieces.config import MODE_ALIASES, RunConfig
from stable_pieces.report import ReportFormat
from stable_pieces.telemetry import setup_logging, setup_tracing
from stable_pieces.weyl.base import parse_delta

STDOUT = "-"


def _int_list(text: str) -> list[int]:
    values = parse_delta(text)
    if values is None:
        raise argparse.ArgumentTypeError("expected a comma separated list of integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="type_spec", default="A2", help="Cartan type, e.g. A2, B3, A1xA1")
    common.add_argument("--delta", type=parse_delta, default=None, help="diagram automorphism as images, e.g. 2,1")
    common.add_argument("--J", dest="J", default=None, help="node subset, e.g. 1,3; '' is the empty set")
    common.add_argument("--y", dest="y", default=None, help="reduced word, e.g. 's1 s2' or e")
    common.add_argument("--format", choices=[f.value for f in ReportFormat], default=None)
    common.add_argument("--json", nargs="?", const=STDOUT, default=None, metavar="PATH", help="JSON report")
    common.add_argument("--csv", nargs="?", const=STDOUT, default=None, metavar="PATH", help="CSV report")
    common.add_argument("--out", type=Path, default=None, help="write the report to this file")
    common.add_argument("--d", type=int, default=2, help="dimension of the GL model")
    common.add_argument("--q", type=int, default=2, help="prime field size of the GL model")
    common.add_argument(
        "--mode",
        choices=["two_step_1dim", "hyperplane_dual", "full", *MODE_ALIASES],
        default="two_step_1dim",
    )
    common.add_argument("--blocks", type=_int_list, default=None, help="block sizes for --mode full")
    common.add_argument("--sigma", type=_int_list, default=None, help="block permutation for --mode full")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="stable-pieces", description="G-stable pieces and their point counts.")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for command in COMMANDS:
        subparsers.add_parser(command.name, parents=[common], help=command.description)
    return parser


def _output(args: argparse.Namespace) -> tuple[ReportFormat, Path | None]:
    fmt = ReportFormat(args.format) if args.format else ReportFormat.TEXT
    path = args.out
    for flag, flag_format in ((args.json, ReportFormat.JSON), (args.csv, ReportFormat.CSV)):
        if flag is not None:
            fmt = flag_format
            if flag != STDOUT:
                path = Path(flag)
    return fmt, path


def make_config(args: argparse.Namespace) -> RunConfig:
    fmt, path = _output(args)
    return RunConfig(
        subcommand=args.subcommand,
        type_spec=args.type_spec,
        delta=args.delta,
        J=args.J,
        y=args.y,
        output_format=fmt,
        output_path=path,
        d=args.d,
        q=args.q,
        mode=args.mode,
        blocks=args.blocks,
        sigma=args.sigma,
        verbose=args.verbose,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        cfg = make_config(args)
    except (ValidationError, ValueError) as e:
        logging.error(f"Invalid arguments: {e}")
        return 2

    provider = setup_tracing(cfg.subcommand)
    try:
        outcome = default_dispatcher().dispatch(cfg)
        if outcome.report is not None:
            text = outcome.report.write(cfg.output_format, cfg.output_path)
            if cfg.output_path is None:
                sys.stdout.write(text)
        if outcome.message:
            logging.error(outcome.message)
        return outcome.exit_code
    finally:
        if provider is not None:
            provider.shutdown()


if __name__ == "__main__":
    sys.exit(main())
