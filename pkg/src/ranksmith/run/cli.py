"""The ``ranksmith`` command line."""

from __future__ import annotations

import argparse
import sys
from typing import TYPE_CHECKING

from dependency_injector import errors as di_errors
from fsspec.implementations.local import LocalFileSystem

from ranksmith.errors import (
    DataValidationError,
    DomainError,
    FeatureFileError,
    NonFiniteLossError,
    UsageError,
)
from ranksmith.logging import logger
from ranksmith.run import cmd_ann_build, cmd_bin_sim, cmd_eval, cmd_gen, cmd_predict, cmd_train
from ranksmith.setup.dependency_injection import init_dependencies_from_args

if TYPE_CHECKING:
    from collections.abc import Sequence

    from fsspec import AbstractFileSystem

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

COMMAND_MODULES = [cmd_gen, cmd_train, cmd_eval, cmd_predict, cmd_ann_build, cmd_bin_sim]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Run seed; stage seeds derive from it.")
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (default: RANKSMITH_THREADS, then the CPU count).",
    )
    common.add_argument("--config", default=None, help="A key=value file of default flags.")
    common.add_argument("--years", default="1930:1999", help="Year span as START:END.")
    return common


def _add_split_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--val-fraction", type=float, default=0.0)
    parser.add_argument("--test-fraction", type=float, default=0.0)
    parser.add_argument("--test-per-year", type=int, default=2)
    parser.add_argument("--balanced", action=argparse.BooleanOptionalAction, default=True)


def _add_relevance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--relevance",
        choices=["clipped-linear", "inverse-linear", "exp-inverse"],
        default="clipped-linear",
    )
    parser.add_argument("--gamma", type=float, default=10.0)
    parser.add_argument("--positive-gap", type=int, default=0)


def _add_ann_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trees", type=int, default=16)
    parser.add_argument("--leaf-capacity", type=int, default=32)
    parser.add_argument("--budget", type=int, default=0, help="Search budget; 0 picks one from k.")


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="ranksmith",
        description="Learn embeddings that rank items by date, and date them by k-NN.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    gen = subparsers.add_parser("gen", parents=[common], help="Generate synthetic data.")
    gen.add_argument("--n", type=int, default=2000)
    gen.add_argument("--d-in", type=int, default=32)
    gen.add_argument("--noise", type=float, default=0.1)
    gen.add_argument("--distractor-dims", type=int, default=8)
    gen.add_argument("--out", required=True)
    gen.add_argument("--format", choices=["rsft", "csv"], default="rsft")
    gen.set_defaults(handler=cmd_gen.run)

    train = subparsers.add_parser("train", parents=[common], help="Train an encoder.")
    train.add_argument("--data", required=True)
    train.add_argument("--out", required=True)
    train.add_argument("--log", default="", help="Log CSV (default: <out>.log.csv).")
    train.add_argument("--encoder", choices=["affine", "free-table"], default="affine")
    train.add_argument("--d-out", type=int, default=16)
    train.add_argument("--batch-size", type=int, default=64)
    train.add_argument("--iterations", type=int, default=2000)
    train.add_argument("--eval-every", type=int, default=100)
    train.add_argument("--optimizer", choices=["adam", "sgd"], default="adam")
    train.add_argument("--lr", type=float, default=1e-3)
    train.add_argument("--momentum", type=float, default=0.9)
    train.add_argument("--loss", choices=["smooth-ndcg", "smooth-ap"], default="smooth-ndcg")
    train.add_argument("--tau", type=float, default=0.01)
    train.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=False)
    _add_relevance_flags(train)
    _add_split_flags(train)
    train.set_defaults(handler=cmd_train.run)

    evaluate = subparsers.add_parser("eval", parents=[common], help="Evaluate an encoder.")
    evaluate.add_argument("--data", required=True)
    evaluate.add_argument("--model", required=True)
    evaluate.add_argument("--k", type=int, default=10)
    evaluate.add_argument("--support", choices=["full", "sample"], default="full")
    evaluate.add_argument("--support-size", type=int, default=256)
    evaluate.add_argument("--ann", action=argparse.BooleanOptionalAction, default=False)
    evaluate.add_argument("--curve", default="", help="Neighbour counts such as k=1,2,5,10.")
    evaluate.add_argument("--curve-out", default="")
    evaluate.add_argument("--bin-sim-out", default="")
    evaluate.add_argument("--bin-width", type=int, default=5)
    evaluate.add_argument("--out", default="", help="Metrics JSON.")
    _add_relevance_flags(evaluate)
    _add_split_flags(evaluate)
    _add_ann_flags(evaluate)
    evaluate.set_defaults(handler=cmd_eval.run)

    predict = subparsers.add_parser("predict", parents=[common], help="Predict years.")
    predict.add_argument("--model", required=True)
    predict.add_argument("--queries", required=True)
    predict.add_argument("--support", default="")
    predict.add_argument(
        "--support-size",
        type=int,
        default=0,
        help="Draw a fresh random support of this size per query; 0 uses all of it.",
    )
    predict.add_argument("--ann", default="", help="An index built by ann-build.")
    predict.add_argument("--k", type=int, default=10)
    predict.add_argument("--weighted", action=argparse.BooleanOptionalAction, default=False)
    predict.add_argument("--out", required=True)
    predict.set_defaults(handler=cmd_predict.run)

    ann_build = subparsers.add_parser("ann-build", parents=[common], help="Build an ANN index.")
    ann_build.add_argument("--model", required=True)
    ann_build.add_argument("--support", required=True)
    ann_build.add_argument("--out", required=True)
    _add_ann_flags(ann_build)
    ann_build.set_defaults(handler=cmd_ann_build.run)

    bin_sim = subparsers.add_parser("bin-sim", parents=[common], help="Year bin similarity.")
    bin_sim.add_argument("--model", required=True)
    bin_sim.add_argument("--data", required=True)
    bin_sim.add_argument("--which", choices=["test", "train"], default="test")
    bin_sim.add_argument("--bin-width", type=int, default=5)
    bin_sim.add_argument("--out", required=True)
    _add_split_flags(bin_sim)
    bin_sim.set_defaults(handler=cmd_bin_sim.run)

    return parser


def config_file_tokens(path: str, filesystem: AbstractFileSystem) -> list[str]:
    """
    Turn a flat ``key=value`` file into command line tokens.

    Blank lines and ``#`` comments are skipped. ``true`` and ``false`` switch boolean flags
    on and off; keys may use dashes or underscores.

    :raises UsageError: On a line without ``=``.
    """
    with filesystem.open(path, "r") as file:
        text = file.read()
    tokens: list[str] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, separator, value = line.partition("=")
        if not separator or not key.strip():
            msg = f"{path} line {number}: expected key=value, got '{raw}'."
            raise UsageError(msg)
        flag = key.strip().replace("_", "-")
        value = value.strip()
        match value.lower():
            case "true":
                tokens.append(f"--{flag}")
            case "false":
                tokens.append(f"--no-{flag}")
            case _:
                tokens.extend([f"--{flag}", value])
    return tokens


def with_config_defaults(argv: Sequence[str]) -> list[str]:
    """
    Insert the tokens of a ``--config`` file right after the subcommand.

    Flags given on the command line come later and therefore win.
    """
    tokens = list(argv)
    finder = argparse.ArgumentParser(add_help=False)
    finder.add_argument("--config", default=None)
    known, _ = finder.parse_known_args(tokens[1:])
    if known.config is None or not tokens:
        return tokens
    return [tokens[0], *config_file_tokens(known.config, LocalFileSystem()), *tokens[1:]]


def _run(args: argparse.Namespace) -> None:
    container = init_dependencies_from_args(args)
    container.wire(modules=COMMAND_MODULES)
    try:
        args.handler()
    finally:
        container.unwire()


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one subcommand and return its exit code.

    0 on success, 2 for usage and data validation errors, 3 for numeric failures and 4 for
    unreadable or malformed files.
    """
    raw = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(with_config_defaults(raw))
        _run(args)
    except (UsageError, DataValidationError, di_errors.Error) as error:
        logger.error(f"Usage error: {error}")
        return EXIT_USAGE
    except (DomainError, NonFiniteLossError) as error:
        logger.error(f"Numeric failure: {error}")
        return EXIT_NUMERIC
    except (FeatureFileError, OSError) as error:
        logger.error(f"File error: {error}")
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
