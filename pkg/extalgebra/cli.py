import argparse
import logging
import sys
from typing import List, NoReturn, Optional, Tuple

from extalgebra.config.local import read_local_config
from extalgebra.errors import UsageError
from extalgebra.main import main
from extalgebra.types import LocalConfig

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError on a bad command line instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def cli():
    """Run main procedure as a command-line tool."""
    sys.exit(run_command(sys.argv[1:]))


def run_command(argv: List[str]) -> int:
    """Runs one command line and returns its exit status.

    0 when the command completed, 1 for usage, file and parse errors, 2
    when an equation check found a counterexample.
    """
    try:
        config, args = read_command_line_arguments(argv)
    except UsageError as error:
        print(error, file=sys.stderr)
        return 1
    except (OSError, KeyError, ValueError) as error:
        print(f"extalgebra: bad config: {error}", file=sys.stderr)
        return 1
    return main(config, args)


def read_command_line_arguments(
    argv: Optional[List[str]] = None,
) -> Tuple[LocalConfig, argparse.Namespace]:
    """Extracts from the command line the config file and the command."""
    parser = ArgumentParser(prog="extalgebra")
    parser.add_argument(
        "--config", type=str, help="Path to a config file (TOML)"
    )
    parser.add_argument(
        "--porcelain",
        action="store_true",
        help="Print reports as key=value lines",
    )
    parser.add_argument(
        "--verbose", action="store_true", help="Log at debug level"
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="""Load algebras as written, without adding the identity,
        translations and compositions missing from their operations.""",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="Check an algebra file")
    validate.add_argument("file", type=str)

    minimize = commands.add_parser(
        "minimize", help="Compute the syntactic algebra of a recognizer"
    )
    minimize.add_argument("file", type=str)
    _add_output(minimize)

    for name, what in (("from-vpa", "a VPA"), ("from-vca", "a VCA")):
        translate = commands.add_parser(
            name, help=f"Build a recognizer from {what}"
        )
        translate.add_argument("file", type=str)
        translate.add_argument(
            "--minimize",
            action="store_true",
            help="Minimize while translating",
        )
        _add_output(translate)

    from_monoid = commands.add_parser(
        "from-monoid", help="Build a recognizer from a finite monoid"
    )
    from_monoid.add_argument("file", type=str)
    _add_output(from_monoid)

    to_vpa = commands.add_parser("to-vpa", help="Build a VPA from an algebra")
    to_vpa.add_argument("file", type=str)
    _add_output(to_vpa)

    accepts = commands.add_parser(
        "accepts",
        help="Decide a word with an .alg, .vpa or .vca file",
    )
    accepts.add_argument("file", type=str)
    accepts.add_argument("word", type=str, help="Letters, or - for empty")

    enumerate_words = commands.add_parser(
        "enumerate", help="List the well-matched words up to a length"
    )
    enumerate_words.add_argument("file", type=str, help="Alphabet file")
    enumerate_words.add_argument("--max-len", type=int, required=True)

    product = commands.add_parser(
        "product", help="Recognize the intersection of two languages"
    )
    product.add_argument("files", type=str, nargs=2)
    product.add_argument(
        "--union", action="store_true", help="Recognize the union instead"
    )
    _add_output(product)

    compare = commands.add_parser(
        "compare",
        help="Test whether the first algebra is isomorphic to, or divides,"
        " the second",
    )
    compare.add_argument("files", type=str, nargs=2)

    check = commands.add_parser(
        "check", help="Search for a counterexample to a class equation"
    )
    check.add_argument("file", type=str)
    check.add_argument(
        "--class",
        dest="language_class",
        choices=["vcl", "vcl0"],
        required=True,
    )
    check.add_argument("--max-context", type=int, required=True)
    _add_morphisms(check)

    separate = commands.add_parser(
        "separate", help="Search for a morphism telling two words apart"
    )
    separate.add_argument("file", type=str)
    separate.add_argument("words", type=str, nargs=2)

    equate = commands.add_parser(
        "equate", help="Compare two terms under every assignment"
    )
    equate.add_argument("file", type=str)
    equate.add_argument("left", type=str)
    equate.add_argument("right", type=str)
    _add_morphisms(equate)

    exponent = commands.add_parser(
        "exponent", help="Find the stabilizing exponent of words for a VCA"
    )
    exponent.add_argument("file", type=str)
    exponent.add_argument("words", type=str, nargs="+")

    args = parser.parse_args(argv)
    if getattr(args, "max_len", 0) < 0:
        parser.error("--max-len must be non-negative")
    if getattr(args, "max_context", 0) < 0:
        parser.error("--max-context must be non-negative")

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    config = read_local_config(args.config)
    return config, args


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-o", "--output", type=str, help="Write here instead of stdout"
    )


def _add_morphisms(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--morphisms",
        choices=["canonical", "all"],
        default="canonical",
        help="""Check only the recognizer's own morphism, or every morphism
        into its algebra.""",
    )
