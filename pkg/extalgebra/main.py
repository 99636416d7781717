import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Optional

from extalgebra.algebra.compare import divides, find_isomorphism
from extalgebra.algebra.constructions import product_spec, syntactic_quotient
from extalgebra.algebra.morphism import RecognizerSpec, accepts
from extalgebra.automata import (
    VPA,
    vca_accepts,
    vca_stabilizing_exponent,
    vca_to_vpa,
    vpa_accepts,
)
from extalgebra.core import enumerate_well_matched, parse_word
from extalgebra.errors import ExtAlgebraError, ValidationError
from extalgebra.formats.automaton import (
    dump_vpa,
    load_alphabet,
    load_vca,
    load_vpa,
)
from extalgebra.formats.monoid import load_monoid
from extalgebra.formats.recognizer import dump_recognizer, read_recognizer
from extalgebra.profinite.equations import (
    Counterexample,
    check_term_equation,
    check_vcl_equation,
    check_zero_vcl_equation,
)
from extalgebra.profinite.separation import separates
from extalgebra.profinite.syntax import parse_term
from extalgebra.reports import Reporter
from extalgebra.translate import (
    ext_algebra_to_vpa,
    monoid_to_ext_algebra,
    vpa_to_ext_algebra,
    vpa_to_syntactic_spec,
)
from extalgebra.types import LocalConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2

Handler = Callable[["Command"], int]


class Command:
    """One parsed command line with the config and reporter it runs with."""

    def __init__(self, config: LocalConfig, args: argparse.Namespace):
        self.config = config
        self.args = args
        self.reporter = Reporter(
            config["path"]["reports"], porcelain=args.porcelain
        )

    @property
    def closure_cap(self) -> int:
        return self.config["caps"]["closure_size"]

    def load(self, path: str) -> RecognizerSpec:
        loaded = read_recognizer(
            path, complete=not self.args.strict, cap=self.closure_cap
        )
        return loaded.spec

    def emit(self, text: str) -> None:
        """Writes a document to --output, or to stdout without one."""
        output: Optional[str] = getattr(self.args, "output", None)
        if output is None:
            sys.stdout.write(text)
            return
        with open(output, "w", encoding="utf-8") as output_file:
            output_file.write(text)
        print(self.reporter.wrote(output))


def validate(command: Command) -> int:
    try:
        loaded = read_recognizer(
            command.args.file,
            complete=not command.args.strict,
            cap=command.closure_cap,
        )
    except ValidationError as error:
        print(command.reporter.invalid(error.report))
        return EXIT_ERROR
    print(command.reporter.validation(loaded.spec, loaded.closure))
    return EXIT_OK


def minimize(command: Command) -> int:
    minimal, _ = syntactic_quotient(command.load(command.args.file))
    command.emit(dump_recognizer(minimal))
    return EXIT_OK


def _translate_vpa(command: Command, M: VPA) -> int:
    cap = command.closure_cap
    if command.args.minimize:
        spec = vpa_to_syntactic_spec(M, cap)
    else:
        spec = vpa_to_ext_algebra(M, cap)
    command.emit(dump_recognizer(spec))
    return EXIT_OK


def from_vpa(command: Command) -> int:
    return _translate_vpa(command, load_vpa(command.args.file))


def from_vca(command: Command) -> int:
    return _translate_vpa(command, vca_to_vpa(load_vca(command.args.file)))


def from_monoid(command: Command) -> int:
    document = load_monoid(command.args.file)
    spec = monoid_to_ext_algebra(
        document.monoid,
        document.alphabet,
        document.accepting,
        command.closure_cap,
    )
    command.emit(dump_recognizer(spec))
    return EXIT_OK


def to_vpa(command: Command) -> int:
    M = ext_algebra_to_vpa(command.load(command.args.file))
    command.emit(dump_vpa(M))
    return EXIT_OK


def decide(command: Command) -> int:
    path = command.args.file
    suffix = Path(path).suffix
    word = command.args.word
    if suffix == ".vpa":
        vpa = load_vpa(path)
        accepted = vpa_accepts(vpa, parse_word(vpa.alphabet, word))
    elif suffix == ".vca":
        vca = load_vca(path)
        accepted = vca_accepts(vca, parse_word(vca.alphabet, word))
    else:
        spec = command.load(path)
        accepted = accepts(spec, parse_word(spec.alphabet, word))
    print(command.reporter.verdict(accepted))
    return EXIT_OK


def enumerate_words(command: Command) -> int:
    alphabet = load_alphabet(command.args.file)
    words = enumerate_well_matched(alphabet, command.args.max_len)
    print(command.reporter.words(words))
    return EXIT_OK


def product(command: Command) -> int:
    first, second = (command.load(path) for path in command.args.files)
    command.emit(
        dump_recognizer(product_spec(first, second, command.args.union))
    )
    return EXIT_OK


def compare(command: Command) -> int:
    first, second = (command.load(path) for path in command.args.files)
    caps = command.config["caps"]
    mapping = find_isomorphism(
        first.algebra, second.algebra, caps["search_size"]
    )
    if mapping is not None:
        print(
            command.reporter.isomorphism(
                first.algebra, second.algebra, mapping
            )
        )
        return EXIT_OK
    division = divides(
        first.algebra,
        second.algebra,
        max_generators=caps["division_generators"],
        max_nodes=caps["division_nodes"],
        cap=caps["search_size"],
    )
    print(command.reporter.division(division))
    return EXIT_OK


def check(command: Command) -> int:
    spec = command.load(command.args.file)
    engine = (
        check_vcl_equation
        if command.args.language_class == "vcl"
        else check_zero_vcl_equation
    )
    result = engine(
        spec,
        command.args.max_context,
        morphism_mode=command.args.morphisms,
        workers=command.config["engine"]["workers"],
        batch_size=command.config["engine"]["batch_size"],
        cap=command.config["caps"]["morphisms"],
    )
    print(command.reporter.equation(result))
    if isinstance(result, Counterexample):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def separate(command: Command) -> int:
    spec = command.load(command.args.file)
    x, y = (parse_word(spec.alphabet, word) for word in command.args.words)
    result = separates(
        spec.algebra,
        spec.alphabet,
        x,
        y,
        cap=command.config["caps"]["morphisms"],
    )
    print(command.reporter.separation(result, x, y))
    return EXIT_OK


def equate(command: Command) -> int:
    spec = command.load(command.args.file)
    left = parse_term(spec.alphabet, command.args.left)
    right = parse_term(spec.alphabet, command.args.right)
    result = check_term_equation(
        spec,
        left,
        right,
        morphism_mode=command.args.morphisms,
        cap=command.config["caps"]["morphisms"],
    )
    print(command.reporter.equation(result))
    if isinstance(result, Counterexample):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def exponent(command: Command) -> int:
    vca = load_vca(command.args.file)
    words = [parse_word(vca.alphabet, word) for word in command.args.words]
    s = vca_stabilizing_exponent(
        vca, words, command.config["caps"]["exponent"]
    )
    print(command.reporter.render("exponent", {"exponent": s}))
    return EXIT_OK


handlers: Dict[str, Handler] = {
    "validate": validate,
    "minimize": minimize,
    "from-vpa": from_vpa,
    "from-vca": from_vca,
    "from-monoid": from_monoid,
    "to-vpa": to_vpa,
    "accepts": decide,
    "enumerate": enumerate_words,
    "product": product,
    "compare": compare,
    "check": check,
    "separate": separate,
    "equate": equate,
    "exponent": exponent,
}


def main(config: LocalConfig, args: argparse.Namespace) -> int:
    """Main executor, supposed to be called via command line."""
    logger.info("Running command %s", {"command": args.command})
    try:
        return handlers[args.command](Command(config, args))
    except (ExtAlgebraError, OSError, ValueError) as error:
        logger.debug("Command failed", exc_info=True)
        print(f"extalgebra {args.command}: {error}", file=sys.stderr)
        return EXIT_ERROR
