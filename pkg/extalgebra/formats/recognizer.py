"""Reading and writing recognizer (.alg) files."""

import logging
from typing import Dict, List, NamedTuple, Optional, Set, Tuple

from extalgebra.algebra.morphism import Morphism, RecognizerSpec
from extalgebra.algebra.tables import (
    CLOSURE_CAP,
    ExtAlgebra,
    complete_operations,
    identity_table,
    validate_algebra,
)
from extalgebra.core import PushdownAlphabet
from extalgebra.errors import ParseError, ValidationError
from extalgebra.formats.lines import (
    ARROW,
    Line,
    LineCursor,
    check_names,
    format_alphabet,
    format_table,
    lookup,
    parse_alphabet,
    read_table,
    require,
    split_arrow,
)
from extalgebra.types import ClosureReport, Table

logger = logging.getLogger(__name__)

SINGLE_KEYWORDS = ("alphabet", "elements", "identity", "mult", "accept")


class LoadedRecognizer(NamedTuple):
    """A parsed recognizer and, if it was completed, what was added."""

    spec: RecognizerSpec
    closure: Optional[ClosureReport]


class _RecognizerDocument:
    """The declarations of an .alg file, checked as they are read."""

    def __init__(self):
        self.found: Dict[str, Line] = {}
        self.alphabet: Optional[PushdownAlphabet] = None
        self.names: Tuple[str, ...] = ()
        self.index: Dict[str, int] = {}
        self.identity = 0
        self.mult: Tuple[Table, ...] = ()
        self.op_tables: List[Table] = []
        self.op_names: List[str] = []
        # Declared names, including aliases of repeated tables
        self.op_index: Dict[str, int] = {}
        self.ext_image: Dict[Tuple[str, str], int] = {}
        self.internal_image: Dict[str, int] = {}
        self.accepting: Set[int] = set()

    def need(self, line: Line, keyword: str) -> None:
        if keyword not in self.found:
            raise line.error(f"{keyword!r} must come before {line.keyword!r}")

    def read(self, cursor: LineCursor) -> None:
        handlers = {
            "alphabet": self.read_alphabet,
            "elements": self.read_elements,
            "identity": self.read_identity,
            "mult": lambda line: self.read_mult(cursor, line),
            "op": self.read_op,
            "extmap": self.read_extmap,
            "letter": self.read_letter,
            "accept": self.read_accept,
        }
        for line in cursor:
            handler = handlers.get(line.keyword)
            if handler is None:
                raise line.error(f"unknown keyword {line.keyword!r}")
            if line.keyword in SINGLE_KEYWORDS:
                if line.keyword in self.found:
                    raise line.error(f"{line.keyword!r} given twice")
                self.found[line.keyword] = line
            handler(line)

    def read_alphabet(self, line: Line) -> None:
        self.alphabet = parse_alphabet(line)

    def read_elements(self, line: Line) -> None:
        check_names(line, line.args)
        self.names = line.args
        self.index = {name: x for x, name in enumerate(self.names)}

    def read_identity(self, line: Line) -> None:
        self.need(line, "elements")
        if len(line.args) != 1:
            raise line.error("expected one identity element")
        self.identity = lookup(line, self.index, line.args[0], "element")

    def read_mult(self, cursor: LineCursor, line: Line) -> None:
        self.need(line, "elements")
        if line.args:
            raise line.error("'mult' takes its rows on the following lines")
        self.mult = read_table(cursor, line, self.index)

    def read_op(self, line: Line) -> None:
        self.need(line, "elements")
        args = line.args
        if len(args) != len(self.names) + 2 or args[1] != "=":
            raise line.error(
                f"expected 'op NAME = ' and {len(self.names)} elements"
            )
        name = args[0]
        check_names(line, [name])
        if name in self.op_index:
            raise line.error(f"operation {name!r} declared twice")
        table = tuple(
            lookup(line, self.index, y, "element") for y in args[2:]
        )
        if table in self.op_tables:
            # Same map as an earlier operation: the name is an alias
            self.op_index[name] = self.op_tables.index(table)
            logger.debug(
                "Aliased operation %s",
                {"name": name, "to": self.op_names[self.op_index[name]]},
            )
            return
        self.op_index[name] = len(self.op_tables)
        self.op_tables.append(table)
        self.op_names.append(name)

    def read_extmap(self, line: Line) -> None:
        self.need(line, "alphabet")
        assert self.alphabet is not None
        (call, ret), (name, *rest) = split_arrow(line, 2, 1)
        if rest:
            raise line.error(f"expected one operation after {ARROW!r}")
        if call not in self.alphabet.calls or ret not in self.alphabet.returns:
            raise line.error(f"({call}, {ret}) is not a call/return pair")
        if (call, ret) in self.ext_image:
            raise line.error(f"({call}, {ret}) mapped twice")
        self.ext_image[(call, ret)] = lookup(
            line, self.op_index, name, "operation"
        )

    def read_letter(self, line: Line) -> None:
        self.need(line, "alphabet")
        self.need(line, "elements")
        assert self.alphabet is not None
        (letter,), (name, *rest) = split_arrow(line, 1, 1)
        if rest:
            raise line.error(f"expected one element after {ARROW!r}")
        if letter not in self.alphabet.internals:
            raise line.error(f"{letter!r} is not an internal letter")
        if letter in self.internal_image:
            raise line.error(f"letter {letter!r} mapped twice")
        self.internal_image[letter] = lookup(line, self.index, name, "element")

    def read_accept(self, line: Line) -> None:
        self.need(line, "elements")
        self.accepting = {
            lookup(line, self.index, name, "element") for name in line.args
        }

    def check_complete(self, last: int) -> PushdownAlphabet:
        for keyword in ("alphabet", "elements", "identity", "mult"):
            require(self.found, keyword, last)
        assert self.alphabet is not None
        for call in self.alphabet.calls:
            for ret in self.alphabet.returns:
                if (call, ret) not in self.ext_image:
                    raise ParseError(last, f"no extmap for ({call}, {ret})")
        for letter in self.alphabet.internals:
            if letter not in self.internal_image:
                raise ParseError(last, f"no image for letter {letter!r}")
        return self.alphabet


def parse_recognizer(
    text: str, complete: bool = True, cap: int = CLOSURE_CAP
) -> LoadedRecognizer:
    """Parses and validates a recognizer.

    With complete=True the operation set is first closed: the identity,
    missing translations and compositions are appended after the declared
    operations, whose rows and indices are never changed.

    :raises ParseError: for a malformed document.
    :raises ValidationError: when the resulting algebra is invalid.
    """
    cursor = LineCursor(text)
    document = _RecognizerDocument()
    document.read(cursor)
    alphabet = document.check_complete(cursor.last_number)

    tables = list(document.op_tables)
    names = list(document.op_names)
    unit = identity_table(len(document.names))
    identity_added = False
    if unit not in tables and (complete or not tables):
        tables.append(unit)
        names.append("id" if "id" not in document.op_index else "id'")
        identity_added = True
    algebra = ExtAlgebra(
        element_names=document.names,
        identity=document.identity,
        mult=document.mult,
        op_tables=tuple(tables),
        op_names=tuple(names),
        identity_op=tables.index(unit) if unit in tables else 0,
    )
    closure: Optional[ClosureReport] = None
    if complete:
        algebra, closure = complete_operations(algebra, cap)
        closure["identity_added"] = identity_added
    report = validate_algebra(algebra)
    if report:
        raise ValidationError(report)
    morphism = Morphism(
        target=algebra,
        alphabet=alphabet,
        internal_image=document.internal_image,
        ext_image=document.ext_image,
    )
    return LoadedRecognizer(
        RecognizerSpec(morphism, frozenset(document.accepting)), closure
    )


def read_recognizer(
    path: str, complete: bool = True, cap: int = CLOSURE_CAP
) -> LoadedRecognizer:
    logger.debug("Reading recognizer %s", {"path": path})
    with open(path, "r", encoding="utf-8") as recognizer_file:
        return parse_recognizer(recognizer_file.read(), complete, cap)


def load_recognizer(
    path: str, complete: bool = True, cap: int = CLOSURE_CAP
) -> RecognizerSpec:
    return read_recognizer(path, complete, cap).spec


def dump_recognizer(spec: RecognizerSpec) -> str:
    """The .alg text of a recognizer, listing every operation."""
    R = spec.algebra
    names = R.element_names
    morphism = spec.morphism
    lines = [
        format_alphabet(spec.alphabet),
        f"elements {' '.join(names)}",
        f"identity {names[R.identity]}",
        "mult",
        *format_table(names, R.mult),
    ]
    lines += [
        f"op {name} = {' '.join(names[y] for y in table)}"
        for name, table in zip(R.op_names, R.op_tables)
    ]
    lines += [
        f"extmap {call} {ret} {ARROW} {R.op_names[op]}"
        for (call, ret), op in sorted(morphism.ext_image.items())
    ]
    lines += [
        f"letter {letter} {ARROW} {names[x]}"
        for letter, x in sorted(morphism.internal_image.items())
    ]
    lines.append(
        " ".join(["accept", *(names[x] for x in sorted(spec.accepting))])
    )
    return "\n".join(lines) + "\n"
