"""Reading and writing finite monoid (.monoid) files."""

from typing import Dict, FrozenSet, NamedTuple

from extalgebra.core import PushdownAlphabet
from extalgebra.errors import MalformedTables, ParseError
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
from extalgebra.translate import FiniteMonoid


class MonoidFile(NamedTuple):
    monoid: FiniteMonoid
    alphabet: PushdownAlphabet
    accepting: FrozenSet[int]


def parse_monoid(text: str) -> MonoidFile:
    """Parses a monoid with its letter images and accepting subset.

    Every letter of the alphabet needs a `letter x -> ELEMENT` line.
    """
    cursor = LineCursor(text)
    found: Dict[str, Line] = {}
    index: Dict[str, int] = {}
    images: Dict[str, int] = {}
    mult = ()
    for line in cursor:
        keyword = line.keyword
        if keyword != "letter":
            if keyword not in (
                "alphabet",
                "elements",
                "identity",
                "mult",
                "accept",
            ):
                raise line.error(f"unknown keyword {keyword!r}")
            if keyword in found:
                raise line.error(f"{keyword!r} given twice")
            found[keyword] = line
        if keyword == "elements":
            check_names(line, line.args)
            index = {name: x for x, name in enumerate(line.args)}
        elif keyword in ("identity", "mult", "accept", "letter") and not index:
            raise line.error(f"'elements' must come before {keyword!r}")
        if keyword == "mult":
            mult = read_table(cursor, line, index)
        elif keyword == "letter":
            (letter,), (name, *rest) = split_arrow(line, 1, 1)
            if rest:
                raise line.error(f"expected one element after {ARROW!r}")
            if letter in images:
                raise line.error(f"letter {letter!r} mapped twice")
            images[letter] = lookup(line, index, name, "element")

    last = cursor.last_number
    alphabet = parse_alphabet(require(found, "alphabet", last))
    elements = require(found, "elements", last).args
    identity_line = require(found, "identity", last)
    if len(identity_line.args) != 1:
        raise identity_line.error("expected one identity element")
    identity = lookup(identity_line, index, identity_line.args[0], "element")
    require(found, "mult", last)
    for letter in images:
        if letter not in alphabet.letters:
            raise ParseError(last, f"{letter!r} is not a letter")
    for letter in alphabet.letters:
        if letter not in images:
            raise ParseError(last, f"no image for letter {letter!r}")
    accept_line = found.get("accept")
    accepting = frozenset(
        lookup(accept_line, index, name, "element")
        for name in (accept_line.args if accept_line else ())
    )
    try:
        monoid = FiniteMonoid(
            element_names=elements,
            identity=identity,
            mult=mult,
            letter_image=images,
        )
    except MalformedTables as error:
        raise ParseError(last, str(error)) from error
    return MonoidFile(monoid, alphabet, accepting)


def load_monoid(path: str) -> MonoidFile:
    with open(path, "r", encoding="utf-8") as monoid_file:
        return parse_monoid(monoid_file.read())


def dump_monoid(
    monoid: FiniteMonoid,
    alphabet: PushdownAlphabet,
    accepting: FrozenSet[int],
) -> str:
    names = monoid.element_names
    lines = [
        format_alphabet(alphabet),
        f"elements {' '.join(names)}",
        f"identity {names[monoid.identity]}",
        "mult",
        *format_table(names, monoid.mult),
    ]
    lines += [
        f"letter {letter} {ARROW} {names[monoid.letter_image[letter]]}"
        for letter in alphabet.letters
    ]
    lines.append(" ".join(["accept", *(names[x] for x in sorted(accepting))]))
    return "\n".join(lines) + "\n"
