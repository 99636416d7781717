"""Shared reading of the line-oriented file formats.

Every non-blank line starts with a keyword; a line whose first character
is `#` is a comment. Tokens are separated by whitespace.
"""

from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple

from extalgebra.core import PushdownAlphabet
from extalgebra.errors import MalformedAlphabet, ParseError
from extalgebra.types import Table

COMMENT_CHAR = "#"
ARROW = "->"

# Tokens that separate the parts of a line and so cannot be names
RESERVED_TOKENS = frozenset({ARROW, "=", "*"})


class Line(NamedTuple):
    number: int
    tokens: Tuple[str, ...]

    @property
    def keyword(self) -> str:
        return self.tokens[0]

    @property
    def args(self) -> Tuple[str, ...]:
        return self.tokens[1:]

    def error(self, message: str) -> ParseError:
        return ParseError(self.number, message)


class LineCursor:
    """Walks the meaningful lines of a document."""

    def __init__(self, text: str):
        self.lines = [
            Line(number, tuple(raw.split()))
            for number, raw in enumerate(text.splitlines(), start=1)
            if raw.strip() and not raw.lstrip().startswith(COMMENT_CHAR)
        ]
        self.position = 0

    def __iter__(self) -> Iterator[Line]:
        while self.position < len(self.lines):
            line = self.lines[self.position]
            self.position += 1
            yield line

    def take(self, count: int, after: Line) -> List[Line]:
        """The next count lines, which must exist."""
        taken = self.lines[self.position : self.position + count]
        if len(taken) < count:
            raise after.error(
                f"expected {count} rows after {after.keyword!r}"
            )
        self.position += count
        return taken

    @property
    def last_number(self) -> int:
        return self.lines[-1].number if self.lines else 0


def check_names(line: Line, names: Sequence[str]) -> None:
    if not names:
        raise line.error(f"{line.keyword!r} needs at least one name")
    for name in names:
        if name in RESERVED_TOKENS:
            raise line.error(f"{name!r} cannot be used as a name")
    if len(set(names)) != len(names):
        raise line.error("names are not distinct")


def lookup(line: Line, index: Dict[str, int], name: str, what: str) -> int:
    try:
        return index[name]
    except KeyError as error:
        raise line.error(f"undeclared {what} {name!r}") from error


def split_arrow(
    line: Line, before: int, after: int
) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Splits the arguments of `keyword A.. -> B..` by token count."""
    args = line.args
    if len(args) < before + 1 or args[before] != ARROW:
        raise line.error(f"expected {before} tokens before {ARROW!r}")
    right = args[before + 1 :]
    if len(right) < after:
        raise line.error(f"expected {after} tokens after {ARROW!r}")
    return args[:before], right


def parse_alphabet(line: Line) -> PushdownAlphabet:
    """Reads `alphabet calls=a,c returns=b,d internals=`."""
    groups: Dict[str, Tuple[str, ...]] = {}
    for token in line.args:
        key, sign, value = token.partition("=")
        if not sign or key not in ("calls", "returns", "internals"):
            raise line.error(f"unexpected {token!r} in alphabet")
        if key in groups:
            raise line.error(f"{key} given twice")
        groups[key] = tuple(letter for letter in value.split(",") if letter)
    try:
        return PushdownAlphabet(
            groups.get("calls", ()),
            groups.get("returns", ()),
            groups.get("internals", ()),
        )
    except MalformedAlphabet as error:
        raise line.error(str(error)) from error


def format_alphabet(alphabet: PushdownAlphabet) -> str:
    return (
        f"alphabet calls={','.join(alphabet.calls)}"
        f" returns={','.join(alphabet.returns)}"
        f" internals={','.join(alphabet.internals)}"
    )


def read_table(
    cursor: LineCursor, header: Line, index: Dict[str, int]
) -> Tuple[Table, ...]:
    """The square table of element names that follows a header line."""
    rows = []
    for row in cursor.take(len(index), header):
        if len(row.tokens) != len(index):
            raise row.error(f"expected {len(index)} entries in the row")
        rows.append(
            tuple(lookup(row, index, name, "element") for name in row.tokens)
        )
    return tuple(rows)


def format_table(names: Sequence[str], table: Sequence[Table]) -> List[str]:
    return [" ".join(names[y] for y in row) for row in table]


def require(found: Dict[str, Line], keyword: str, last: int) -> Line:
    """The line that declared a mandatory keyword."""
    if keyword not in found:
        raise ParseError(last, f"missing {keyword!r}")
    return found[keyword]
