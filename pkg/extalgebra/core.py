"""Visibly pushdown alphabets, well-matched words and contexts."""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

from extalgebra.errors import InvalidLetter, MalformedAlphabet, NotWellMatched
from extalgebra.types import LetterKind, Word

# Symbols that separate tokens in the file formats; never valid letters
RESERVED_SYMBOLS = frozenset(",=#-|:()[];$*")

EMPTY_WORD_TOKEN = "-"


@dataclass(frozen=True)
class PushdownAlphabet:
    """An alphabet partitioned into call, return and internal letters.

    The declaration order (calls, then returns, then internals, each in the
    order given) is the letter order used by every enumeration.
    """

    calls: Tuple[str, ...]
    returns: Tuple[str, ...]
    internals: Tuple[str, ...] = ()
    _kinds: Dict[str, LetterKind] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        kinds: Dict[str, LetterKind] = {}
        groups: List[Tuple[LetterKind, Tuple[str, ...]]] = [
            ("call", self.calls),
            ("return", self.returns),
            ("internal", self.internals),
        ]
        for kind, letters in groups:
            for letter in letters:
                if (
                    len(letter) != 1
                    or not letter.isprintable()
                    or letter.isspace()
                    or letter in RESERVED_SYMBOLS
                ):
                    raise MalformedAlphabet(
                        f"{letter!r} cannot be used as a letter"
                    )
                if letter in kinds:
                    raise MalformedAlphabet(
                        f"Letter {letter!r} is declared as both a"
                        f" {kinds[letter]} and a {kind}"
                    )
                kinds[letter] = kind
        object.__setattr__(self, "_kinds", kinds)

    @property
    def letters(self) -> Tuple[str, ...]:
        """All letters in declaration order."""
        return self.calls + self.returns + self.internals

    def kind(self, letter: str) -> LetterKind:
        try:
            return self._kinds[letter]
        except KeyError as error:
            raise InvalidLetter(letter) from error

    def height(self, letter: str) -> int:
        """The stack effect of a single letter."""
        kind = self.kind(letter)
        if kind == "call":
            return 1
        if kind == "return":
            return -1
        return 0

    def rank(self, word: Word) -> Tuple[int, ...]:
        """Sort key of a word under the declared letter order."""
        order = {letter: index for index, letter in enumerate(self.letters)}
        try:
            return tuple(order[letter] for letter in word)
        except KeyError as error:
            raise InvalidLetter(error.args[0], word) from error

    def check_word(self, word: Word) -> None:
        """Raises InvalidLetter if the word uses a foreign letter."""
        for letter in word:
            if letter not in self._kinds:
                raise InvalidLetter(letter, word)


def parse_word(alphabet: PushdownAlphabet, text: str) -> Word:
    """Reads a word as written on the command line; `-` is the empty word."""
    word = "" if text == EMPTY_WORD_TOKEN else text
    alphabet.check_word(word)
    return word


def format_word(word: Word) -> str:
    return word if word else EMPTY_WORD_TOKEN


def stack_height(alphabet: PushdownAlphabet, w: Word) -> int:
    """The number of calls minus the number of returns in w."""
    return sum(alphabet.height(letter) for letter in w)


def is_well_matched(alphabet: PushdownAlphabet, w: Word) -> bool:
    """Whether every prefix of w has non-negative height and w has none."""
    height = 0
    for letter in w:
        height += alphabet.height(letter)
        if height < 0:
            # Still validate the remaining letters
            alphabet.check_word(w)
            return False
    return height == 0


def prefix_minimum(alphabet: PushdownAlphabet, w: Word) -> int:
    """The lowest height reached by any prefix of w (0 for the empty one)."""
    height = lowest = 0
    for letter in w:
        height += alphabet.height(letter)
        lowest = min(lowest, height)
    return lowest


@dataclass(frozen=True)
class Context:
    """A pair (u, v) of words such that uv is well-matched."""

    alphabet: PushdownAlphabet = field(repr=False)
    left: Word
    right: Word

    def __post_init__(self):
        if not is_well_matched(self.alphabet, self.left + self.right):
            raise NotWellMatched(self.left + self.right)

    @property
    def height(self) -> int:
        """The height signature: the stack height of the left part."""
        return stack_height(self.alphabet, self.left)

    def compose(self, other: "Context") -> "Context":
        """The context (uu', v'v) that applies other inside self."""
        return Context(
            self.alphabet, self.left + other.left, other.right + self.right
        )

    def __str__(self) -> str:
        return f"({format_word(self.left)},{format_word(self.right)})"


def apply_context(ctx: Context, x: Word) -> Word:
    """Inserts a well-matched word into a context."""
    if not is_well_matched(ctx.alphabet, x):
        raise NotWellMatched(x)
    result = ctx.left + x + ctx.right
    assert is_well_matched(ctx.alphabet, result)
    return result


def _words_of_length(
    alphabet: PushdownAlphabet, length: int
) -> Iterator[Word]:
    """Well-matched words of an exact length, in lexicographic order."""
    letters = alphabet.letters
    heights = [alphabet.height(letter) for letter in letters]
    prefix: List[str] = []

    def extend(height: int) -> Iterator[Word]:
        remaining = length - len(prefix)
        if remaining == 0:
            if height == 0:
                yield "".join(prefix)
            return
        for letter, step in zip(letters, heights):
            new_height = height + step
            # Every open call still needs a return
            if new_height < 0 or new_height > remaining - 1:
                continue
            prefix.append(letter)
            yield from extend(new_height)
            prefix.pop()

    yield from extend(0)


def enumerate_well_matched(
    alphabet: PushdownAlphabet, max_len: int
) -> List[Word]:
    """All well-matched words up to max_len, length-then-lexicographic."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    words: List[Word] = []
    for length in range(max_len + 1):
        words.extend(_words_of_length(alphabet, length))
    return words


def enumerate_contexts(
    alphabet: PushdownAlphabet, max_total_len: int
) -> List[Context]:
    """All contexts (u, v) with |u| + |v| <= max_total_len.

    Ordered by total length, then by v, then by u, comparing words under
    the declared letter order.
    """
    contexts = [
        Context(alphabet, word[:split], word[split:])
        for word in enumerate_well_matched(alphabet, max_total_len)
        for split in range(len(word) + 1)
    ]
    contexts.sort(
        key=lambda ctx: (
            len(ctx.left) + len(ctx.right),
            alphabet.rank(ctx.right),
            alphabet.rank(ctx.left),
        )
    )
    return contexts
