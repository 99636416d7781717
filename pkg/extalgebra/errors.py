from typing import Any, List, Optional, Sequence


class ExtAlgebraError(Exception):
    """Base class for every error raised by this package."""


class InvalidLetter(ExtAlgebraError):
    """A word contains a letter that is not part of its alphabet."""

    def __init__(self, letter: str, word: Optional[str] = None):
        self.letter = letter
        self.word = word
        super().__init__(
            f"Letter {letter!r} is not in the alphabet"
            + (f" (in word {word!r})" if word is not None else "")
        )


class MalformedAlphabet(ExtAlgebraError):
    """The letter sets of an alphabet overlap or use reserved symbols."""


class NotWellMatched(ExtAlgebraError):
    """A word (or the concatenation of a context) is not well-matched."""

    def __init__(self, word: str):
        self.word = word
        super().__init__(f"Word {word or '-'!r} is not well-matched")


class MalformedTables(ExtAlgebraError):
    """The tables of an algebra have inconsistent dimensions or indices."""


class ClosureViolation(ExtAlgebraError):
    """A transformation that must belong to O(R) is missing from it.

    Only raised for invalid algebras; a validated algebra is closed under
    composition and translations.
    """

    def __init__(self, table: Sequence[int]):
        self.table = tuple(table)
        super().__init__(f"Operation {list(self.table)} is not in O(R)")


class NotACongruence(ExtAlgebraError):
    """A partition is not compatible with some operation of the algebra.

    The witness is an op index and two equivalent elements whose images are
    not equivalent.
    """

    def __init__(self, op: int, x: int, y: int):
        self.op = op
        self.x = x
        self.y = y
        super().__init__(
            f"Partition is not a congruence: op {op} separates {x} and {y}"
        )


class SizeCapExceeded(ExtAlgebraError):
    """A closure or a search grew beyond its configured cap."""

    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        super().__init__(f"{what} exceeds the size cap of {cap}")


class MalformedAutomaton(ExtAlgebraError):
    """An automaton's transition function breaks a structural rule."""


class StackBottomPopped(ExtAlgebraError):
    """A run tried to pop the bottom-of-stack symbol.

    Unreachable on well-matched input; seeing it means the automaton or the
    caller is broken.
    """


class UndefinedRun(ExtAlgebraError):
    """A counter run would drive the counter below zero."""

    def __init__(self, word: str, level: int):
        self.word = word
        self.level = level
        super().__init__(
            f"Run on {word or '-'!r} from level {level} is undefined"
        )


class UnboundVariable(ExtAlgebraError):
    """A term mentions a variable that the assignment does not bind."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Variable {name!r} is not bound")


class ParseError(ExtAlgebraError):
    """A file could not be parsed."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class ValidationError(ExtAlgebraError):
    """A loaded algebra failed validation.

    Carries the full violation report.
    """

    def __init__(self, report: List[Any]):
        self.report = report
        summary = "; ".join(violation["message"] for violation in report)
        super().__init__(f"Algebra is invalid: {summary}")


class UsageError(ExtAlgebraError):
    """The command line could not be understood."""
