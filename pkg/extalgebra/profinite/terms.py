"""Terms over well-matched words with ω-powers of contexts.

The text form of terms is read and written by extalgebra.profinite.syntax.
"""

from dataclasses import dataclass
from typing import Callable, List, Mapping, Set, Tuple, TypeVar, Union

from extalgebra.algebra.morphism import (
    Morphism,
    RecognizerSpec,
    context_op,
)
from extalgebra.algebra.tables import ExtAlgebra, compose_tables
from extalgebra.core import Context, PushdownAlphabet, is_well_matched
from extalgebra.errors import InvalidLetter, NotWellMatched, UnboundVariable
from extalgebra.types import Table, Word

T = TypeVar("T")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class EmptyWord:
    pass


@dataclass(frozen=True)
class Letter:
    """An internal letter."""

    letter: str


@dataclass(frozen=True)
class Concat:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Ext:
    context: Context
    body: "Term"


@dataclass(frozen=True)
class ExtOmega:
    """The idempotent power of ext_{u,v}, applied to body."""

    context: Context
    body: "Term"


Term = Union[Var, EmptyWord, Letter, Concat, Ext, ExtOmega]


def idempotent_power(value: T, multiply: Callable[[T, T], T]) -> T:
    """The idempotent among the powers of value in a finite monoid.

    This is value^k for the least k >= 1 with value^k idempotent, which is
    also the limit of value^(n!).
    """
    power = value
    while multiply(power, power) != power:
        power = multiply(power, value)
    return power


def table_omega(table: Table) -> Table:
    return idempotent_power(table, compose_tables)


def element_omega(R: ExtAlgebra, x: int) -> int:
    return idempotent_power(x, lambda y, z: R.mult[y][z])


def op_omega(R: ExtAlgebra, op: int) -> int:
    return R.lookup_op(table_omega(R.op_tables[op]))


def _morphism(spec: Union[RecognizerSpec, Morphism]) -> Morphism:
    return spec.morphism if isinstance(spec, RecognizerSpec) else spec


def eval_profinite_term(
    spec: Union[RecognizerSpec, Morphism],
    t: Term,
    assignment: Mapping[str, int],
) -> int:
    """The value of a term under ψ̂, with variables bound to elements.

    :raises UnboundVariable: for a variable missing from the assignment.
    :raises ClosureViolation: when a context's table is not in O(R).
    """
    morphism = _morphism(spec)
    algebra = morphism.target

    def value(term: Term) -> int:
        if isinstance(term, Var):
            if term.name not in assignment:
                raise UnboundVariable(term.name)
            return assignment[term.name]
        if isinstance(term, EmptyWord):
            return algebra.identity
        if isinstance(term, Letter):
            if morphism.alphabet.kind(term.letter) != "internal":
                raise InvalidLetter(term.letter)
            return morphism.internal_image[term.letter]
        if isinstance(term, Concat):
            return algebra.mult[value(term.left)][value(term.right)]
        op = context_op(morphism, term.context)
        if isinstance(term, ExtOmega):
            op = op_omega(algebra, op)
        return algebra.op_tables[op][value(term.body)]

    return value(t)


def term_variables(t: Term) -> Set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Concat):
        return term_variables(t.left) | term_variables(t.right)
    if isinstance(t, (Ext, ExtOmega)):
        return term_variables(t.body)
    return set()


def concat_all(terms: List[Term]) -> Term:
    """Left-nested concatenation; the empty word for no terms."""
    if not terms:
        return EmptyWord()
    result = terms[0]
    for term in terms[1:]:
        result = Concat(result, term)
    return result


def word_to_term(alphabet: PushdownAlphabet, w: Word) -> Term:
    """The ω-free term that spells out a well-matched word."""
    if not is_well_matched(alphabet, w):
        raise NotWellMatched(w)
    # Each open call keeps the factors collected before it
    stack: List[Tuple[str, List[Term]]] = []
    factors: List[Term] = []
    for letter in w:
        kind = alphabet.kind(letter)
        if kind == "internal":
            factors.append(Letter(letter))
        elif kind == "call":
            stack.append((letter, factors))
            factors = []
        else:
            call, outer = stack.pop()
            outer.append(
                Ext(Context(alphabet, call, letter), concat_all(factors))
            )
            factors = outer
    return concat_all(factors)


def omega_chain(contexts: List[Context], body: Term) -> Term:
    """Nests ω-powers, the first context outermost."""
    term = body
    for context in reversed(contexts):
        term = ExtOmega(context, term)
    return term

