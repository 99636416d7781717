"""Translations between automata, monoids and Ext-algebra recognizers."""

import heapq
import logging
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Sequence,
    Set,
    Tuple,
)

from extalgebra.algebra.constructions import (
    coarsest_congruence,
    quotient_tables,
)
from extalgebra.algebra.morphism import Morphism, RecognizerSpec
from extalgebra.algebra.tables import (
    CLOSURE_CAP,
    ExtAlgebra,
    compose_tables,
    complete_operations,
    identity_table,
)
from extalgebra.automata import VCA, VPA
from extalgebra.core import PushdownAlphabet
from extalgebra.errors import (
    MalformedAutomaton,
    MalformedTables,
    SizeCapExceeded,
)
from extalgebra.types import Table, Word

logger = logging.getLogger(__name__)

# Per pushable stack symbol, the state map of a well-matched word
Behaviour = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class FiniteMonoid:
    """A finite monoid with the image of every letter under h: A* → M."""

    element_names: Tuple[str, ...]
    identity: int
    mult: Tuple[Table, ...]
    letter_image: Mapping[str, int]

    def __post_init__(self):
        n = len(self.element_names)
        if len(set(self.element_names)) != n or not 0 <= self.identity < n:
            raise MalformedTables("Monoid elements or identity are invalid")
        if len(self.mult) != n or any(
            len(row) != n or any(not 0 <= y < n for y in row)
            for row in self.mult
        ):
            raise MalformedTables("Monoid multiplication table is malformed")
        if any(not 0 <= x < n for x in self.letter_image.values()):
            raise MalformedTables("Letter images must be monoid elements")
        mult = self.mult
        for x in range(n):
            if mult[x][self.identity] != x or mult[self.identity][x] != x:
                raise MalformedTables(
                    f"{self.element_names[self.identity]} is not neutral for"
                    f" {self.element_names[x]}"
                )
            for y in range(n):
                for z in range(n):
                    if mult[mult[x][y]][z] != mult[x][mult[y][z]]:
                        raise MalformedTables(
                            "Monoid multiplication is not associative"
                        )

    @property
    def size(self) -> int:
        return len(self.element_names)

    def image(self, w: Word) -> int:
        """h(w), by free extension of the letter images."""
        current = self.identity
        for letter in w:
            current = self.mult[current][self.letter_image[letter]]
        return current


def _identity_name(alphabet: PushdownAlphabet) -> str:
    return "1" if "1" not in alphabet.letters else "ε"


def _shortest_closure(
    alphabet: PushdownAlphabet,
    seeds: Iterable[Tuple[Word, Tuple]],
    product: Callable[[Tuple, Tuple], Tuple],
    wrappers: Sequence[Tuple[str, str, Callable[[Tuple], Tuple]]],
    cap: int,
) -> Tuple[List[Tuple], List[Word]]:
    """Closes seed values under product and the wrapping maps.

    Values are reached in order of their shortest representative word
    (length first, then the letter order), and each value is returned with
    that word. A wrapper (a, b, f) sends the value of w to that of awb.
    """
    heap: List[Tuple[int, Tuple[int, ...], Word, Tuple]] = []

    def push(word: Word, value: Tuple) -> None:
        heapq.heappush(heap, (len(word), alphabet.rank(word), word, value))

    for word, value in seeds:
        push(word, value)
    values: List[Tuple] = []
    words: List[Word] = []
    seen: Set[Tuple] = set()
    while heap:
        _, _, word, value = heapq.heappop(heap)
        if value in seen:
            continue
        seen.add(value)
        values.append(value)
        words.append(word)
        if len(values) > cap:
            raise SizeCapExceeded("Carrier closure", cap)
        for other, other_word in zip(values, words):
            push(word + other_word, product(value, other))
            push(other_word + word, product(other, value))
        for call, ret, wrap in wrappers:
            push(call + word + ret, wrap(value))
    return values, words


def _seed_algebra(
    element_names: Sequence[str],
    identity: int,
    mult: Sequence[Table],
    named_tables: Iterable[Tuple[str, Table]],
) -> ExtAlgebra:
    """An algebra with the given operations, deduplicated, plus identity."""
    tables: List[Table] = []
    names: List[str] = []
    seen: Set[Table] = set()
    for name, table in named_tables:
        if table not in seen:
            seen.add(table)
            tables.append(table)
            names.append(name)
    unit = identity_table(len(element_names))
    if unit not in tables:
        tables.insert(0, unit)
        names.insert(0, "id" if "id" not in names else "id'")
    return ExtAlgebra(
        element_names=tuple(element_names),
        identity=identity,
        mult=tuple(tuple(row) for row in mult),
        op_tables=tuple(tables),
        op_names=tuple(names),
        identity_op=tables.index(unit),
    )


class _BehaviourCarrier:
    """The behaviour elements of a VPA reachable from well-matched words.

    A behaviour maps every pushable stack symbol G to the state function
    q ↦ state reached by reading the word from q with G on top.
    """

    def __init__(self, M: VPA, cap: int):
        self.M = M
        alphabet = M.alphabet
        self.symbols = M.pushable_symbols
        symbol_index = {symbol: g for g, symbol in enumerate(self.symbols)}
        state_index = {state: q for q, state in enumerate(M.states)}
        states = range(len(M.states))

        def letter_behaviour(letter: str) -> Behaviour:
            return tuple(
                tuple(
                    state_index[M.delta[(letter, M.states[q], symbol)][0]]
                    for q in states
                )
                for symbol in self.symbols
            )

        def product(first: Behaviour, second: Behaviour) -> Behaviour:
            return tuple(
                tuple(after[before[q]] for q in states)
                for before, after in zip(first, second)
            )

        def wrapper(call: str, ret: str) -> Callable[[Tuple], Tuple]:
            # For each (G, q): the state after the call and the symbol it
            # pushed, then the return reads that symbol back
            opened = [
                [
                    M.delta[(call, M.states[q], symbol)]
                    for q in states
                ]
                for symbol in self.symbols
            ]

            def wrap(inner: Behaviour) -> Behaviour:
                result = []
                for g in range(len(self.symbols)):
                    row = []
                    for q in states:
                        target, emitted = opened[g][q]
                        pushed = emitted[0]
                        middle = inner[symbol_index[pushed]][
                            state_index[target]
                        ]
                        row.append(
                            state_index[
                                M.delta[(ret, M.states[middle], pushed)][0]
                            ]
                        )
                    result.append(tuple(row))
                return tuple(result)

            return wrap

        unit: Behaviour = tuple(
            tuple(states) for _ in range(len(self.symbols))
        )
        self.wraps = {
            (call, ret): wrapper(call, ret)
            for call in alphabet.calls
            for ret in alphabet.returns
        }
        self.values, self.words = _shortest_closure(
            alphabet,
            [("", unit)]
            + [
                (letter, letter_behaviour(letter))
                for letter in alphabet.internals
            ],
            product,
            [(call, ret, wrap) for (call, ret), wrap in self.wraps.items()],
            cap,
        )
        self.index = {value: x for x, value in enumerate(self.values)}
        self.product = product
        self.letter_behaviour = letter_behaviour
        self.size = len(self.values)

    @property
    def names(self) -> Tuple[str, ...]:
        identity = _identity_name(self.M.alphabet)
        return tuple(word if word else identity for word in self.words)

    @property
    def mult(self) -> Tuple[Table, ...]:
        return tuple(
            tuple(self.index[self.product(x, y)] for y in self.values)
            for x in self.values
        )

    def ext_table(self, call: str, ret: str) -> Table:
        wrap = self.wraps[(call, ret)]
        return tuple(self.index[wrap(x)] for x in self.values)

    def internal_image(self, letter: str) -> int:
        return self.index[self.letter_behaviour(letter)]

    @property
    def accepting(self) -> FrozenSet[int]:
        M = self.M
        bottom = self.symbols.index(M.bottom)
        initial = M.states.index(M.initial)
        return frozenset(
            x
            for x, value in enumerate(self.values)
            if M.states[value[bottom][initial]] in M.final
        )


def vpa_to_ext_algebra(M: VPA, cap: int = CLOSURE_CAP) -> RecognizerSpec:
    """The behaviour recognizer of a VPA.

    Elements are the behaviours of well-matched words, named by their
    shortest representative. Its size is bounded by |Γ|·|Q|^|Q| and it is
    usually far from minimal; see syntactic_quotient.
    """
    carrier = _BehaviourCarrier(M, cap)
    alphabet = M.alphabet
    pairs = [
        (call, ret) for call in alphabet.calls for ret in alphabet.returns
    ]
    seed = _seed_algebra(
        carrier.names,
        0,
        carrier.mult,
        [
            (f"ext[{call},{ret}]", carrier.ext_table(call, ret))
            for call, ret in pairs
        ],
    )
    algebra, _ = complete_operations(seed, cap)
    morphism = Morphism(
        target=algebra,
        alphabet=alphabet,
        internal_image={
            letter: carrier.internal_image(letter)
            for letter in alphabet.internals
        },
        ext_image={
            (call, ret): algebra.lookup_op(carrier.ext_table(call, ret))
            for call, ret in pairs
        },
    )
    logger.info(
        "Translated automaton to algebra %s",
        {
            "states": len(M.states),
            "elements": algebra.size,
            "operations": algebra.op_count,
        },
    )
    return RecognizerSpec(morphism, carrier.accepting)


def vpa_to_syntactic_spec(M: VPA, cap: int = CLOSURE_CAP) -> RecognizerSpec:
    """The syntactic recognizer of L(M), minimized before O is closed.

    The congruence is refined over the generators of the operation monoid
    (the ext maps and all translations), which yields the same partition
    as refining over the whole monoid.
    """
    carrier = _BehaviourCarrier(M, cap)
    alphabet = M.alphabet
    names = carrier.names
    mult = carrier.mult
    pairs = [
        (call, ret) for call in alphabet.calls for ret in alphabet.returns
    ]
    generators: List[Table] = [
        carrier.ext_table(call, ret) for call, ret in pairs
    ]
    generator_names = [f"ext[{call},{ret}]" for call, ret in pairs]
    for x in range(carrier.size):
        generators.append(mult[x])
        generator_names.append(f"L[{names[x]}]")
        generators.append(tuple(row[x] for row in mult))
        generator_names.append(f"R[{names[x]}]")
    blocks = coarsest_congruence(carrier.size, carrier.accepting, generators)
    algebra, projection = quotient_tables(
        names,
        0,
        mult,
        blocks,
        generators,
        generator_names,
        close=True,
        cap=cap,
    )
    morphism = Morphism(
        target=algebra,
        alphabet=alphabet,
        internal_image={
            letter: projection.elements[carrier.internal_image(letter)]
            for letter in alphabet.internals
        },
        ext_image={
            pair: projection.operations[position]
            for position, pair in enumerate(pairs)
        },
    )
    logger.info(
        "Minimized automaton behaviours %s",
        {"behaviours": carrier.size, "classes": algebra.size},
    )
    return RecognizerSpec(
        morphism,
        frozenset(projection.elements[x] for x in carrier.accepting),
    )


def ext_algebra_to_vpa(spec: RecognizerSpec) -> VPA:
    """A VPA whose state is the image of the current block.

    A call pushes the current state and its letter and restarts from the
    identity; the matching return folds the finished block back in.
    """
    R = spec.algebra
    alphabet = spec.alphabet
    morphism = spec.morphism
    names = R.element_names
    bottom = "#"
    pushed = {
        (q, call): f"{names[q]}|{call}"
        for q in range(R.size)
        for call in alphabet.calls
    }
    opened = {symbol: key for key, symbol in pushed.items()}
    symbols = (bottom, *pushed.values())
    delta: Dict[Tuple[str, str, str], Tuple[str, Tuple[str, ...]]] = {}
    for q in range(R.size):
        for letter in alphabet.letters:
            kind = alphabet.kind(letter)
            for top in symbols:
                key = (letter, names[q], top)
                if kind == "call":
                    delta[key] = (
                        names[R.identity],
                        (pushed[(q, letter)], top),
                    )
                elif kind == "internal":
                    target = R.mult[q][morphism.internal_image[letter]]
                    delta[key] = (names[target], (top,))
                elif top == bottom:
                    # Only reachable on words that are not well-matched
                    delta[key] = (names[q], ())
                else:
                    saved, call = opened[top]
                    inner = morphism.ext_table(call, letter)[q]
                    delta[key] = (names[R.mult[saved][inner]], ())
    return VPA(
        alphabet=alphabet,
        states=names,
        initial=names[R.identity],
        stack_symbols=symbols,
        bottom=bottom,
        delta=delta,
        final=frozenset(names[x] for x in spec.accepting),
    )


def monoid_to_ext_algebra(
    M: FiniteMonoid,
    alphabet: PushdownAlphabet,
    accepting: Iterable[int],
    cap: int = CLOSURE_CAP,
) -> RecognizerSpec:
    """Recognizes h⁻¹(accepting) ∩ WM through the monoid h(WM).

    Operations are the maps x ↦ m·x·m' for every pair (m, m') = (h(u),
    h(v)) of a context (u, v).
    """
    missing = [
        letter for letter in alphabet.letters if letter not in M.letter_image
    ]
    if missing:
        raise MalformedTables(f"Letters {missing} have no image in the monoid")
    mult = M.mult
    h = M.letter_image
    pairs = [
        (call, ret) for call in alphabet.calls for ret in alphabet.returns
    ]

    def wrapper(call: str, ret: str) -> Callable[[Tuple], Tuple]:
        return lambda x: (mult[mult[h[call]][x[0]]][h[ret]],)

    values, _ = _shortest_closure(
        alphabet,
        [("", (M.identity,))]
        + [(letter, (h[letter],)) for letter in alphabet.internals],
        lambda x, y: (mult[x[0]][y[0]],),
        [(call, ret, wrapper(call, ret)) for call, ret in pairs],
        cap,
    )
    carrier = sorted(value[0] for value in values)
    position = {x: index for index, x in enumerate(carrier)}

    # Context pairs (h(u), h(v)), closed by growing the inner hole
    contexts = {(M.identity, M.identity)}
    queue = [(M.identity, M.identity)]
    while queue:
        m, m_right = queue.pop()
        grown = [(mult[m][h[c]], m_right) for c in alphabet.internals]
        grown += [(m, mult[h[c]][m_right]) for c in alphabet.internals]
        grown += [
            (mult[m][h[call]], mult[h[ret]][m_right]) for call, ret in pairs
        ]
        grown += [(mult[m][r], m_right) for r in carrier]
        grown += [(m, mult[r][m_right]) for r in carrier]
        for pair in grown:
            if pair not in contexts:
                contexts.add(pair)
                queue.append(pair)
        if len(contexts) > cap:
            raise SizeCapExceeded("Context pair closure", cap)

    def table(m: int, m_right: int) -> Table:
        return tuple(position[mult[mult[m][x]][m_right]] for x in carrier)

    names = tuple(M.element_names[x] for x in carrier)
    ext_tables = {
        (call, ret): table(h[call], h[ret]) for call, ret in pairs
    }
    named: List[Tuple[str, Table]] = [
        ("id", identity_table(len(carrier)))
    ]
    named += [
        (f"ext[{call},{ret}]", ext_tables[(call, ret)]) for call, ret in pairs
    ]
    for x in carrier:
        named.append((f"L[{M.element_names[x]}]", table(x, M.identity)))
        named.append((f"R[{M.element_names[x]}]", table(M.identity, x)))
    others = sorted({table(m, m_right) for m, m_right in contexts})
    named += [(f"op{k}", other) for k, other in enumerate(others)]
    algebra = _seed_algebra(
        names,
        position[M.identity],
        [tuple(position[mult[x][y]] for y in carrier) for x in carrier],
        named,
    )
    morphism = Morphism(
        target=algebra,
        alphabet=alphabet,
        internal_image={
            letter: position[h[letter]] for letter in alphabet.internals
        },
        ext_image={
            pair: algebra.lookup_op(ext_tables[pair]) for pair in pairs
        },
    )
    accepted = set(accepting)
    logger.info(
        "Built algebra from monoid %s",
        {
            "monoid": M.size,
            "elements": algebra.size,
            "operations": algebra.op_count,
        },
    )
    return RecognizerSpec(
        morphism,
        frozenset(position[x] for x in carrier if x in accepted),
    )


def transition_monoid(
    M: VCA, cap: int = CLOSURE_CAP
) -> Tuple[FiniteMonoid, FrozenSet[int]]:
    """The transition monoid of a threshold-0 counter automaton's DFA.

    Elements are named by their shortest word, and the accepting subset is
    the set of transformations sending the initial state into F.
    """
    if M.threshold != 0:
        raise MalformedAutomaton(
            "Only threshold-0 automata read as finite automata"
        )
    delta = M.deltas[0]
    state_index = {state: q for q, state in enumerate(M.states)}
    letters = M.alphabet.letters
    letter_tables = {
        letter: tuple(
            state_index[delta[(letter, state)]] for state in M.states
        )
        for letter in letters
    }
    unit = identity_table(len(M.states))
    elements: List[Table] = [unit]
    words: List[Word] = [""]
    index = {unit: 0}
    position = 0
    # Breadth first, so each element is named by its shortest word
    while position < len(elements):
        current = elements[position]
        for letter in letters:
            extended = compose_tables(letter_tables[letter], current)
            if extended not in index:
                index[extended] = len(elements)
                elements.append(extended)
                words.append(words[position] + letter)
                if len(elements) > cap:
                    raise SizeCapExceeded("Transition monoid", cap)
        position += 1
    identity = _identity_name(M.alphabet)
    monoid = FiniteMonoid(
        element_names=tuple(word if word else identity for word in words),
        identity=0,
        mult=tuple(
            tuple(index[compose_tables(second, first)] for second in elements)
            for first in elements
        ),
        letter_image={
            letter: index[letter_tables[letter]] for letter in letters
        },
    )
    initial = state_index[M.initial]
    accepting = frozenset(
        x
        for x, element in enumerate(elements)
        if M.states[element[initial]] in M.final
    )
    logger.debug("Built transition monoid %s", {"size": monoid.size})
    return monoid, accepting
