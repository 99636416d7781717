"""Hypothesis strategies for random words, automata and monoids."""

from functools import lru_cache
from typing import Dict, List, Tuple

from hypothesis import strategies as st

from extalgebra.algebra.morphism import RecognizerSpec
from extalgebra.automata import VCA, VPA
from extalgebra.config.local import PACKAGE_ROOT
from extalgebra.core import PushdownAlphabet
from extalgebra.formats.recognizer import load_recognizer
from extalgebra.translate import FiniteMonoid
from extalgebra.types import Word

ABC = PushdownAlphabet(calls=("a",), returns=("b",), internals=("c",))
AB = PushdownAlphabet(calls=("a",), returns=("b",))

STATE_NAMES = ("p", "q", "r")


def close_word(alphabet: PushdownAlphabet, letters: List[str]) -> Word:
    """Drops unmatched returns and closes every open call."""
    word = []
    depth = 0
    for letter in letters:
        kind = alphabet.kind(letter)
        if kind == "return":
            if depth == 0:
                continue
            depth -= 1
        elif kind == "call":
            depth += 1
        word.append(letter)
    word.extend(alphabet.returns[0] * depth)
    return "".join(word)


def words(alphabet: PushdownAlphabet, max_size: int = 8):
    """Arbitrary words, well-matched or not."""
    return st.lists(st.sampled_from(alphabet.letters), max_size=max_size).map(
        "".join
    )


def well_matched_words(alphabet: PushdownAlphabet, max_size: int = 8):
    return st.lists(st.sampled_from(alphabet.letters), max_size=max_size).map(
        lambda letters: close_word(alphabet, letters)
    )


@st.composite
def vcas(
    draw,
    alphabet: PushdownAlphabet = ABC,
    max_states: int = 3,
    max_threshold: int = 2,
) -> VCA:
    count = draw(st.integers(1, max_states))
    states = STATE_NAMES[:count]
    threshold = draw(st.integers(0, max_threshold))
    deltas: List[Dict[Tuple[str, str], str]] = []
    for _ in range(threshold + 1):
        deltas.append(
            {
                (letter, state): draw(st.sampled_from(states))
                for letter in alphabet.letters
                for state in states
            }
        )
    final = draw(st.frozensets(st.sampled_from(states)))
    return VCA(
        alphabet=alphabet,
        states=states,
        initial=states[0],
        final=final,
        threshold=threshold,
        deltas=tuple(deltas),
    )


@st.composite
def vpas(
    draw,
    alphabet: PushdownAlphabet = ABC,
    max_states: int = 3,
    max_symbols: int = 2,
) -> VPA:
    count = draw(st.integers(1, max_states))
    states = STATE_NAMES[:count]
    pushable = ("A", "B")[: draw(st.integers(1, max_symbols))]
    symbols = ("#", *pushable)
    delta: Dict[Tuple[str, str, str], Tuple[str, Tuple[str, ...]]] = {}
    for letter in alphabet.letters:
        kind = alphabet.kind(letter)
        for state in states:
            for top in symbols:
                target = draw(st.sampled_from(states))
                if kind == "call":
                    emitted: Tuple[str, ...] = (
                        draw(st.sampled_from(pushable)),
                        top,
                    )
                elif kind == "return":
                    emitted = ()
                else:
                    emitted = (top,)
                delta[(letter, state, top)] = (target, emitted)
    final = draw(st.frozensets(st.sampled_from(states)))
    return VPA(
        alphabet=alphabet,
        states=states,
        initial=states[0],
        stack_symbols=symbols,
        bottom="#",
        delta=delta,
        final=final,
    )


def stacks(symbols: Tuple[str, ...], max_size: int = 4):
    """Stack contents above a bottom symbol, bottom first."""
    return st.lists(st.sampled_from(symbols), max_size=max_size).map(
        lambda above: ("#", *above)
    )


def _cyclic_monoid(size: int, index: int) -> List[List[int]]:
    """g^size = g^index; exponent k is element k."""
    period = size - index

    def reduce(k: int) -> int:
        return k if k < size else index + (k - index) % period

    return [[reduce(x + y) for y in range(size)] for x in range(size)]


def _transformation_monoid(
    generators: List[Tuple[int, ...]]
) -> Tuple[List[Tuple[int, ...]], List[List[int]]]:
    """The maps on {0, 1} generated under left-to-right composition."""
    elements = [(0, 1)]
    for f in elements:
        for g in generators:
            composed = tuple(g[x] for x in f)
            if composed not in elements:
                elements.append(composed)
    index = {f: i for i, f in enumerate(elements)}
    mult = [
        [index[tuple(g[x] for x in f)] for g in elements] for f in elements
    ]
    return elements, mult


@st.composite
def finite_monoids(
    draw, alphabet: PushdownAlphabet = ABC, max_size: int = 4
) -> FiniteMonoid:
    """Cyclic monoids and monoids of maps on two points."""
    maps = st.tuples(st.integers(0, 1), st.integers(0, 1))
    if max_size >= 4 and draw(st.booleans()):
        elements, mult = _transformation_monoid(
            draw(st.lists(maps, min_size=1, max_size=3))
        )
        names = ["".join(map(str, f)) for f in elements]
    else:
        size = draw(st.integers(1, max_size))
        mult = _cyclic_monoid(size, draw(st.integers(0, size - 1)))
        names = ["1"] + [f"g{k}" for k in range(1, size)]
    return FiniteMonoid(
        element_names=tuple(names),
        identity=0,
        mult=tuple(tuple(row) for row in mult),
        letter_image={
            letter: draw(st.integers(0, len(names) - 1))
            for letter in alphabet.letters
        },
    )


RECOGNIZER_FIXTURES = (
    "anbn.alg",
    "hplus.alg",
    "lml.alg",
    "anbncmdm.alg",
    "separation.alg",
)


@lru_cache(maxsize=None)
def _fixture_recognizer(name: str) -> RecognizerSpec:
    return load_recognizer(str(PACKAGE_ROOT / "fixtures" / name))


def recognizers():
    """The shipped recognizer fixtures, loaded once each."""
    return st.sampled_from(RECOGNIZER_FIXTURES).map(_fixture_recognizer)
