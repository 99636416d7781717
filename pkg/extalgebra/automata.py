"""Visibly pushdown automata and threshold visibly counter automata."""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from extalgebra.core import (
    PushdownAlphabet,
    is_well_matched,
    prefix_minimum,
    stack_height,
)
from extalgebra.errors import (
    MalformedAutomaton,
    NotWellMatched,
    SizeCapExceeded,
    StackBottomPopped,
    UndefinedRun,
)
from extalgebra.types import Word

logger = logging.getLogger(__name__)

EXPONENT_CAP = 720

# A stack is stored bottom first, so its top is the last symbol
Stack = Tuple[str, ...]

# (letter, state, top of stack) -> (state, emitted symbols, top first)
VPATransitions = Mapping[Tuple[str, str, str], Tuple[str, Tuple[str, ...]]]

# Reading a letter in a state at the current threshold level
VCATransitions = Mapping[Tuple[str, str], str]


@dataclass(frozen=True)
class VPA:
    """A deterministic visibly pushdown automaton.

    Every move reads the top stack symbol and replaces it with a string:
    a call emits G0 G (pushing G0 above the symbol G it read), a return
    emits nothing (popping G) and an internal letter emits G again.
    """

    alphabet: PushdownAlphabet
    states: Tuple[str, ...]
    initial: str
    stack_symbols: Tuple[str, ...]
    bottom: str
    delta: VPATransitions
    final: FrozenSet[str]

    def __post_init__(self):
        states = set(self.states)
        symbols = set(self.stack_symbols)
        if len(states) != len(self.states):
            raise MalformedAutomaton("States are not distinct")
        if len(symbols) != len(self.stack_symbols):
            raise MalformedAutomaton("Stack symbols are not distinct")
        if self.initial not in states:
            raise MalformedAutomaton(
                f"Initial state {self.initial} is unknown"
            )
        if self.bottom not in symbols:
            raise MalformedAutomaton(f"Bottom symbol {self.bottom} is unknown")
        if not self.final <= states:
            raise MalformedAutomaton("Final states must be states")
        for letter in self.alphabet.letters:
            kind = self.alphabet.kind(letter)
            for state in self.states:
                for top in self.stack_symbols:
                    key = (letter, state, top)
                    if key not in self.delta:
                        raise MalformedAutomaton(
                            f"No transition on {letter} from {state} with"
                            f" {top} on top"
                        )
                    target, emitted = self.delta[key]
                    if target not in states:
                        raise MalformedAutomaton(
                            f"Transition {key} leads to unknown state {target}"
                        )
                    if kind == "call":
                        valid = (
                            len(emitted) == 2
                            and emitted[1] == top
                            and emitted[0] in symbols
                            and emitted[0] != self.bottom
                        )
                    elif kind == "return":
                        valid = emitted == ()
                    else:
                        valid = emitted == (top,)
                    if not valid:
                        raise MalformedAutomaton(
                            f"Transition {key} emits {list(emitted)}, which a"
                            f" {kind} letter cannot"
                        )

    def pushed_symbol(self, call: str, state: str, top: str) -> str:
        """The symbol that a call pushes from this state and top."""
        return self.delta[(call, state, top)][1][0]

    @property
    def pushable_symbols(self) -> Tuple[str, ...]:
        """The bottom symbol and every symbol some call can push."""
        pushed = {
            self.pushed_symbol(call, state, top)
            for call in self.alphabet.calls
            for state in self.states
            for top in self.stack_symbols
        }
        return tuple(
            symbol
            for symbol in self.stack_symbols
            if symbol == self.bottom or symbol in pushed
        )


def vpa_step(
    M: VPA, letter: str, state: str, stack: Stack
) -> Tuple[str, Stack]:
    """One move of M; a bottom symbol is never popped."""
    top = stack[-1]
    target, emitted = M.delta[(letter, state, top)]
    if not emitted and top == M.bottom:
        raise StackBottomPopped(
            f"Return {letter} from {state} would pop the bottom symbol"
        )
    return target, stack[:-1] + emitted[::-1]


def vpa_run(
    M: VPA, w: Word, state: str = None, stack: Stack = None
) -> Tuple[str, Stack]:
    """The extended transition function: the configuration after w.

    Starts from the initial configuration unless one is given.
    """
    M.alphabet.check_word(w)
    current = M.initial if state is None else state
    contents: Stack = (M.bottom,) if stack is None else tuple(stack)
    for letter in w:
        current, contents = vpa_step(M, letter, current, contents)
    return current, contents


def vpa_accepts(M: VPA, w: Word) -> bool:
    if not is_well_matched(M.alphabet, w):
        raise NotWellMatched(w)
    state, stack = vpa_run(M, w)
    assert stack == (M.bottom,), "A well-matched run must restore the stack"
    return state in M.final


@dataclass(frozen=True)
class VCA:
    """A deterministic visibly counter automaton with threshold m.

    deltas[i] is used while the counter equals i, and deltas[m] for every
    counter value from m upwards. Calls increment the counter and returns
    decrement it.
    """

    alphabet: PushdownAlphabet
    states: Tuple[str, ...]
    initial: str
    final: FrozenSet[str]
    threshold: int
    deltas: Tuple[VCATransitions, ...]

    def __post_init__(self):
        states = set(self.states)
        if len(states) != len(self.states):
            raise MalformedAutomaton("States are not distinct")
        if self.initial not in states:
            raise MalformedAutomaton(
                f"Initial state {self.initial} is unknown"
            )
        if not self.final <= states:
            raise MalformedAutomaton("Final states must be states")
        if self.threshold < 0:
            raise MalformedAutomaton("Threshold must be non-negative")
        if len(self.deltas) != self.threshold + 1:
            raise MalformedAutomaton(
                f"Threshold {self.threshold} needs"
                f" {self.threshold + 1} transition functions,"
                f" not {len(self.deltas)}"
            )
        for level, delta in enumerate(self.deltas):
            for letter in self.alphabet.letters:
                for state in self.states:
                    if delta.get((letter, state)) not in states:
                        raise MalformedAutomaton(
                            f"Level {level} has no valid transition on"
                            f" {letter} from {state}"
                        )

    def delta_at(self, level: int) -> VCATransitions:
        return self.deltas[min(level, self.threshold)]


def vca_run(
    M: VCA, w: Word, state: str, level: int
) -> Tuple[str, int]:
    """The configuration (state, counter) reached by reading w.

    :raises UndefinedRun: when the counter would drop below zero.
    """
    M.alphabet.check_word(w)
    if level < 0 or level + prefix_minimum(M.alphabet, w) < 0:
        raise UndefinedRun(w, level)
    for letter in w:
        state = M.delta_at(level)[(letter, state)]
        level += M.alphabet.height(letter)
    return state, level


def vca_accepts(M: VCA, w: Word) -> bool:
    if not is_well_matched(M.alphabet, w):
        raise NotWellMatched(w)
    state, level = vca_run(M, w, M.initial, 0)
    assert level == 0, "A well-matched run must end at counter zero"
    return state in M.final


def vca_level_function(M: VCA, u: Word, i: int) -> Dict[str, str]:
    """The state map of reading u from counter value i."""
    return {q: vca_run(M, u, q, i)[0] for q in M.states}


def vca_to_vpa(M: VCA) -> VPA:
    """An equivalent VPA that keeps min(counter, m) in its state.

    A call pushes the capped counter value it was read at, so a return can
    restore it. Counter values above m need no exact bookkeeping because
    the transitions no longer depend on them.
    """
    m = M.threshold
    bottom = "#"
    levels = [f"L{c}" for c in range(m + 1)]
    level_of = {symbol: c for c, symbol in enumerate(levels)}
    states = tuple(f"{q}|{c}" for c in range(m + 1) for q in M.states)
    symbols = (bottom, *levels)
    delta: Dict[Tuple[str, str, str], Tuple[str, Tuple[str, ...]]] = {}
    for c in range(m + 1):
        transitions = M.deltas[c]
        for q in M.states:
            source = f"{q}|{c}"
            for letter in M.alphabet.letters:
                kind = M.alphabet.kind(letter)
                target = transitions[(letter, q)]
                for top in symbols:
                    if kind == "call":
                        delta[(letter, source, top)] = (
                            f"{target}|{min(c + 1, m)}",
                            (levels[c], top),
                        )
                    elif kind == "return":
                        # On the bottom symbol the run is undefined anyway
                        restored = level_of.get(top, 0)
                        delta[(letter, source, top)] = (
                            f"{target}|{restored}",
                            (),
                        )
                    else:
                        delta[(letter, source, top)] = (
                            f"{target}|{c}",
                            (top,),
                        )
    vpa = VPA(
        alphabet=M.alphabet,
        states=states,
        initial=f"{M.initial}|0",
        stack_symbols=symbols,
        bottom=bottom,
        delta=delta,
        final=frozenset(f"{q}|{c}" for q in M.final for c in range(m + 1)),
    )
    logger.debug(
        "Encoded counter automaton %s",
        {"threshold": m, "states": len(states)},
    )
    return vpa


def vca_stabilizing_exponent(
    M: VCA, words: Iterable[Word], cap: int = EXPONENT_CAP
) -> int:
    """The least s >= 1 with r(x^s, i) = r(x^2s, i) for every word x.

    This is the smallest exponent that works, found by trying s = 1, 2, ...
    in turn. It is not the bound built from the lcm of the periods of the
    level functions, which can be much larger.

    Levels i are checked from 0 up to m + |x|·2s; above the threshold the
    level functions no longer change.

    :raises UndefinedRun: when some power of a word has no run from 0.
    :raises SizeCapExceeded: when no s up to cap works.
    """
    words = list(words)
    for x in words:
        if (
            prefix_minimum(M.alphabet, x) < 0
            or stack_height(M.alphabet, x) < 0
        ):
            raise UndefinedRun(x, 0)
    for s in range(1, cap + 1):
        if all(
            vca_level_function(M, x * s, i)
            == vca_level_function(M, x * (2 * s), i)
            for x in words
            for i in range(M.threshold + len(x) * 2 * s + 1)
        ):
            logger.debug(
                "Found stabilizing exponent %s", {"s": s, "words": words}
            )
            return s
    raise SizeCapExceeded("Stabilizing exponent", cap)
