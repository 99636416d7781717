"""Reading and writing automaton (.vpa, .vca) files.

Transitions not listed explicitly may be left to a sink state. Wildcards
(`*` for the stack top of a VPA, or for the level of a VCA) are overridden
by explicit entries, whatever their order in the file.
"""

import logging
from typing import Dict, List, Optional, Tuple

from extalgebra.automata import VCA, VPA
from extalgebra.core import PushdownAlphabet
from extalgebra.errors import MalformedAutomaton, ParseError
from extalgebra.formats.lines import (
    ARROW,
    Line,
    LineCursor,
    check_names,
    format_alphabet,
    parse_alphabet,
    require,
    split_arrow,
)

logger = logging.getLogger(__name__)

WILDCARD = "*"


def _single(found: Dict[str, Line], line: Line) -> None:
    if line.keyword in found:
        raise line.error(f"{line.keyword!r} given twice")
    found[line.keyword] = line


def _declared(
    line: Line, name: str, names: Tuple[str, ...], what: str
) -> None:
    if name not in names:
        raise line.error(f"undeclared {what} {name!r}")


def _one_arg(line: Line) -> str:
    if len(line.args) != 1:
        raise line.error(f"{line.keyword!r} takes exactly one name")
    return line.args[0]


def parse_vpa(text: str) -> VPA:
    """Parses a VPA document.

    :raises ParseError: for a malformed document or automaton.
    """
    cursor = LineCursor(text)
    found: Dict[str, Line] = {}
    transitions: List[Line] = []
    for line in cursor:
        if line.keyword == "transition":
            transitions.append(line)
        elif line.keyword in (
            "alphabet",
            "states",
            "initial",
            "stack",
            "bottom",
            "final",
            "sink",
        ):
            _single(found, line)
        else:
            raise line.error(f"unknown keyword {line.keyword!r}")
    last = cursor.last_number
    alphabet = parse_alphabet(require(found, "alphabet", last))
    states_line = require(found, "states", last)
    check_names(states_line, states_line.args)
    states = states_line.args
    stack_line = require(found, "stack", last)
    check_names(stack_line, stack_line.args)
    symbols = stack_line.args
    initial_line = require(found, "initial", last)
    initial = _one_arg(initial_line)
    _declared(initial_line, initial, states, "state")
    bottom_line = require(found, "bottom", last)
    bottom = _one_arg(bottom_line)
    _declared(bottom_line, bottom, symbols, "stack symbol")
    final_line = found.get("final")
    final = final_line.args if final_line else ()
    for name in final:
        _declared(final_line, name, states, "state")

    # (letter, state, top) -> (state, emitted), wildcard entries apart
    explicit: Dict[Tuple[str, str, str], Tuple[str, Tuple[str, ...]]] = {}
    wildcard: Dict[Tuple[str, str], Tuple[str, Optional[str]]] = {}
    for line in transitions:
        (letter, state, top), (target, *rest) = split_arrow(line, 3, 1)
        _declared(line, state, states, "state")
        _declared(line, target, states, "state")
        if letter not in alphabet.letters:
            raise line.error(f"{letter!r} is not a letter")
        if top != WILDCARD:
            _declared(line, top, symbols, "stack symbol")
        kind = alphabet.kind(letter)
        pushed: Optional[str] = None
        if kind == "call":
            if len(rest) != 2 or rest[0] != "push":
                raise line.error("a call transition needs 'push SYMBOL'")
            pushed = rest[1]
            _declared(line, pushed, symbols, "stack symbol")
        elif rest:
            raise line.error(f"a {kind} transition pushes nothing")
        if top == WILDCARD:
            if (letter, state) in wildcard:
                raise line.error("transition given twice")
            wildcard[(letter, state)] = (target, pushed)
        else:
            if (letter, state, top) in explicit:
                raise line.error("transition given twice")
            explicit[(letter, state, top)] = (
                target,
                _emitted(kind, pushed, top),
            )

    sink: Optional[Tuple[str, Optional[str]]] = None
    if "sink" in found:
        sink_line = found["sink"]
        args = sink_line.args
        if len(args) not in (1, 3) or (len(args) == 3 and args[1] != "push"):
            raise sink_line.error("expected 'sink STATE [push SYMBOL]'")
        _declared(sink_line, args[0], states, "state")
        if len(args) == 3:
            _declared(sink_line, args[2], symbols, "stack symbol")
        sink = (args[0], args[2] if len(args) == 3 else None)

    delta: Dict[Tuple[str, str, str], Tuple[str, Tuple[str, ...]]] = {}
    for letter in alphabet.letters:
        kind = alphabet.kind(letter)
        for state in states:
            for top in symbols:
                key = (letter, state, top)
                if key in explicit:
                    delta[key] = explicit[key]
                elif (letter, state) in wildcard:
                    target, pushed = wildcard[(letter, state)]
                    delta[key] = (target, _emitted(kind, pushed, top))
                elif sink is not None:
                    target, pushed = sink
                    if kind == "call" and pushed is None:
                        raise ParseError(
                            last, "the sink needs a push symbol for calls"
                        )
                    delta[key] = (target, _emitted(kind, pushed, top))
    try:
        return VPA(
            alphabet=alphabet,
            states=states,
            initial=initial,
            stack_symbols=symbols,
            bottom=bottom,
            delta=delta,
            final=frozenset(final),
        )
    except MalformedAutomaton as error:
        raise ParseError(last, str(error)) from error


def _emitted(kind: str, pushed: Optional[str], top: str) -> Tuple[str, ...]:
    if kind == "call":
        assert pushed is not None
        return (pushed, top)
    if kind == "return":
        return ()
    return (top,)


def dump_vpa(M: VPA) -> str:
    """The .vpa text of an automaton with every transition listed."""
    lines = [
        format_alphabet(M.alphabet),
        f"states {' '.join(M.states)}",
        f"initial {M.initial}",
        f"stack {' '.join(M.stack_symbols)}",
        f"bottom {M.bottom}",
        " ".join(["final", *sorted(M.final)]),
    ]
    for letter in M.alphabet.letters:
        for state in M.states:
            for top in M.stack_symbols:
                target, emitted = M.delta[(letter, state, top)]
                push = (
                    f" push {emitted[0]}"
                    if M.alphabet.kind(letter) == "call"
                    else ""
                )
                lines.append(
                    f"transition {letter} {state} {top} {ARROW} {target}{push}"
                )
    return "\n".join(lines) + "\n"


def parse_vca(text: str) -> VCA:
    """Parses a VCA document.

    :raises ParseError: for a malformed document or automaton.
    """
    cursor = LineCursor(text)
    found: Dict[str, Line] = {}
    deltas: List[Line] = []
    for line in cursor:
        if line.keyword == "delta":
            deltas.append(line)
        elif line.keyword in (
            "alphabet",
            "states",
            "initial",
            "final",
            "threshold",
            "sink",
        ):
            _single(found, line)
        else:
            raise line.error(f"unknown keyword {line.keyword!r}")
    last = cursor.last_number
    alphabet = parse_alphabet(require(found, "alphabet", last))
    states_line = require(found, "states", last)
    check_names(states_line, states_line.args)
    states = states_line.args
    initial_line = require(found, "initial", last)
    initial = _one_arg(initial_line)
    _declared(initial_line, initial, states, "state")
    final_line = found.get("final")
    final = final_line.args if final_line else ()
    for name in final:
        _declared(final_line, name, states, "state")
    threshold_line = require(found, "threshold", last)
    try:
        threshold = int(_one_arg(threshold_line))
    except ValueError as error:
        raise threshold_line.error("threshold must be an integer") from error
    if threshold < 0:
        raise threshold_line.error("threshold must be non-negative")
    sink: Optional[str] = None
    if "sink" in found:
        sink = _one_arg(found["sink"])
        _declared(found["sink"], sink, states, "state")

    explicit: Dict[Tuple[int, str, str], str] = {}
    wildcard: Dict[Tuple[str, str], str] = {}
    for line in deltas:
        (level, letter, state), (target, *rest) = split_arrow(line, 3, 1)
        if rest:
            raise line.error(f"expected one state after {ARROW!r}")
        _declared(line, state, states, "state")
        _declared(line, target, states, "state")
        if letter not in alphabet.letters:
            raise line.error(f"{letter!r} is not a letter")
        if level == WILDCARD:
            if (letter, state) in wildcard:
                raise line.error("transition given twice")
            wildcard[(letter, state)] = target
            continue
        if not level.isdigit() or int(level) > threshold:
            raise line.error(f"level must be {WILDCARD} or 0..{threshold}")
        if (int(level), letter, state) in explicit:
            raise line.error("transition given twice")
        explicit[(int(level), letter, state)] = target

    tables: List[Dict[Tuple[str, str], str]] = []
    for level in range(threshold + 1):
        table: Dict[Tuple[str, str], str] = {}
        for letter in alphabet.letters:
            for state in states:
                target = explicit.get(
                    (level, letter, state), wildcard.get((letter, state), sink)
                )
                if target is not None:
                    table[(letter, state)] = target
        tables.append(table)
    try:
        return VCA(
            alphabet=alphabet,
            states=states,
            initial=initial,
            final=frozenset(final),
            threshold=threshold,
            deltas=tuple(tables),
        )
    except MalformedAutomaton as error:
        raise ParseError(last, str(error)) from error


def dump_vca(M: VCA) -> str:
    lines = [
        format_alphabet(M.alphabet),
        f"states {' '.join(M.states)}",
        f"initial {M.initial}",
        " ".join(["final", *sorted(M.final)]),
        f"threshold {M.threshold}",
    ]
    for level, delta in enumerate(M.deltas):
        for letter in M.alphabet.letters:
            for state in M.states:
                lines.append(
                    f"delta {level} {letter} {state} {ARROW}"
                    f" {delta[(letter, state)]}"
                )
    return "\n".join(lines) + "\n"


def load_vpa(path: str) -> VPA:
    logger.debug("Reading VPA %s", {"path": path})
    with open(path, "r", encoding="utf-8") as vpa_file:
        return parse_vpa(vpa_file.read())


def load_vca(path: str) -> VCA:
    logger.debug("Reading VCA %s", {"path": path})
    with open(path, "r", encoding="utf-8") as vca_file:
        return parse_vca(vca_file.read())


def load_alphabet(path: str) -> PushdownAlphabet:
    """Reads a file holding a single alphabet line."""
    with open(path, "r", encoding="utf-8") as alphabet_file:
        cursor = LineCursor(alphabet_file.read())
    lines = list(cursor)
    if len(lines) != 1 or lines[0].keyword != "alphabet":
        raise ParseError(
            lines[0].number if lines else 0,
            "expected a single 'alphabet' line",
        )
    return parse_alphabet(lines[0])
