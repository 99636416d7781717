from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import (
    AB,
    ABC,
    finite_monoids,
    recognizers,
    stacks,
    vpas,
    well_matched_words,
)

from extalgebra.algebra.compare import are_isomorphic
from extalgebra.algebra.constructions import syntactic_quotient
from extalgebra.algebra.morphism import RecognizerSpec, accepts, evaluate
from extalgebra.algebra.tables import validate_algebra
from extalgebra.automata import VPA, vca_to_vpa, vpa_accepts, vpa_run
from extalgebra.config.local import PACKAGE_ROOT
from extalgebra.core import enumerate_well_matched
from extalgebra.errors import MalformedAutomaton, MalformedTables
from extalgebra.formats.automaton import load_vca, load_vpa
from extalgebra.formats.monoid import load_monoid
from extalgebra.formats.recognizer import load_recognizer
from extalgebra.translate import (
    FiniteMonoid,
    ext_algebra_to_vpa,
    monoid_to_ext_algebra,
    transition_monoid,
    vpa_to_ext_algebra,
    vpa_to_syntactic_spec,
)

FIXTURES = PACKAGE_ROOT / "fixtures"


@pytest.fixture(scope="module")
def anbn() -> RecognizerSpec:
    return load_recognizer(str(FIXTURES / "anbn.alg"))


@pytest.fixture(scope="module")
def anbn_vpa() -> VPA:
    return load_vpa(str(FIXTURES / "anbn.vpa"))


@pytest.fixture(scope="module")
def lml_vpa() -> VPA:
    """Words of S -> aScb | acSb | empty, by a deterministic VPA."""
    return load_vpa(str(FIXTURES / "lml.vpa"))


def test_vpa_to_ext_algebra_recognizes_the_same_language(anbn_vpa):
    spec = vpa_to_ext_algebra(anbn_vpa)
    for w in enumerate_well_matched(AB, 10):
        assert accepts(spec, w) == vpa_accepts(anbn_vpa, w)


def test_quotient_of_behaviours_is_syntactic(anbn, anbn_vpa):
    minimal, _ = syntactic_quotient(vpa_to_ext_algebra(anbn_vpa))
    assert minimal.algebra.size == 3
    assert minimal.algebra.op_count == 4
    assert are_isomorphic(minimal.algebra, anbn.algebra)


def test_direct_syntactic_translation(anbn, anbn_vpa):
    spec = vpa_to_syntactic_spec(anbn_vpa)
    assert are_isomorphic(spec.algebra, anbn.algebra)


def test_lml_syntactic_algebra(lml_vpa):
    lml = load_recognizer(str(FIXTURES / "lml.alg"))
    spec = vpa_to_syntactic_spec(lml_vpa)
    assert spec.algebra.size == 5
    assert are_isomorphic(spec.algebra, lml.algebra)
    for w in enumerate_well_matched(ABC, 8):
        expected = vpa_accepts(lml_vpa, w)
        assert accepts(spec, w) == expected
        assert accepts(lml, w) == expected


def test_counter_automaton_through_vpa(anbn):
    astarbstar = load_vca(str(FIXTURES / "astarbstar.vca"))
    spec = vpa_to_syntactic_spec(vca_to_vpa(astarbstar))
    assert are_isomorphic(spec.algebra, anbn.algebra)


def test_ext_algebra_to_vpa(anbn):
    M = ext_algebra_to_vpa(anbn)
    assert len(M.states) == 3
    assert len(M.stack_symbols) == 4
    for w in enumerate_well_matched(AB, 10):
        assert vpa_accepts(M, w) == accepts(anbn, w)


def test_lml_round_trip_through_vpa():
    lml = load_recognizer(str(FIXTURES / "lml.alg"))
    M = ext_algebra_to_vpa(lml)
    assert are_isomorphic(vpa_to_syntactic_spec(M).algebra, lml.algebra)


def test_monoid_must_be_a_monoid():
    with pytest.raises(MalformedTables):
        FiniteMonoid(
            element_names=("1", "x"),
            identity=0,
            mult=((0, 1), (0, 0)),
            letter_image={},
        )


def test_parity_monoid():
    document = load_monoid(str(FIXTURES / "parity.monoid"))
    spec = monoid_to_ext_algebra(
        document.monoid, document.alphabet, document.accepting
    )
    assert spec.algebra.size == 2
    assert spec.algebra.op_count == 2
    assert accepts(spec, "acbc")
    assert not accepts(spec, "acb")


def test_transition_monoid():
    astarbstar = load_vca(str(FIXTURES / "astarbstar.vca"))
    monoid, accepting = transition_monoid(astarbstar)
    assert monoid.element_names == ("1", "a", "b", "ab", "ba")
    assert accepting == frozenset({0, 1, 2, 3})
    assert monoid.image("aab") == 3


def test_transition_monoid_feeds_the_monoid_construction(anbn):
    astarbstar = load_vca(str(FIXTURES / "astarbstar.vca"))
    monoid, accepting = transition_monoid(astarbstar)
    spec = monoid_to_ext_algebra(monoid, astarbstar.alphabet, accepting)
    for w in enumerate_well_matched(AB, 10):
        assert accepts(spec, w) == accepts(anbn, w)
    minimal, _ = syntactic_quotient(spec)
    assert are_isomorphic(minimal.algebra, anbn.algebra)


def test_transition_monoid_needs_threshold_zero():
    astarbstar = load_vca(str(FIXTURES / "astarbstar.vca"))
    delta = astarbstar.deltas[0]
    raised = replace(astarbstar, threshold=1, deltas=(delta, delta))
    with pytest.raises(MalformedAutomaton):
        transition_monoid(raised)


@settings(max_examples=50, deadline=None)
@given(vpas(ABC, max_states=2, max_symbols=1))
def test_behaviour_algebra_of_random_automata(M: VPA):
    spec = vpa_to_ext_algebra(M)
    assert validate_algebra(spec.algebra) == []
    for w in enumerate_well_matched(ABC, 8):
        assert accepts(spec, w) == vpa_accepts(M, w)
    syntactic = vpa_to_syntactic_spec(M)
    assert validate_algebra(syntactic.algebra) == []
    minimal, _ = syntactic_quotient(spec)
    assert are_isomorphic(syntactic.algebra, minimal.algebra)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_algebra_automaton_multiplies_the_state(data):
    spec = data.draw(recognizers(), label="recognizer")
    M = ext_algebra_to_vpa(spec)
    names = spec.algebra.element_names
    w = data.draw(well_matched_words(spec.alphabet, max_size=8))
    q = data.draw(st.integers(0, spec.algebra.size - 1))
    stack = data.draw(stacks(M.stack_symbols[1:]))
    expected = names[spec.algebra.mult[q][evaluate(spec, w)]]
    assert vpa_run(M, w, names[q], stack) == (expected, stack)


@settings(max_examples=50, deadline=None)
@given(finite_monoids(ABC, max_size=4), st.data())
def test_monoid_recognizers_are_valid(monoid: FiniteMonoid, data):
    accepting = data.draw(st.frozensets(st.integers(0, monoid.size - 1)))
    spec = monoid_to_ext_algebra(monoid, ABC, accepting)
    assert validate_algebra(spec.algebra) == []
    for w in enumerate_well_matched(ABC, 6):
        assert evaluate(spec, w) == spec.algebra.element_index[
            monoid.element_names[monoid.image(w)]
        ]
