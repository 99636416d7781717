from itertools import product

import pytest
from hypothesis import given
from strategies import AB, ABC, close_word, well_matched_words, words

from extalgebra.core import (
    Context,
    PushdownAlphabet,
    apply_context,
    enumerate_contexts,
    enumerate_well_matched,
    format_word,
    is_well_matched,
    parse_word,
    prefix_minimum,
    stack_height,
)
from extalgebra.errors import InvalidLetter, MalformedAlphabet, NotWellMatched


def test_alphabet_letter_order():
    alphabet = PushdownAlphabet(("a", "c"), ("b", "d"), ("e",))
    assert alphabet.letters == ("a", "c", "b", "d", "e")
    assert alphabet.kind("d") == "return"
    assert alphabet.height("a") == 1
    assert alphabet.height("e") == 0
    assert alphabet.rank("ca") < alphabet.rank("ba")


def test_alphabet_rejects_overlap_and_reserved():
    with pytest.raises(MalformedAlphabet):
        PushdownAlphabet(("a",), ("a",))
    with pytest.raises(MalformedAlphabet):
        PushdownAlphabet(("a",), ("-",))
    with pytest.raises(MalformedAlphabet):
        PushdownAlphabet(("ab",), ("c",))


def test_well_matched():
    assert is_well_matched(AB, "")
    assert is_well_matched(AB, "ab")
    assert is_well_matched(AB, "aabbab")
    assert not is_well_matched(AB, "ba")
    assert not is_well_matched(AB, "a")
    assert not is_well_matched(AB, "abb")
    with pytest.raises(InvalidLetter):
        is_well_matched(AB, "abx")


def test_heights():
    assert stack_height(ABC, "aacb") == 1
    assert prefix_minimum(ABC, "bba") == -2
    assert prefix_minimum(ABC, "") == 0


def test_words_on_the_command_line():
    assert parse_word(AB, "-") == ""
    assert parse_word(AB, "abab") == "abab"
    assert format_word("") == "-"
    with pytest.raises(InvalidLetter):
        parse_word(AB, "abc")


def test_enumerate_small():
    assert enumerate_well_matched(AB, 4) == ["", "ab", "aabb", "abab"]


def test_enumerate_catalan_counts():
    catalan = [1, 1, 2, 5, 14, 42]
    found = enumerate_well_matched(AB, 10)
    assert len(found) == sum(catalan)
    for k, count in enumerate(catalan):
        assert len([w for w in found if len(w) == 2 * k]) == count


def test_enumerate_rejects_negative_length():
    with pytest.raises(ValueError):
        enumerate_well_matched(AB, -1)


def test_context_order():
    found = [(ctx.left, ctx.right) for ctx in enumerate_contexts(AB, 2)]
    assert found == [("", ""), ("ab", ""), ("", "ab"), ("a", "b")]


def test_context_checks_and_composes():
    with pytest.raises(NotWellMatched):
        Context(AB, "b", "a")
    outer = Context(AB, "a", "b")
    inner = Context(ABC, "ac", "b")
    assert outer.compose(Context(AB, "a", "b")) == Context(AB, "aa", "bb")
    assert outer.height == 1
    assert str(Context(AB, "", "ab")) == "(-,ab)"
    assert apply_context(inner, "c") == "accb"
    with pytest.raises(NotWellMatched):
        apply_context(inner, "a")


@given(words(ABC))
def test_well_matched_matches_heights(word):
    expected = (
        prefix_minimum(ABC, word) == 0 and stack_height(ABC, word) == 0
    )
    assert is_well_matched(ABC, word) == expected


@given(well_matched_words(ABC, max_size=4))
def test_closed_words_are_enumerated(word):
    assert is_well_matched(ABC, word)
    assert word in enumerate_well_matched(ABC, len(word))


def test_close_word_helper():
    assert close_word(AB, list("baab")) == "aabb"


C = PushdownAlphabet((), (), ("c",))


def test_internal_only_alphabet_is_a_free_monoid():
    assert enumerate_well_matched(C, 2) == ["", "c", "cc"]
    assert all(is_well_matched(C, w) for w in ("", "c", "ccc"))


def test_contexts_of_small_total_length():
    assert enumerate_contexts(AB, 1) == [Context(AB, "", "")]
    assert enumerate_contexts(ABC, 0) == [Context(ABC, "", "")]


@pytest.mark.parametrize("alphabet", [AB, ABC, C])
def test_enumeration_matches_brute_force(alphabet):
    expected = [
        "".join(letters)
        for length in range(9)
        for letters in product(alphabet.letters, repeat=length)
        if is_well_matched(alphabet, "".join(letters))
    ]
    assert enumerate_well_matched(alphabet, 8) == expected
