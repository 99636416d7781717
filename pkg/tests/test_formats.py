import pytest

from extalgebra.algebra.morphism import accepts
from extalgebra.config.local import PACKAGE_ROOT
from extalgebra.errors import ParseError, ValidationError
from extalgebra.formats.automaton import (
    dump_vca,
    dump_vpa,
    load_alphabet,
    load_vca,
    load_vpa,
    parse_vca,
    parse_vpa,
)
from extalgebra.formats.monoid import dump_monoid, load_monoid, parse_monoid
from extalgebra.formats.recognizer import (
    dump_recognizer,
    load_recognizer,
    parse_recognizer,
)

FIXTURES = PACKAGE_ROOT / "fixtures"

ANBN = """\
alphabet calls=a returns=b internals=
elements 1 x 0
identity 1
mult
1 x 0
x 0 {cell}
0 0 0
op ext = x x 0
extmap a b -> ext
accept 1 x
"""


def test_small_document_is_completed():
    loaded = parse_recognizer(ANBN.format(cell="0"))
    algebra = loaded.spec.algebra
    assert algebra.size == 3
    assert algebra.op_count == 4
    assert loaded.closure is not None
    assert loaded.closure["identity_added"]
    assert loaded.closure["translations"] == ["L[x]", "L[0]"]
    assert accepts(loaded.spec, "aabb")


def test_undeclared_element_is_reported_by_line():
    with pytest.raises(ParseError) as caught:
        parse_recognizer(ANBN.format(cell="y"))
    assert caught.value.line == 6
    assert "undeclared element 'y'" in str(caught.value)


def test_missing_declarations():
    with pytest.raises(ParseError, match="no extmap"):
        parse_recognizer(ANBN.format(cell="0").replace("extmap", "#"))
    with pytest.raises(ParseError, match="unknown keyword"):
        parse_recognizer("alphabet calls=a returns=b\nstates p\n")
    with pytest.raises(ParseError, match="missing 'mult'"):
        parse_recognizer(
            "alphabet calls=a returns=b\nelements 1\nidentity 1\n"
        )


def test_strict_loading_skips_completion():
    text = (FIXTURES / "lml.alg").read_text(encoding="utf-8")
    with pytest.raises(ValidationError) as caught:
        parse_recognizer(text, complete=False)
    kinds = [violation["kind"] for violation in caught.value.report]
    assert "left_translation" in kinds


def test_repeated_table_is_an_alias():
    spec = load_recognizer(str(FIXTURES / "hplus.alg"))
    names = spec.algebra.op_names
    assert "ext_a2b2" not in names
    assert names[spec.algebra.identity_op] == "id"


@pytest.mark.parametrize(
    "fixture",
    [
        "anbn.alg",
        "hplus.alg",
        "lml.alg",
        "anbncmdm.alg",
        "separation.alg",
    ],
)
def test_recognizer_dump_reloads(fixture):
    spec = load_recognizer(str(FIXTURES / fixture))
    reloaded = parse_recognizer(dump_recognizer(spec))
    assert reloaded.spec == spec
    assert reloaded.closure == {
        "translations": [],
        "compositions": [],
        "identity_added": False,
    }


def test_vpa_dump_reloads():
    for fixture in ("anbn.vpa", "lml.vpa"):
        M = load_vpa(str(FIXTURES / fixture))
        assert parse_vpa(dump_vpa(M)) == M


def test_vpa_errors():
    text = (FIXTURES / "anbn.vpa").read_text(encoding="utf-8")
    with pytest.raises(ParseError):
        parse_vpa(text.replace("-> P push A", "-> P"))
    with pytest.raises(ParseError):
        parse_vpa(text.replace("sink D push A\n", ""))
    with pytest.raises(ParseError, match="unknown keyword"):
        parse_vpa(text + "threshold 0\n")


def test_vca_dump_reloads():
    M = load_vca(str(FIXTURES / "astarbstar.vca"))
    assert M.threshold == 0
    assert parse_vca(dump_vca(M)) == M


def test_vca_errors():
    text = (FIXTURES / "astarbstar.vca").read_text(encoding="utf-8")
    with pytest.raises(ParseError, match="threshold"):
        parse_vca(text.replace("threshold 0", "threshold -1"))
    with pytest.raises(ParseError, match="level"):
        parse_vca(text + "delta 1 a A -> A\n")


def test_monoid_dump_reloads():
    document = load_monoid(str(FIXTURES / "parity.monoid"))
    assert document.monoid.image("cc") == document.monoid.identity
    dumped = dump_monoid(
        document.monoid, document.alphabet, document.accepting
    )
    assert parse_monoid(dumped) == document


def test_alphabet_file():
    alphabet = load_alphabet(str(FIXTURES / "ab.alphabet"))
    assert alphabet.calls == ("a",)
    assert alphabet.returns == ("b",)
    assert alphabet.internals == ()
