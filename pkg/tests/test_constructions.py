import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import AB, recognizers

from extalgebra.algebra.compare import (
    DivisionWitness,
    NoWitnessFound,
    are_isomorphic,
    divides,
    find_isomorphism,
)
from extalgebra.algebra.constructions import (
    coarsest_congruence,
    complement,
    direct_product,
    generated_subalgebra,
    product_projections,
    product_spec,
    quotient,
    syntactic_quotient,
)
from extalgebra.algebra.morphism import RecognizerSpec, accepts
from extalgebra.algebra.tables import (
    ExtAlgebra,
    one_element_algebra,
    validate_algebra,
)
from extalgebra.config.local import PACKAGE_ROOT
from extalgebra.core import enumerate_well_matched
from extalgebra.errors import NotACongruence, SizeCapExceeded
from extalgebra.formats.recognizer import load_recognizer

FIXTURES = PACKAGE_ROOT / "fixtures"


@pytest.fixture(scope="module")
def anbn() -> RecognizerSpec:
    return load_recognizer(str(FIXTURES / "anbn.alg"))


@pytest.fixture(scope="module")
def hplus() -> RecognizerSpec:
    return load_recognizer(str(FIXTURES / "hplus.alg"))


def permuted(R: ExtAlgebra, perm) -> ExtAlgebra:
    """R with element x renamed to perm[x] and the operations reversed."""
    inverse = [0] * R.size
    for x, y in enumerate(perm):
        inverse[y] = x
    tables = [
        tuple(perm[table[inverse[y]]] for y in range(R.size))
        for table in reversed(R.op_tables)
    ]
    return ExtAlgebra(
        element_names=tuple(
            R.element_names[inverse[y]] for y in range(R.size)
        ),
        identity=perm[R.identity],
        mult=tuple(
            tuple(
                perm[R.mult[inverse[y]][inverse[z]]] for z in range(R.size)
            )
            for y in range(R.size)
        ),
        op_tables=tuple(tables),
        op_names=tuple(reversed(R.op_names)),
        identity_op=R.op_count - 1 - R.identity_op,
    )


def test_direct_product(anbn, hplus):
    product = direct_product(anbn.algebra, hplus.algebra)
    assert product.size == 6
    assert product.op_count == 16
    assert validate_algebra(product) == []
    first, second = product_projections(anbn.algebra, hplus.algebra)
    for x in range(product.size):
        for y in range(product.size):
            xy = product.mult[x][y]
            assert first.elements[xy] == anbn.algebra.mult[
                first.elements[x]
            ][first.elements[y]]
            assert second.elements[xy] == hplus.algebra.mult[
                second.elements[x]
            ][second.elements[y]]


def test_product_recognizes_intersection_and_union(anbn, hplus):
    both = product_spec(anbn, hplus)
    either = product_spec(anbn, hplus, union=True)
    for w in enumerate_well_matched(AB, 8):
        assert accepts(both, w) == (accepts(anbn, w) and accepts(hplus, w))
        assert accepts(either, w) == (accepts(anbn, w) or accepts(hplus, w))


def test_product_needs_one_alphabet(anbn):
    lml = load_recognizer(str(FIXTURES / "lml.alg"))
    with pytest.raises(ValueError):
        product_spec(anbn, lml)


def test_complement(anbn):
    flipped = complement(anbn)
    assert accepts(flipped, "abab")
    assert not accepts(flipped, "aabb")


def test_quotient_by_congruence(anbn):
    merged, projection = quotient(anbn.algebra, [[0], [1, 2]])
    assert merged.size == 2
    assert merged.op_count == 2
    assert projection.elements == (0, 1, 1)
    assert validate_algebra(merged) == []


def test_quotient_rejects_incompatible_partition(anbn):
    with pytest.raises(NotACongruence) as caught:
        quotient(anbn.algebra, [[0, 1], [2]])
    assert caught.value.op == anbn.algebra.op_names.index("ext_x1")
    assert (caught.value.x, caught.value.y) == (0, 1)


def test_coarsest_congruence(anbn):
    tables = anbn.algebra.op_tables
    assert coarsest_congruence(3, {0, 1}, tables) == [[0], [1], [2]]
    assert coarsest_congruence(3, {0, 1, 2}, tables) == [[0, 1, 2]]


def test_syntactic_quotient_of_minimal_recognizer(anbn):
    minimal, projection = syntactic_quotient(anbn)
    assert minimal.algebra.size == 3
    assert projection.elements == (0, 1, 2)


def test_generated_subalgebra_of_square(anbn):
    square = product_spec(anbn, anbn)
    ext = square.morphism.ext_image[("a", "b")]
    sub, embedding, _ = generated_subalgebra(
        square.algebra, [square.algebra.identity], [ext]
    )
    assert sub.size == 3
    assert len(embedding) == 3
    assert are_isomorphic(sub, anbn.algebra)


def test_isomorphism_recovers_permutation(anbn):
    perm = (2, 0, 1)
    assert find_isomorphism(anbn.algebra, permuted(anbn.algebra, perm)) == (
        perm
    )


def test_non_isomorphic(anbn, hplus):
    separation = load_recognizer(str(FIXTURES / "separation.alg"))
    assert not are_isomorphic(anbn.algebra, hplus.algebra)
    assert not are_isomorphic(hplus.algebra, separation.algebra)
    with pytest.raises(SizeCapExceeded):
        find_isomorphism(anbn.algebra, anbn.algebra, cap=2)


def test_trivial_algebra_divides_everything(anbn):
    witness = divides(one_element_algebra(), anbn.algebra)
    assert isinstance(witness, DivisionWitness)
    assert witness.sub_elements == (0, 1, 2)
    assert witness.congruence == ((0, 1, 2),)


def test_larger_algebra_cannot_divide(anbn):
    result = divides(anbn.algebra, one_element_algebra())
    assert result == NoWitnessFound(exhaustive=True, subalgebras_tried=0)


def test_quotients_and_factors_divide(anbn, hplus):
    merged, _ = quotient(anbn.algebra, [[0], [1, 2]])
    assert isinstance(divides(merged, anbn.algebra), DivisionWitness)
    product = direct_product(anbn.algebra, hplus.algebra)
    assert isinstance(divides(anbn.algebra, product), DivisionWitness)


def test_division_miss_is_exhaustive_only_for_small_targets(anbn, hplus):
    # Every operation of a^n b^n fixes 0, so none induces the negation
    bounded = divides(hplus.algebra, anbn.algebra, max_generators=1)
    assert isinstance(bounded, NoWitnessFound)
    assert not bounded.exhaustive
    full = divides(hplus.algebra, anbn.algebra, max_generators=4)
    assert isinstance(full, NoWitnessFound)
    assert full.exhaustive


def subsets(size: int):
    return st.frozensets(st.integers(0, size - 1))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_quotient_projection_is_a_morphism(data):
    R = data.draw(recognizers(), label="recognizer").algebra
    blocks = coarsest_congruence(
        R.size, data.draw(subsets(R.size)), R.op_tables
    )
    Q, projection = quotient(R, blocks)
    elements, operations = projection
    assert validate_algebra(Q) == []
    assert set(elements) == set(range(Q.size))
    assert set(operations) == set(range(Q.op_count))
    assert elements[R.identity] == Q.identity
    for x in range(R.size):
        for y in range(R.size):
            assert elements[R.mult[x][y]] == Q.mult[elements[x]][elements[y]]
        for op, table in enumerate(R.op_tables):
            assert elements[table[x]] == (
                Q.op_tables[operations[op]][elements[x]]
            )


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_syntactic_quotient_is_minimal_and_keeps_the_language(data):
    base = data.draw(recognizers(), label="recognizer")
    spec = RecognizerSpec(
        base.morphism, data.draw(subsets(base.algebra.size))
    )
    minimal, _ = syntactic_quotient(spec)
    again, projection = syntactic_quotient(minimal)
    assert are_isomorphic(again.algebra, minimal.algebra)
    assert projection.elements == tuple(range(minimal.algebra.size))
    for w in enumerate_well_matched(spec.alphabet, 10):
        assert accepts(minimal, w) == accepts(spec, w)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_generated_subalgebras_are_valid(data):
    R = data.draw(recognizers(), label="recognizer").algebra
    elements = data.draw(subsets(R.size))
    ops = data.draw(subsets(R.op_count))
    sub, embedding, op_embedding = generated_subalgebra(R, elements, ops)
    assert validate_algebra(sub) == []
    assert set(elements) <= set(embedding)
    for i in range(sub.size):
        for j in range(sub.size):
            assert embedding[sub.mult[i][j]] == (
                R.mult[embedding[i]][embedding[j]]
            )
        for position, op in enumerate(op_embedding):
            assert embedding[sub.op_tables[position][i]] == (
                R.op_tables[op][embedding[i]]
            )
