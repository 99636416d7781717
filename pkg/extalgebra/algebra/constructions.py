"""Direct products, subalgebras, quotients and syntactic minimization."""

import logging
from typing import (
    Collection,
    Dict,
    FrozenSet,
    Iterable,
    List,
    NamedTuple,
    Sequence,
    Set,
    Tuple,
)

from extalgebra.algebra.morphism import (
    Morphism,
    RecognizerSpec,
    compose_morphism,
)
from extalgebra.algebra.tables import (
    CLOSURE_CAP,
    ExtAlgebra,
    close_operations,
    identity_table,
)
from extalgebra.errors import NotACongruence
from extalgebra.types import Table

logger = logging.getLogger(__name__)


class Projection(NamedTuple):
    """A surjection between algebras, on element and operation indices."""

    elements: Tuple[int, ...]
    operations: Tuple[int, ...]


def direct_product(R: ExtAlgebra, S: ExtAlgebra) -> ExtAlgebra:
    """The product algebra R × S with componentwise operations.

    Element (r, s) has index r·|S| + s and operation (e, f) has index
    e·|O(S)| + f. Products of an operation of R and one of S already form a
    composition-closed set, so no further closure is needed.
    """
    n_s = S.size
    names = tuple(
        f"({r},{s})" for r in R.element_names for s in S.element_names
    )
    pairs = [(r, s) for r in range(R.size) for s in range(n_s)]
    mult = tuple(
        tuple(
            R.mult[r][r2] * n_s + S.mult[s][s2] for r2, s2 in pairs
        )
        for r, s in pairs
    )
    op_tables = tuple(
        tuple(e[r] * n_s + f[s] for r, s in pairs)
        for e in R.op_tables
        for f in S.op_tables
    )
    op_names = tuple(
        f"({e},{f})" for e in R.op_names for f in S.op_names
    )
    return ExtAlgebra(
        element_names=names,
        identity=R.identity * n_s + S.identity,
        mult=mult,
        op_tables=op_tables,
        op_names=op_names,
        identity_op=R.identity_op * S.op_count + S.identity_op,
    )


def product_projections(
    R: ExtAlgebra, S: ExtAlgebra
) -> Tuple[Projection, Projection]:
    """The two canonical projections out of direct_product(R, S)."""
    n_s, m_s = S.size, S.op_count
    elements = range(R.size * n_s)
    operations = range(R.op_count * m_s)
    return (
        Projection(
            tuple(x // n_s for x in elements),
            tuple(op // m_s for op in operations),
        ),
        Projection(
            tuple(x % n_s for x in elements),
            tuple(op % m_s for op in operations),
        ),
    )


def product_spec(
    first: RecognizerSpec, second: RecognizerSpec, union: bool = False
) -> RecognizerSpec:
    """Recognizes the intersection (or union) of two languages."""
    if first.alphabet != second.alphabet:
        raise ValueError("Recognizers are over different alphabets")
    R, S = first.algebra, second.algebra
    product = direct_product(R, S)
    left, right = first.morphism, second.morphism
    morphism = Morphism(
        target=product,
        alphabet=first.alphabet,
        internal_image={
            letter: image * S.size + right.internal_image[letter]
            for letter, image in left.internal_image.items()
        },
        ext_image={
            pair: image * S.op_count + right.ext_image[pair]
            for pair, image in left.ext_image.items()
        },
    )
    accepting = frozenset(
        r * S.size + s
        for r in range(R.size)
        for s in range(S.size)
        if (
            (r in first.accepting or s in second.accepting)
            if union
            else (r in first.accepting and s in second.accepting)
        )
    )
    return RecognizerSpec(morphism, accepting)


def complement(spec: RecognizerSpec) -> RecognizerSpec:
    """Recognizes the well-matched words that spec rejects."""
    return RecognizerSpec(
        spec.morphism,
        frozenset(range(spec.algebra.size)) - spec.accepting,
    )


def _close_op_indices(R: ExtAlgebra, ops: Set[int]) -> Set[int]:
    """Closes a set of R's operations under composition."""
    closed = set(ops)
    queue = list(ops)
    while queue:
        op = queue.pop()
        for other in list(closed):
            for product in (R.compose(op, other), R.compose(other, op)):
                index = R.lookup_op(product)
                if index not in closed:
                    closed.add(index)
                    queue.append(index)
    return closed


def generated_subalgebra(
    R: ExtAlgebra, element_gens: Iterable[int], op_gens: Iterable[int]
) -> Tuple[ExtAlgebra, Tuple[int, ...], Tuple[int, ...]]:
    """The smallest subalgebra of R containing the given generators.

    Returns the subalgebra, its element embedding (sub index to R index)
    and its operation embedding (sub op index to the index in R of one
    operation restricting to it).
    """
    elements: Set[int] = {R.identity, *element_gens}
    ops: Set[int] = {R.identity_op, *op_gens}
    while True:
        translations = {
            R.lookup_op(table)
            for r in elements
            for table in (R.left_translation(r), R.right_translation(r))
        }
        ops = _close_op_indices(R, ops | translations)
        grown = set(elements)
        queue = list(elements)
        while queue:
            x = queue.pop()
            for op in ops:
                y = R.op_tables[op][x]
                if y not in grown:
                    grown.add(y)
                    queue.append(y)
        if grown == elements:
            break
        elements = grown

    carrier = sorted(elements)
    position = {x: index for index, x in enumerate(carrier)}
    mult = tuple(
        tuple(position[R.mult[x][y]] for y in carrier) for x in carrier
    )
    tables: List[Table] = []
    embedding: List[int] = []
    seen: Dict[Table, int] = {}
    for op in sorted(ops):
        table = tuple(position[R.op_tables[op][x]] for x in carrier)
        if table not in seen:
            seen[table] = len(tables)
            tables.append(table)
            embedding.append(op)
    sub = ExtAlgebra(
        element_names=tuple(R.element_names[x] for x in carrier),
        identity=position[R.identity],
        mult=mult,
        op_tables=tuple(tables),
        op_names=tuple(R.op_names[op] for op in embedding),
        identity_op=seen[identity_table(len(carrier))],
    )
    logger.debug(
        "Generated subalgebra %s",
        {"elements": sub.size, "operations": sub.op_count},
    )
    return sub, tuple(carrier), tuple(embedding)


def _canonical_blocks(
    size: int, partition: Iterable[Collection[int]]
) -> Tuple[List[List[int]], List[int]]:
    """Sorts a partition by least element; checks that it covers 0..size-1."""
    block_of = [-1] * size
    blocks = sorted(
        (sorted(block) for block in partition if block), key=lambda b: b[0]
    )
    for index, block in enumerate(blocks):
        for x in block:
            if not 0 <= x < size or block_of[x] != -1:
                raise ValueError(f"Element {x} is not covered exactly once")
            block_of[x] = index
    if -1 in block_of:
        raise ValueError(f"Element {block_of.index(-1)} is not covered")
    return blocks, block_of


def quotient_tables(
    element_names: Sequence[str],
    identity: int,
    mult: Sequence[Table],
    partition: Iterable[Collection[int]],
    tables: Sequence[Table],
    op_names: Sequence[str],
    close: bool = False,
    cap: int = CLOSURE_CAP,
) -> Tuple[ExtAlgebra, Projection]:
    """Builds the quotient of a monoid and a set of maps by a partition.

    Every map must respect the partition (NotACongruence otherwise). With
    close=False the maps are taken to be all of O(R); with close=True they
    are only generators and the induced maps are closed under composition.
    """
    blocks, block_of = _canonical_blocks(len(element_names), partition)
    for op, table in enumerate(tables):
        for block in blocks:
            target = block_of[table[block[0]]]
            for x in block[1:]:
                if block_of[table[x]] != target:
                    raise NotACongruence(op, block[0], x)

    reps = [block[0] for block in blocks]
    quotient_mult = tuple(
        tuple(block_of[mult[x][y]] for y in reps) for x in reps
    )
    induced = [tuple(block_of[table[x]] for x in reps) for table in tables]
    if close:
        closed = close_operations(len(reps), induced, cap)
    else:
        closed = list(dict.fromkeys(induced))
    index = {table: position for position, table in enumerate(closed)}
    names: List[str] = []
    named: Set[str] = set()
    first_source: Dict[Table, int] = {}
    for source, table in enumerate(induced):
        first_source.setdefault(table, source)
    for position, table in enumerate(closed):
        source = first_source.get(table)
        name = op_names[source] if source is not None else f"op{position}"
        while name in named:
            name += "'"
        named.add(name)
        names.append(name)
    algebra = ExtAlgebra(
        element_names=tuple(element_names[x] for x in reps),
        identity=block_of[identity],
        mult=quotient_mult,
        op_tables=tuple(closed),
        op_names=tuple(names),
        identity_op=index[identity_table(len(reps))],
    )
    projection = Projection(
        tuple(block_of), tuple(index[table] for table in induced)
    )
    return algebra, projection


def quotient(
    R: ExtAlgebra, partition: Iterable[Collection[int]]
) -> Tuple[ExtAlgebra, Projection]:
    """The quotient R/∼ by a congruence given as a partition.

    :raises NotACongruence: with an operation and two equivalent elements
    it sends to different blocks.
    """
    return quotient_tables(
        R.element_names,
        R.identity,
        R.mult,
        partition,
        R.op_tables,
        R.op_names,
    )


def coarsest_congruence(
    size: int, accepting: Collection[int], tables: Sequence[Table]
) -> List[List[int]]:
    """The coarsest partition separating accepting from rejecting elements
    that every table respects.

    Moore-style refinement: x and y stay together iff for every product e
    of the tables, e(x) and e(y) are both accepting or both rejecting.
    """
    classes = [1 if x in accepting else 0 for x in range(size)]
    count = len(set(classes))
    while True:
        signatures: Dict[Tuple[int, ...], int] = {}
        refined = []
        for x in range(size):
            signature = (classes[x],) + tuple(
                classes[table[x]] for table in tables
            )
            refined.append(signatures.setdefault(signature, len(signatures)))
        classes = refined
        if len(signatures) == count:
            break
        count = len(signatures)
    blocks: Dict[int, List[int]] = {}
    for x, label in enumerate(classes):
        blocks.setdefault(label, []).append(x)
    return sorted(blocks.values(), key=lambda block: block[0])


def project_spec(
    spec: RecognizerSpec, algebra: ExtAlgebra, projection: Projection
) -> RecognizerSpec:
    """Pushes a recognizer along a surjection onto another algebra."""
    morphism = compose_morphism(
        spec.morphism,
        algebra,
        projection.elements,
        dict(enumerate(projection.operations)),
    )
    accepting: FrozenSet[int] = frozenset(
        projection.elements[x] for x in spec.accepting
    )
    return RecognizerSpec(morphism, accepting)


def syntactic_quotient(
    spec: RecognizerSpec,
) -> Tuple[RecognizerSpec, Projection]:
    """The minimal recognizer of the language of spec.

    Elements x and y are merged iff every operation sends both into or both
    out of the accepting set.
    """
    R = spec.algebra
    blocks = coarsest_congruence(R.size, spec.accepting, R.op_tables)
    try:
        algebra, projection = quotient(R, blocks)
    except NotACongruence as error:
        raise AssertionError(
            "Syntactic relation is not a congruence; is O(R) closed?"
        ) from error
    logger.info(
        "Computed syntactic quotient %s",
        {"elements": R.size, "classes": algebra.size},
    )
    return project_spec(spec, algebra, projection), projection
