"""Isomorphism and division of finite Ext-algebras by bounded search."""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterator,
    List,
    Optional,
    Set,
    Tuple,
    Union,
)

from extalgebra.algebra.constructions import generated_subalgebra
from extalgebra.algebra.tables import ExtAlgebra
from extalgebra.errors import SizeCapExceeded
from extalgebra.types import Table

logger = logging.getLogger(__name__)

SEARCH_CAP = 64
DIVISION_GENERATORS = 2
DIVISION_NODES = 200000


def _refine_colours(
    algebras: Tuple[ExtAlgebra, ...]
) -> List[List[int]]:
    """Isomorphism-invariant colourings of several algebras at once.

    Colours are computed with a shared palette so that they can be compared
    across algebras: an isomorphism can only map an element to an element
    of the same colour.
    """

    def initial(R: ExtAlgebra, x: int) -> Tuple[int, ...]:
        return (
            int(x == R.identity),
            int(R.mult[x][x] == x),
            sum(1 for table in R.op_tables if table[x] == x),
            sum(1 for table in R.op_tables for y in table if y == x),
            sum(1 for row in R.mult for y in row if y == x),
        )

    def relabel(signatures: List[List[tuple]]) -> List[List[int]]:
        distinct = sorted({s for row in signatures for s in row})
        palette = {s: colour for colour, s in enumerate(distinct)}
        return [[palette[s] for s in row] for row in signatures]

    def neighbourhood(R: ExtAlgebra, colour: List[int], x: int) -> tuple:
        products = (
            (colour[y], colour[R.mult[x][y]], colour[R.mult[y][x]])
            for y in range(R.size)
        )
        return colour[x], tuple(sorted(products))

    colours = relabel(
        [[initial(R, x) for x in range(R.size)] for R in algebras]
    )
    count = len({c for per_algebra in colours for c in per_algebra})
    while True:
        colours = relabel(
            [
                [neighbourhood(R, colour, x) for x in range(R.size)]
                for R, colour in zip(algebras, colours)
            ]
        )
        refined = len({c for per_algebra in colours for c in per_algebra})
        if refined == count:
            return colours
        count = refined


def _respects_mult(
    R: ExtAlgebra, S: ExtAlgebra, mapping: List[int]
) -> bool:
    """Whether a complete element map is a monoid morphism."""
    return all(
        mapping[R.mult[x][z]] == S.mult[mapping[x]][mapping[z]]
        for x in range(R.size)
        for z in range(R.size)
    )


def find_isomorphism(
    R: ExtAlgebra, S: ExtAlgebra, cap: int = SEARCH_CAP
) -> Optional[Tuple[int, ...]]:
    """A bijection from R's elements to S's that is an isomorphism.

    It sends identity to identity, respects multiplication and maps the set
    of operation tables of R onto that of S. Returns None when there is no
    such bijection.

    :raises SizeCapExceeded: when either carrier is larger than cap.
    """
    if max(R.size, S.size) > cap:
        raise SizeCapExceeded("Isomorphism search carrier", cap)
    if R.size != S.size or R.op_count != S.op_count:
        return None
    colour_r, colour_s = _refine_colours((R, S))
    if sorted(colour_r) != sorted(colour_s):
        return None

    n = R.size
    by_colour: Dict[int, List[int]] = {}
    for y in range(n):
        by_colour.setdefault(colour_s[y], []).append(y)
    # Most constrained elements first
    order = sorted(range(n), key=lambda x: (len(by_colour[colour_r[x]]), x))
    s_tables: Set[Table] = set(S.op_tables)
    mapping = [-1] * n
    used = [False] * n

    def consistent(x: int) -> bool:
        fx = mapping[x]
        for z in range(n):
            fz = mapping[z]
            if fz == -1:
                continue
            for product, image in (
                (R.mult[x][z], S.mult[fx][fz]),
                (R.mult[z][x], S.mult[fz][fx]),
            ):
                if mapping[product] != -1 and mapping[product] != image:
                    return False
        return True

    def operations_match() -> bool:
        if not _respects_mult(R, S, mapping):
            return False
        inverse = [0] * n
        for x, y in enumerate(mapping):
            inverse[y] = x
        for table in R.op_tables:
            image = tuple(mapping[table[inverse[y]]] for y in range(n))
            if image not in s_tables:
                return False
        return True

    def extend(depth: int) -> bool:
        if depth == n:
            return operations_match()
        x = order[depth]
        for y in by_colour[colour_r[x]]:
            if used[y]:
                continue
            mapping[x] = y
            used[y] = True
            if consistent(x) and extend(depth + 1):
                return True
            mapping[x] = -1
            used[y] = False
        return False

    if colour_r[R.identity] != colour_s[S.identity]:
        return None
    mapping[R.identity] = S.identity
    used[S.identity] = True
    order.remove(R.identity)
    order.insert(0, R.identity)
    if not consistent(R.identity) or not extend(1):
        return None
    return tuple(mapping)


def are_isomorphic(
    R: ExtAlgebra, S: ExtAlgebra, cap: int = SEARCH_CAP
) -> bool:
    return find_isomorphism(R, S, cap) is not None


@dataclass(frozen=True)
class DivisionWitness:
    """R is a quotient of the subalgebra of S generated by these indices.

    The congruence is given as blocks of S-element indices, and projection
    maps each element of the subalgebra (an S index) to an element of R.
    """

    element_generators: Tuple[int, ...]
    op_generators: Tuple[int, ...]
    sub_elements: Tuple[int, ...]
    congruence: Tuple[Tuple[int, ...], ...]
    projection: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class NoWitnessFound:
    """No division was found; exhaustive says whether that is conclusive."""

    exhaustive: bool
    subalgebras_tried: int


DivisionResult = Union[DivisionWitness, NoWitnessFound]


class _Budget:
    """Counts search nodes and stops the search when spent."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        self.spent = False

    def step(self) -> bool:
        self.nodes -= 1
        if self.nodes < 0:
            self.spent = True
        return not self.spent


def _surjection_onto(
    T: ExtAlgebra, R: ExtAlgebra, budget: _Budget
) -> Optional[Tuple[int, ...]]:
    """A surjective morphism of Ext-algebras from T onto R, if one exists."""
    n = T.size
    r_tables = set(R.op_tables)
    mapping = [-1] * n
    mapping[T.identity] = R.identity
    order = [x for x in range(n) if x != T.identity]

    def consistent(x: int) -> bool:
        fx = mapping[x]
        for z in range(n):
            fz = mapping[z]
            if fz == -1:
                continue
            for product, image in (
                (T.mult[x][z], R.mult[fx][fz]),
                (T.mult[z][x], R.mult[fz][fx]),
            ):
                if mapping[product] != -1 and mapping[product] != image:
                    return False
        return True

    def operations_match() -> bool:
        if len(set(mapping)) != R.size:
            return False
        if not _respects_mult(T, R, mapping):
            return False
        induced: Set[Table] = set()
        for table in T.op_tables:
            image = [-1] * R.size
            for x in range(n):
                target = mapping[table[x]]
                if image[mapping[x]] not in (-1, target):
                    return False
                image[mapping[x]] = target
            induced.add(tuple(image))
        return induced == r_tables

    def extend(depth: int) -> bool:
        if not budget.step():
            return False
        if depth == len(order):
            return operations_match()
        x = order[depth]
        for y in range(R.size):
            mapping[x] = y
            if consistent(x) and extend(depth + 1):
                return True
        mapping[x] = -1
        return False

    if not consistent(T.identity) or not extend(0):
        return None
    return tuple(mapping)


def _generator_sets(
    S: ExtAlgebra, max_generators: int
) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """S itself, then element and operation subsets by increasing size."""
    yield tuple(range(S.size)), tuple(range(S.op_count))
    for total in range(2 * max_generators + 1):
        for element_count in range(min(total, max_generators) + 1):
            op_count = total - element_count
            if op_count > max_generators:
                continue
            for elements in combinations(range(S.size), element_count):
                for ops in combinations(range(S.op_count), op_count):
                    yield elements, ops


def divides(
    R: ExtAlgebra,
    S: ExtAlgebra,
    max_generators: int = DIVISION_GENERATORS,
    max_nodes: int = DIVISION_NODES,
    cap: int = SEARCH_CAP,
) -> DivisionResult:
    """Searches for R as a quotient of a subalgebra of S.

    S itself is tried first, then the subalgebras generated by up to
    max_generators elements together with up to max_generators operations
    of S, smallest generator sets first. Every generated subalgebra and
    every morphism search node costs one unit of max_nodes.

    A NoWitnessFound is exhaustive only when the cardinalities rule
    division out, or when S has at most max_generators elements and at
    most max_generators operations, so that the generator sets reach every
    subalgebra, and the node budget was never spent. For larger S a miss
    is inconclusive however much budget remains.
    """
    if max(R.size, S.size) > cap:
        raise SizeCapExceeded("Division search carrier", cap)
    if R.size > S.size or R.op_count > S.op_count:
        return NoWitnessFound(exhaustive=True, subalgebras_tried=0)

    budget = _Budget(max_nodes)
    seen: Set[Tuple[FrozenSet[int], FrozenSet[Table]]] = set()
    tried = 0
    complete = S.size <= max_generators and S.op_count <= max_generators

    for elements, ops in _generator_sets(S, max_generators):
        if not budget.step():
            break
        T, embedding, op_embedding = generated_subalgebra(S, elements, ops)
        key = (
            frozenset(embedding),
            frozenset(
                tuple(S.op_tables[op][x] for x in embedding)
                for op in op_embedding
            ),
        )
        if key in seen:
            continue
        seen.add(key)
        if T.size < R.size or T.op_count < R.op_count:
            continue
        tried += 1
        surjection = _surjection_onto(T, R, budget)
        if surjection is not None:
            blocks: Dict[int, List[int]] = {}
            for x, image in enumerate(surjection):
                blocks.setdefault(image, []).append(embedding[x])
            logger.info(
                "Found division witness %s",
                {"subalgebra_size": T.size, "tried": tried},
            )
            return DivisionWitness(
                element_generators=tuple(elements),
                op_generators=tuple(ops),
                sub_elements=embedding,
                congruence=tuple(
                    tuple(block)
                    for block in sorted(blocks.values(), key=min)
                ),
                projection=tuple(
                    (embedding[x], image)
                    for x, image in enumerate(surjection)
                ),
            )
        if budget.spent:
            break

    # Every subalgebra is generated by its own elements and operations, so
    # the generator sets cover all of them only when S is this small
    exhaustive = not budget.spent and complete
    logger.info(
        "No division witness %s", {"tried": tried, "exhaustive": exhaustive}
    )
    return NoWitnessFound(exhaustive=exhaustive, subalgebras_tried=tried)
