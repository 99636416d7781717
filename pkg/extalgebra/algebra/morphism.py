"""Morphisms from well-matched words into a finite Ext-algebra."""

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Set, Tuple, Union

from extalgebra.algebra.tables import ExtAlgebra
from extalgebra.core import Context, PushdownAlphabet, is_well_matched
from extalgebra.errors import MalformedTables, NotWellMatched
from extalgebra.types import Table, Word

# Block images and the unmatched letters between them, outermost first
Profile = Tuple[Tuple[int, ...], Tuple[str, ...]]


@dataclass(frozen=True)
class Morphism:
    """A morphism ψ from the free Ext-algebra of well-matched words.

    By freeness it is determined by the image of every internal letter and
    the image of ext_{a,b} for every call a and return b.
    """

    target: ExtAlgebra
    alphabet: PushdownAlphabet
    internal_image: Mapping[str, int]
    ext_image: Mapping[Tuple[str, str], int]

    def __post_init__(self):
        for letter in self.alphabet.internals:
            image = self.internal_image.get(letter)
            if image is None or not 0 <= image < self.target.size:
                raise MalformedTables(
                    f"Internal letter {letter!r} has no valid image"
                )
        for call in self.alphabet.calls:
            for ret in self.alphabet.returns:
                image = self.ext_image.get((call, ret))
                if image is None or not 0 <= image < self.target.op_count:
                    raise MalformedTables(
                        f"Pair ({call}, {ret}) has no valid operation image"
                    )

    def ext_table(self, call: str, ret: str) -> Table:
        return self.target.op_tables[self.ext_image[(call, ret)]]


@dataclass(frozen=True)
class RecognizerSpec:
    """A morphism plus an accepting set: recognizes ψ⁻¹(accepting)."""

    morphism: Morphism
    accepting: FrozenSet[int]

    def __post_init__(self):
        if any(not 0 <= x < self.algebra.size for x in self.accepting):
            raise MalformedTables("Accepting set refers to unknown elements")

    @property
    def algebra(self) -> ExtAlgebra:
        return self.morphism.target

    @property
    def alphabet(self) -> PushdownAlphabet:
        return self.morphism.alphabet


def _morphism(spec: Union[RecognizerSpec, Morphism]) -> Morphism:
    return spec.morphism if isinstance(spec, RecognizerSpec) else spec


def evaluate(spec: Union[RecognizerSpec, Morphism], w: Word) -> int:
    """The image ψ(w) of a well-matched word."""
    morphism = _morphism(spec)
    alphabet = morphism.alphabet
    if not is_well_matched(alphabet, w):
        raise NotWellMatched(w)
    algebra = morphism.target
    mult = algebra.mult
    current = algebra.identity
    pending: List[Tuple[int, str]] = []
    for letter in w:
        kind = alphabet.kind(letter)
        if kind == "internal":
            current = mult[current][morphism.internal_image[letter]]
        elif kind == "call":
            pending.append((current, letter))
            current = algebra.identity
        else:
            saved, call = pending.pop()
            current = mult[saved][morphism.ext_table(call, letter)[current]]
    return current


def accepts(spec: RecognizerSpec, w: Word) -> bool:
    return evaluate(spec, w) in spec.accepting


def split_left(alphabet: PushdownAlphabet, u: Word) -> Tuple[List[Word], str]:
    """Splits u as w0 a1 w1 ... ak wk around its unmatched calls.

    Returns the well-matched blocks w0..wk and the calls a1..ak.
    """
    open_calls: List[int] = []
    for position, letter in enumerate(u):
        kind = alphabet.kind(letter)
        if kind == "call":
            open_calls.append(position)
        elif kind == "return":
            if not open_calls:
                raise NotWellMatched(u)
            open_calls.pop()
    bounds = [-1] + open_calls + [len(u)]
    blocks = [u[bounds[i] + 1 : bounds[i + 1]] for i in range(len(bounds) - 1)]
    return blocks, "".join(u[position] for position in open_calls)


def split_right(
    alphabet: PushdownAlphabet, v: Word
) -> Tuple[List[Word], str]:
    """Splits v as wk' bk ... b1 w0' around its unmatched returns.

    Returns the blocks w0'..wk' and the returns b1..bk, so that block i and
    return i line up with block i and call i of split_left.
    """
    depth = 0
    unmatched: List[int] = []
    for position, letter in enumerate(v):
        kind = alphabet.kind(letter)
        if kind == "call":
            depth += 1
        elif kind == "return":
            if depth == 0:
                unmatched.append(position)
            else:
                depth -= 1
    if depth != 0:
        raise NotWellMatched(v)
    bounds = [-1] + unmatched + [len(v)]
    blocks = [v[bounds[i] + 1 : bounds[i + 1]] for i in range(len(bounds) - 1)]
    returns = "".join(v[position] for position in unmatched)
    return blocks[::-1], returns[::-1]


def left_profile(morphism: Morphism, u: Word) -> Profile:
    """The images of u's blocks, with its unmatched calls."""
    blocks, calls = split_left(morphism.alphabet, u)
    return tuple(evaluate(morphism, block) for block in blocks), tuple(calls)


def right_profile(morphism: Morphism, v: Word) -> Profile:
    """The images of v's blocks, with its unmatched returns."""
    blocks, returns = split_right(morphism.alphabet, v)
    return (
        tuple(evaluate(morphism, block) for block in blocks),
        tuple(returns),
    )


def profile_table(morphism: Morphism, left: Profile, right: Profile) -> Table:
    """The transformation ψ(ext_{u,v}) for the given profiles of u and v.

    The innermost blocks act first; each unmatched call/return pair then
    applies its ext image, then the next blocks outwards.
    """
    left_blocks, calls = left
    right_blocks, returns = right
    if len(calls) != len(returns):
        raise ValueError("Profiles of different heights do not pair up")
    mult = morphism.target.mult
    depth = len(calls)
    ext_tables = [
        morphism.ext_table(call, ret) for call, ret in zip(calls, returns)
    ]
    table = []
    for x in range(morphism.target.size):
        y = mult[mult[left_blocks[depth]][x]][right_blocks[depth]]
        for level in range(depth - 1, -1, -1):
            y = ext_tables[level][y]
            y = mult[mult[left_blocks[level]][y]][right_blocks[level]]
        table.append(y)
    return tuple(table)


def context_table(morphism: Morphism, ctx: Context) -> Table:
    return profile_table(
        morphism,
        left_profile(morphism, ctx.left),
        right_profile(morphism, ctx.right),
    )


def context_op(morphism: Morphism, ctx: Context) -> int:
    """The index of ψ(ext_{u,v}) in O(R).

    :raises ClosureViolation: when the composed table is missing, which
    only happens for an algebra that is not closed.
    """
    return morphism.target.lookup_op(context_table(morphism, ctx))


def image_elements(morphism: Morphism) -> List[int]:
    """The carrier of the subalgebra generated by ψ, i.e. ψ(WM), sorted."""
    algebra = morphism.target
    mult = algebra.mult
    ext_tables = {
        morphism.ext_table(call, ret)
        for call in morphism.alphabet.calls
        for ret in morphism.alphabet.returns
    }
    start = [algebra.identity] + [
        morphism.internal_image[letter]
        for letter in morphism.alphabet.internals
    ]
    seen: Set[int] = set()
    order: List[int] = []
    queue = list(start)
    while queue:
        x = queue.pop()
        if x in seen:
            continue
        seen.add(x)
        order.append(x)
        for y in order:
            queue.append(mult[x][y])
            queue.append(mult[y][x])
        for table in ext_tables:
            queue.append(table[x])
    return sorted(seen)


def compose_morphism(
    morphism: Morphism,
    target: ExtAlgebra,
    element_map: Tuple[int, ...],
    op_map: Dict[int, int],
) -> Morphism:
    """Follows ψ with a map onto another algebra given on indices."""
    return Morphism(
        target=target,
        alphabet=morphism.alphabet,
        internal_image={
            letter: element_map[image]
            for letter, image in morphism.internal_image.items()
        },
        ext_image={
            pair: op_map[image] for pair, image in morphism.ext_image.items()
        },
    )
