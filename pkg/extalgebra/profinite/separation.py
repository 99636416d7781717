"""Enumerating morphisms into a finite Ext-algebra and separating words."""

import logging
from itertools import product
from typing import Iterator, NamedTuple, Optional

from extalgebra.algebra.morphism import Morphism, evaluate
from extalgebra.algebra.tables import ExtAlgebra
from extalgebra.core import PushdownAlphabet, is_well_matched
from extalgebra.errors import NotWellMatched, SizeCapExceeded
from extalgebra.types import Word

logger = logging.getLogger(__name__)

MORPHISM_CAP = 4096


def count_morphisms(R: ExtAlgebra, alphabet: PushdownAlphabet) -> int:
    """By freeness: one element per internal letter, one op per pair."""
    pairs = len(alphabet.calls) * len(alphabet.returns)
    return R.size ** len(alphabet.internals) * R.op_count**pairs


def enumerate_morphisms(
    R: ExtAlgebra, alphabet: PushdownAlphabet, cap: int = MORPHISM_CAP
) -> Iterator[Morphism]:
    """Every morphism from the well-matched words into R.

    Images are enumerated lexicographically by index, internal letters
    first, then call/return pairs ordered by call and then by return.

    :raises SizeCapExceeded: when there are more than cap morphisms.
    """
    total = count_morphisms(R, alphabet)
    if total > cap:
        raise SizeCapExceeded("Morphism enumeration", cap)
    internals = alphabet.internals
    pairs = list(product(alphabet.calls, alphabet.returns))
    choices = [range(R.size)] * len(internals) + [range(R.op_count)] * len(
        pairs
    )
    for images in product(*choices):
        yield Morphism(
            target=R,
            alphabet=alphabet,
            internal_image=dict(zip(internals, images[: len(internals)])),
            ext_image=dict(zip(pairs, images[len(internals) :])),
        )


class Separation(NamedTuple):
    """Whether some morphism tells the two words apart."""

    separated: bool
    witness: Optional[Morphism]
    tried: int


def separates(
    R: ExtAlgebra,
    alphabet: PushdownAlphabet,
    x: Word,
    y: Word,
    cap: int = MORPHISM_CAP,
) -> Separation:
    """Searches for a morphism ψ into R with ψ(x) != ψ(y).

    A negative answer is exhaustive: every morphism was tried.
    """
    for word in (x, y):
        if not is_well_matched(alphabet, word):
            raise NotWellMatched(word)
    tried = 0
    for morphism in enumerate_morphisms(R, alphabet, cap):
        tried += 1
        if evaluate(morphism, x) != evaluate(morphism, y):
            logger.info("Found separating morphism %s", {"tried": tried})
            return Separation(True, morphism, tried)
    logger.info("No separating morphism %s", {"tried": tried})
    return Separation(False, None, tried)
