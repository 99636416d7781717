"""Bounded searches for counterexamples to the ω-equations.

Two schemas are built in. The counter equation states that for contexts
(u, v) and (u', v') of equal height

    [u,v]*([u',v']*(x)) = [u,v]*([u,v']*([u',v']*(x)))
                        = [u,v]*([u',v]*([u',v']*(x)))

and the threshold-zero equation that

    [u,v]*([u,v']*(x) y [u',v]*(z)) = [u,v']*(x) y [u',v]*(z).

Contexts range over all contexts up to a length bound and x, y, z over the
image of the morphism. A counterexample refutes the equation for the
recognized language; finding none is not a proof that it holds.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from extalgebra.algebra.morphism import (
    Morphism,
    Profile,
    RecognizerSpec,
    image_elements,
    left_profile,
    profile_table,
    right_profile,
)
from extalgebra.core import Context, enumerate_contexts
from extalgebra.profinite.separation import MORPHISM_CAP, enumerate_morphisms
from extalgebra.profinite.terms import (
    Concat,
    ExtOmega,
    Term,
    Var,
    eval_profinite_term,
    omega_chain,
    table_omega,
    term_variables,
)
from extalgebra.types import MorphismMode, Table

logger = logging.getLogger(__name__)

BATCH_SIZE = 64

B = TypeVar("B")


@dataclass(frozen=True)
class Satisfied:
    """No counterexample exists within the bounds that were searched."""

    equation: str
    max_context_len: Optional[int]
    morphism_mode: MorphismMode
    contexts: int
    context_pairs: int
    domain_size: int
    morphisms: int


@dataclass(frozen=True)
class Counterexample:
    """An instance of the equation whose sides evaluate differently.

    contexts is ((u, v), (u', v')) for the built-in schemas and empty for
    a user-supplied term pair. sides names the two members of the equation
    that differ.
    """

    equation: str
    contexts: Tuple[Context, ...]
    assignment: Mapping[str, int]
    left: int
    right: int
    sides: Tuple[str, str]
    left_term: Term
    right_term: Term
    morphism: Morphism


EquationCheckResult = Union[Satisfied, Counterexample]


@dataclass(frozen=True)
class _ContextEntry:
    context: Context
    left: Profile
    right: Profile
    height: int


def _distinct_contexts(
    morphism: Morphism, max_context_len: int
) -> List[_ContextEntry]:
    """Contexts in enumeration order, dropping those whose block images
    repeat an earlier context's."""
    entries: List[_ContextEntry] = []
    seen = set()
    for context in enumerate_contexts(morphism.alphabet, max_context_len):
        left = left_profile(morphism, context.left)
        right = right_profile(morphism, context.right)
        if (left, right) in seen:
            continue
        seen.add((left, right))
        entries.append(_ContextEntry(context, left, right, len(left[1])))
    return entries


class _OmegaTables:
    """The ω-power of ext_{u,v'} for the left part of one context entry and
    the right part of another, computed on demand."""

    def __init__(self, morphism: Morphism, entries: Sequence[_ContextEntry]):
        self.morphism = morphism
        self.entries = entries
        self.cache: Dict[Tuple[int, int], Table] = {}

    def __call__(self, i: int, j: int) -> Table:
        key = (i, j)
        if key not in self.cache:
            self.cache[key] = table_omega(
                profile_table(
                    self.morphism,
                    self.entries[i].left,
                    self.entries[j].right,
                )
            )
        return self.cache[key]


def _batches(items: Sequence[B], size: int) -> List[Sequence[B]]:
    return [
        items[start : start + size] for start in range(0, len(items), size)
    ]


def _first_in_order(
    batches: Sequence[B],
    run: Callable[[B], Tuple[Optional[Counterexample], int]],
    workers: int,
) -> Tuple[Optional[Counterexample], int]:
    """Runs the batches and keeps the result of the earliest batch that
    found a counterexample, whatever order they finish in."""

    def earliest(
        results: Iterator[Tuple[Optional[Counterexample], int]]
    ) -> Tuple[Optional[Counterexample], int]:
        checked = 0
        for found, count in results:
            checked += count
            if found is not None:
                return found, checked
        return None, checked

    if workers <= 1:
        return earliest(map(run, batches))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run, batch) for batch in batches]
        found, checked = earliest(future.result() for future in futures)
        if found is not None:
            # Later batches cannot change the answer
            cancelled = sum(future.cancel() for future in futures)
            logger.debug(
                "Cancelled pending batches %s",
                {"cancelled": cancelled, "batches": len(futures)},
            )
        return found, checked


def _vcl_counterexample(
    morphism: Morphism,
    u_v: Context,
    inner: Context,
    side: str,
    x: int,
    values: Tuple[int, int],
) -> Counterexample:
    alphabet = morphism.alphabet
    if side == "middle":
        cross = Context(alphabet, u_v.left, inner.right)
    else:
        cross = Context(alphabet, inner.left, u_v.right)
    return Counterexample(
        equation="vcl",
        contexts=(u_v, inner),
        assignment={"x": x},
        left=values[0],
        right=values[1],
        sides=("left", side),
        left_term=omega_chain([u_v, inner], Var("x")),
        right_term=omega_chain([u_v, cross, inner], Var("x")),
        morphism=morphism,
    )


def _search_vcl(
    morphism: Morphism,
    entries: Sequence[_ContextEntry],
    domain: Sequence[int],
    workers: int,
    batch_size: int,
) -> Tuple[Optional[Counterexample], int]:
    by_height: Dict[int, List[int]] = {}
    for index, entry in enumerate(entries):
        by_height.setdefault(entry.height, []).append(index)

    def run(batch: Sequence[int]) -> Tuple[Optional[Counterexample], int]:
        omega = _OmegaTables(morphism, entries)
        checked = 0
        for i in batch:
            first = omega(i, i)
            for j in by_height[entries[i].height]:
                checked += 1
                second = omega(j, j)
                middle = omega(i, j)
                right = omega(j, i)
                for x in domain:
                    base = second[x]
                    value = first[base]
                    for side, cross in (("middle", middle), ("right", right)):
                        other = first[cross[base]]
                        if other != value:
                            found = _vcl_counterexample(
                                morphism,
                                entries[i].context,
                                entries[j].context,
                                side,
                                x,
                                (value, other),
                            )
                            return found, checked
        return None, checked

    return _first_in_order(
        _batches(range(len(entries)), batch_size), run, workers
    )


def _search_zero_vcl(
    morphism: Morphism,
    entries: Sequence[_ContextEntry],
    domain: Sequence[int],
    workers: int,
    batch_size: int,
) -> Tuple[Optional[Counterexample], int]:
    mult = morphism.target.mult
    size = morphism.target.size
    by_height: Dict[int, List[int]] = {}
    for index, entry in enumerate(entries):
        by_height.setdefault(entry.height, []).append(index)

    def run(batch: Sequence[int]) -> Tuple[Optional[Counterexample], int]:
        omega = _OmegaTables(morphism, entries)
        checked = 0
        for i in batch:
            outer = omega(i, i)
            moved = [t for t in range(size) if outer[t] != t]
            for j in by_height[entries[i].height]:
                checked += 1
                if not moved:
                    continue
                before = omega(i, j)
                after = omega(j, i)
                hit = _zero_vcl_witness(mult, outer, before, after, domain)
                if hit is None:
                    continue
                x, y, z, value = hit
                alphabet = morphism.alphabet
                u_v = entries[i].context
                inner = entries[j].context
                middle = Concat(
                    Concat(
                        ExtOmega(
                            Context(alphabet, u_v.left, inner.right), Var("x")
                        ),
                        Var("y"),
                    ),
                    ExtOmega(
                        Context(alphabet, inner.left, u_v.right), Var("z")
                    ),
                )
                return (
                    Counterexample(
                        equation="vcl0",
                        contexts=(u_v, inner),
                        assignment={"x": x, "y": y, "z": z},
                        left=outer[value],
                        right=value,
                        sides=("left", "right"),
                        left_term=ExtOmega(u_v, middle),
                        right_term=middle,
                        morphism=morphism,
                    ),
                    checked,
                )
        return None, checked

    return _first_in_order(
        _batches(range(len(entries)), batch_size), run, workers
    )


def _zero_vcl_witness(
    mult: Sequence[Table],
    outer: Table,
    before: Table,
    after: Table,
    domain: Sequence[int],
) -> Optional[Tuple[int, int, int, int]]:
    """The first (x, y, z) whose middle value the outer ω-power moves."""
    for x in domain:
        left = before[x]
        for y in domain:
            partial = mult[left][y]
            for z in domain:
                value = mult[partial][after[z]]
                if outer[value] != value:
                    return x, y, z, value
    return None


def _morphisms(
    spec: RecognizerSpec, morphism_mode: MorphismMode, cap: int
) -> Iterator[Morphism]:
    if morphism_mode == "canonical":
        yield spec.morphism
    elif morphism_mode == "all":
        yield from enumerate_morphisms(spec.algebra, spec.alphabet, cap)
    else:
        raise ValueError(f"Unknown morphism mode {morphism_mode!r}")


def _check_schema(
    equation: str,
    search: Callable[..., Tuple[Optional[Counterexample], int]],
    spec: RecognizerSpec,
    max_context_len: int,
    morphism_mode: MorphismMode,
    workers: int,
    batch_size: int,
    cap: int,
) -> EquationCheckResult:
    logger.info(
        "Checking equation %s",
        {
            "equation": equation,
            "max_context_len": max_context_len,
            "mode": morphism_mode,
        },
    )
    pairs = 0
    contexts = 0
    domain_size = 0
    morphisms = 0
    for morphism in _morphisms(spec, morphism_mode, cap):
        morphisms += 1
        entries = _distinct_contexts(morphism, max_context_len)
        domain = image_elements(morphism)
        contexts = max(contexts, len(entries))
        domain_size = max(domain_size, len(domain))
        found, checked = search(
            morphism, entries, domain, workers, batch_size
        )
        pairs += checked
        if found is not None:
            logger.info(
                "Found counterexample %s",
                {
                    "equation": equation,
                    "contexts": [str(c) for c in found.contexts],
                    "pairs": pairs,
                },
            )
            return found
    logger.info(
        "No counterexample within bounds %s",
        {"equation": equation, "pairs": pairs, "morphisms": morphisms},
    )
    return Satisfied(
        equation=equation,
        max_context_len=max_context_len,
        morphism_mode=morphism_mode,
        contexts=contexts,
        context_pairs=pairs,
        domain_size=domain_size,
        morphisms=morphisms,
    )


def check_vcl_equation(
    spec: RecognizerSpec,
    max_context_len: int,
    morphism_mode: MorphismMode = "canonical",
    workers: int = 1,
    batch_size: int = BATCH_SIZE,
    cap: int = MORPHISM_CAP,
) -> EquationCheckResult:
    """Searches for a counterexample to the counter equation.

    Context pairs are visited in enumeration order, and for each pair and
    x the middle member is compared before the right one.
    """
    return _check_schema(
        "vcl",
        _search_vcl,
        spec,
        max_context_len,
        morphism_mode,
        workers,
        batch_size,
        cap,
    )


def check_zero_vcl_equation(
    spec: RecognizerSpec,
    max_context_len: int,
    morphism_mode: MorphismMode = "canonical",
    workers: int = 1,
    batch_size: int = BATCH_SIZE,
    cap: int = MORPHISM_CAP,
) -> EquationCheckResult:
    """Searches for a counterexample to the threshold-zero equation."""
    return _check_schema(
        "vcl0",
        _search_zero_vcl,
        spec,
        max_context_len,
        morphism_mode,
        workers,
        batch_size,
        cap,
    )


def check_term_equation(
    spec: RecognizerSpec,
    left: Term,
    right: Term,
    morphism_mode: MorphismMode = "canonical",
    cap: int = MORPHISM_CAP,
) -> EquationCheckResult:
    """Compares two terms under every assignment of their variables.

    Variables range over the image of the morphism, in name order, with
    assignments enumerated lexicographically by element index.
    """
    names = sorted(term_variables(left) | term_variables(right))
    morphisms = 0
    domain_size = 0
    assignments = 0
    for morphism in _morphisms(spec, morphism_mode, cap):
        morphisms += 1
        domain = image_elements(morphism)
        domain_size = max(domain_size, len(domain))
        for values in product(domain, repeat=len(names)):
            assignments += 1
            assignment = dict(zip(names, values))
            left_value = eval_profinite_term(morphism, left, assignment)
            right_value = eval_profinite_term(morphism, right, assignment)
            if left_value != right_value:
                logger.info(
                    "Terms differ %s",
                    {"assignment": assignment, "tried": assignments},
                )
                return Counterexample(
                    equation="term",
                    contexts=(),
                    assignment=assignment,
                    left=left_value,
                    right=right_value,
                    sides=("left", "right"),
                    left_term=left,
                    right_term=right,
                    morphism=morphism,
                )
    return Satisfied(
        equation="term",
        max_context_len=None,
        morphism_mode=morphism_mode,
        contexts=0,
        context_pairs=0,
        domain_size=domain_size,
        morphisms=morphisms,
    )


def reverify(spec: RecognizerSpec, counterexample: Counterexample) -> bool:
    """Re-evaluates both terms of a counterexample from scratch.

    True iff they reproduce the recorded values and those differ.
    """
    if counterexample.morphism.target != spec.algebra:
        return False
    left = eval_profinite_term(
        counterexample.morphism,
        counterexample.left_term,
        counterexample.assignment,
    )
    right = eval_profinite_term(
        counterexample.morphism,
        counterexample.right_term,
        counterexample.assignment,
    )
    return (
        left == counterexample.left
        and right == counterexample.right
        and left != right
    )
