"""Finite Ext-algebras stored as explicit tables."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from extalgebra.errors import (
    ClosureViolation,
    MalformedTables,
    SizeCapExceeded,
)
from extalgebra.types import ClosureReport, Table, ValidationReport

logger = logging.getLogger(__name__)

CLOSURE_CAP = 4096


def identity_table(size: int) -> Table:
    return tuple(range(size))


def compose_tables(outer: Table, inner: Table) -> Table:
    """The transformation x ↦ outer(inner(x))."""
    return tuple(outer[y] for y in inner)


@dataclass(frozen=True)
class ExtAlgebra:
    """A finite monoid together with a monoid O(R) of maps on it.

    Elements and operations are referred to by index. O(R) is stored
    extensionally: every operation is a table of element indices, and two
    operations are the same iff their tables are equal.
    """

    element_names: Tuple[str, ...]
    identity: int
    mult: Tuple[Table, ...]
    op_tables: Tuple[Table, ...]
    op_names: Tuple[str, ...]
    identity_op: int

    @property
    def size(self) -> int:
        return len(self.element_names)

    @property
    def op_count(self) -> int:
        return len(self.op_tables)

    @cached_property
    def op_index(self) -> Dict[Table, int]:
        """Lookup from a transformation table to its operation index."""
        index: Dict[Table, int] = {}
        for position, table in enumerate(self.op_tables):
            index.setdefault(table, position)
        return index

    @cached_property
    def element_index(self) -> Dict[str, int]:
        return {name: index for index, name in enumerate(self.element_names)}

    def lookup_op(self, table: Table) -> int:
        """The index of a table in O(R); ClosureViolation if absent."""
        try:
            return self.op_index[table]
        except KeyError as error:
            raise ClosureViolation(table) from error

    def left_translation(self, r: int) -> Table:
        """The map x ↦ r·x."""
        return self.mult[r]

    def right_translation(self, r: int) -> Table:
        """The map x ↦ x·r."""
        return tuple(row[r] for row in self.mult)

    def compose(self, outer: int, inner: int) -> Table:
        return compose_tables(self.op_tables[outer], self.op_tables[inner])

    def name_of_op(self, op: int) -> str:
        return self.op_names[op]


def one_element_algebra(name: str = "1") -> ExtAlgebra:
    """The trivial algebra: one element, one operation."""
    return ExtAlgebra(
        element_names=(name,),
        identity=0,
        mult=((0,),),
        op_tables=((0,),),
        op_names=("id",),
        identity_op=0,
    )


def check_dimensions(R: ExtAlgebra) -> None:
    """Raises MalformedTables unless every index and row length fits."""
    n = R.size
    if n == 0:
        raise MalformedTables("An algebra needs at least one element")
    if len(set(R.element_names)) != n:
        raise MalformedTables("Element names are not distinct")
    if not 0 <= R.identity < n:
        raise MalformedTables(f"Identity index {R.identity} is out of range")
    if len(R.mult) != n:
        raise MalformedTables(
            f"Multiplication table has {len(R.mult)} rows for {n} elements"
        )
    for x, row in enumerate(R.mult):
        if len(row) != n or any(not 0 <= y < n for y in row):
            raise MalformedTables(f"Multiplication row {x} is malformed")
    if len(R.op_names) != len(R.op_tables):
        raise MalformedTables("Every operation needs exactly one name")
    for op, table in enumerate(R.op_tables):
        if len(table) != n or any(not 0 <= y < n for y in table):
            raise MalformedTables(
                f"Operation {R.op_names[op]} is not a table over {n} elements"
            )
    if not 0 <= R.identity_op < len(R.op_tables):
        raise MalformedTables(
            f"Identity operation index {R.identity_op} is out of range"
        )


def validate_algebra(R: ExtAlgebra) -> ValidationReport:
    """Checks every Ext-algebra invariant of R.

    Returns one violation per broken invariant, each naming the first
    witness found in index order. An empty report means R is valid.

    :raises MalformedTables: when the tables are not dimensionally
    consistent, in which case no other check is meaningful.
    """
    check_dimensions(R)
    n = R.size
    mult = R.mult
    report: ValidationReport = []

    associativity = next(
        (
            (x, y, z)
            for x in range(n)
            for y in range(n)
            for z in range(n)
            if mult[mult[x][y]][z] != mult[x][mult[y][z]]
        ),
        None,
    )
    if associativity is not None:
        x, y, z = associativity
        names = R.element_names
        report.append(
            {
                "kind": "associativity",
                "message": (
                    f"({names[x]}·{names[y]})·{names[z]} !="
                    f" {names[x]}·({names[y]}·{names[z]})"
                ),
                "witness": associativity,
            }
        )

    neutral = next(
        (
            x
            for x in range(n)
            if mult[R.identity][x] != x or mult[x][R.identity] != x
        ),
        None,
    )
    if neutral is not None:
        report.append(
            {
                "kind": "identity",
                "message": (
                    f"{R.element_names[R.identity]} is not neutral for"
                    f" {R.element_names[neutral]}"
                ),
                "witness": (neutral,),
            }
        )

    if R.op_tables[R.identity_op] != identity_table(n):
        report.append(
            {
                "kind": "identity_op",
                "message": (
                    f"Operation {R.op_names[R.identity_op]} is not the"
                    " identity map"
                ),
                "witness": (R.identity_op,),
            }
        )

    first_seen: Dict[Table, int] = {}
    for op, table in enumerate(R.op_tables):
        if table in first_seen:
            report.append(
                {
                    "kind": "duplicate_op",
                    "message": (
                        f"Operations {R.op_names[first_seen[table]]} and"
                        f" {R.op_names[op]} have the same table"
                    ),
                    "witness": (first_seen[table], op),
                }
            )
            break
        first_seen[table] = op

    for kind, translation in (
        ("left_translation", R.left_translation),
        ("right_translation", R.right_translation),
    ):
        missing = next(
            (r for r in range(n) if translation(r) not in R.op_index), None
        )
        if missing is not None:
            report.append(
                {
                    "kind": kind,
                    "message": (
                        f"The {kind.replace('_', ' ')} by"
                        f" {R.element_names[missing]} is not an operation"
                    ),
                    "witness": (missing,),
                }
            )

    composition = next(
        (
            (i, j)
            for i in range(R.op_count)
            for j in range(R.op_count)
            if R.compose(i, j) not in R.op_index
        ),
        None,
    )
    if composition is not None:
        i, j = composition
        report.append(
            {
                "kind": "composition",
                "message": (
                    f"{R.op_names[i]} ∘ {R.op_names[j]} is not an operation"
                ),
                "witness": composition,
            }
        )

    if report:
        logger.debug(
            "Algebra failed validation %s",
            {"violations": [violation["kind"] for violation in report]},
        )
    return report


def close_operations(
    size: int, generators: Iterable[Table], cap: int = CLOSURE_CAP
) -> List[Table]:
    """The transformation monoid generated by the given tables.

    The result starts with the generators in their given order (duplicates
    dropped), followed by the identity if no generator is the identity,
    followed by the remaining products in breadth-first order.

    :raises SizeCapExceeded: when the monoid grows beyond cap.
    """
    tables: List[Table] = []
    seen: Set[Table] = set()
    for table in generators:
        if table not in seen:
            seen.add(table)
            tables.append(table)
    identity = identity_table(size)
    if identity not in seen:
        seen.add(identity)
        tables.append(identity)
    base = list(tables)
    position = 0
    while position < len(tables):
        current = tables[position]
        position += 1
        for generator in base:
            product = compose_tables(current, generator)
            if product not in seen:
                seen.add(product)
                tables.append(product)
                if len(tables) > cap:
                    raise SizeCapExceeded("Operation monoid", cap)
    return tables


def _fresh_name(taken: Set[str], base: str) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def complete_operations(
    R: ExtAlgebra, cap: int = CLOSURE_CAP
) -> Tuple[ExtAlgebra, ClosureReport]:
    """Adds the operations that the definition of an Ext-algebra demands.

    Declared operations keep their index, name and table. The identity,
    missing translations and every missing composition are appended.
    """
    check_dimensions(R)
    n = R.size
    names = R.element_names
    taken = set(R.op_names)
    report: ClosureReport = {
        "translations": [],
        "compositions": [],
        "identity_added": False,
    }
    tables: List[Table] = list(R.op_tables)
    op_names: List[str] = list(R.op_names)
    index: Dict[Table, int] = {}
    for op, table in enumerate(tables):
        index.setdefault(table, op)

    def add(table: Table, name: str) -> Optional[str]:
        if table in index:
            return None
        index[table] = len(tables)
        tables.append(table)
        op_names.append(_fresh_name(taken, name))
        return op_names[-1]

    identity_name = add(identity_table(n), "id")
    report["identity_added"] = identity_name is not None
    for r in range(n):
        for prefix, table in (
            ("L", R.left_translation(r)),
            ("R", R.right_translation(r)),
        ):
            added = add(table, f"{prefix}[{names[r]}]")
            if added is not None:
                report["translations"].append(added)

    generators = list(tables)
    for table in close_operations(n, generators, cap):
        added = add(table, f"op{len(tables)}")
        if added is not None:
            report["compositions"].append(added)

    completed = ExtAlgebra(
        element_names=R.element_names,
        identity=R.identity,
        mult=R.mult,
        op_tables=tuple(tables),
        op_names=tuple(op_names),
        identity_op=index[identity_table(n)],
    )
    logger.info(
        "Completed operation set %s",
        {
            "declared": R.op_count,
            "translations": len(report["translations"]),
            "compositions": len(report["compositions"]),
            "size": completed.op_count,
        },
    )
    return completed, report
