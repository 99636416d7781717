from typing import List, Literal, Tuple, TypedDict

# A transformation of an algebra's carrier, as element indices
Table = Tuple[int, ...]

# Words are plain strings of single-character letters; "" is the empty word
Word = str

LetterKind = Literal["call", "return", "internal"]

MorphismMode = Literal["canonical", "all"]


class CapsConfig(TypedDict):
    """Size caps for closures and searches."""

    closure_size: int
    search_size: int
    morphisms: int
    exponent: int
    division_generators: int
    division_nodes: int


class EngineConfig(TypedDict):
    """Settings for the equation engines."""

    workers: int
    batch_size: int


class LocalConfigPaths(TypedDict):
    """Segment of the local config file containing paths."""

    reports: str


class LocalConfig(TypedDict):
    """Contents of the local config file."""

    caps: CapsConfig
    engine: EngineConfig
    path: LocalConfigPaths


class Violation(TypedDict):
    """One failed invariant of an algebra, with its first witness."""

    kind: str
    message: str
    witness: Tuple[int, ...]


ValidationReport = List[Violation]


class ClosureReport(TypedDict):
    """Operations added while completing an algebra's operation set."""

    translations: List[str]
    compositions: List[str]
    identity_added: bool
