"""Human-readable and porcelain rendering of command results."""

from typing import Any, Dict, List, Optional, Sequence

import tomlkit

from extalgebra.algebra.compare import DivisionResult, DivisionWitness
from extalgebra.algebra.morphism import Morphism, RecognizerSpec, evaluate
from extalgebra.algebra.tables import ExtAlgebra
from extalgebra.core import format_word
from extalgebra.profinite.equations import (
    Counterexample,
    EquationCheckResult,
    Satisfied,
)
from extalgebra.profinite.separation import Separation
from extalgebra.profinite.syntax import render_term
from extalgebra.types import ClosureReport, ValidationReport, Word


class Reporter:
    """Fills report templates, or emits key=value lines in porcelain mode."""

    def __init__(self, reports_path: str, porcelain: bool = False):
        with open(reports_path, "r", encoding="utf-8") as reports_file:
            self.templates = dict(tomlkit.parse(reports_file.read()))
        self.porcelain = porcelain

    def render(self, key: str, fields: Dict[str, Any]) -> str:
        if self.porcelain:
            lines = [f"report={key}"]
            lines += [f"{name}={value}" for name, value in fields.items()]
            return "\n".join(lines)
        return str(self.templates[key]).format(**fields).strip("\n")

    def validation(
        self, spec: RecognizerSpec, closure: Optional[ClosureReport]
    ) -> str:
        lines = []
        if closure is not None:
            lines.append(
                self.render(
                    "closure",
                    {
                        "translations": len(closure["translations"]),
                        "compositions": len(closure["compositions"]),
                        "identity": (
                            self.templates["closure_identity"]
                            if closure["identity_added"]
                            else ""
                        ),
                    },
                )
            )
        lines.append(
            self.render(
                "valid",
                {
                    "elements": spec.algebra.size,
                    "operations": spec.algebra.op_count,
                },
            )
        )
        return "\n".join(lines)

    def invalid(self, report: ValidationReport) -> str:
        lines = [self.render("invalid", {"count": len(report)})]
        for violation in report:
            lines.append(
                self.render(
                    "violation",
                    {
                        "kind": violation["kind"],
                        "message": violation["message"],
                    },
                )
            )
        return "\n".join(lines)

    def verdict(self, accepted: bool) -> str:
        if self.porcelain:
            return f"accepted={str(accepted).lower()}"
        return str(self.templates["accept" if accepted else "reject"])

    def wrote(self, path: str) -> str:
        return self.render("wrote", {"path": path})

    def words(self, words: List[Word]) -> str:
        return "\n".join(format_word(word) for word in words)

    def equation(self, result: EquationCheckResult) -> str:
        if isinstance(result, Satisfied):
            fields: Dict[str, Any] = {
                "equation": result.equation,
                "max_context_len": result.max_context_len,
                "morphism_mode": result.morphism_mode,
                "morphisms": result.morphisms,
                "contexts": result.contexts,
                "context_pairs": result.context_pairs,
                "domain_size": result.domain_size,
            }
            if result.equation == "term":
                return self.render("term_satisfied", fields)
            return self.render("satisfied", fields)
        return self.counterexample(result)

    def counterexample(self, result: Counterexample) -> str:
        names = result.morphism.target.element_names
        assignment = ", ".join(
            f"{name}={names[value]}"
            for name, value in sorted(result.assignment.items())
        )
        fields: Dict[str, Any] = {"equation": result.equation}
        if result.contexts:
            outer, inner = result.contexts
            fields.update(
                {
                    "u": format_word(outer.left),
                    "v": format_word(outer.right),
                    "u2": format_word(inner.left),
                    "v2": format_word(inner.right),
                }
            )
        fields.update(
            {
                "assignment": assignment,
                "left_side": result.sides[0],
                "right_side": result.sides[1],
                "left_term": render_term(result.left_term),
                "right_term": render_term(result.right_term),
                "left": names[result.left],
                "right": names[result.right],
            }
        )
        key = "counterexample" if result.contexts else "term_counterexample"
        return self.render(key, fields)

    def separation(self, separation: Separation, x: Word, y: Word) -> str:
        if not separation.separated or separation.witness is None:
            return self.render("not_separated", {"tried": separation.tried})
        witness = separation.witness
        names = witness.target.element_names
        return self.render(
            "separated",
            {
                "tried": separation.tried,
                "first": format_word(x),
                "first_value": names[evaluate(witness, x)],
                "second": format_word(y),
                "second_value": names[evaluate(witness, y)],
                "images": describe_morphism(witness),
            },
        )

    def isomorphism(
        self, R: ExtAlgebra, S: ExtAlgebra, mapping: Sequence[int]
    ) -> str:
        pairs = " ".join(
            f"{R.element_names[x]}->{S.element_names[y]}"
            for x, y in enumerate(mapping)
        )
        return self.render("isomorphic", {"mapping": pairs})

    def division(self, result: DivisionResult) -> str:
        if isinstance(result, DivisionWitness):
            return self.render(
                "divides",
                {
                    "size": len(result.sub_elements),
                    "classes": len(result.congruence),
                },
            )
        key = "no_division" if result.exhaustive else "division_unknown"
        return self.render(key, {"tried": result.subalgebras_tried})


def describe_morphism(morphism: Morphism) -> str:
    """The images of the generators, e.g. `a,b->id c->x`."""
    parts = [
        f"{call},{ret}->{morphism.target.op_names[op]}"
        for (call, ret), op in sorted(morphism.ext_image.items())
    ]
    parts += [
        f"{letter}->{morphism.target.element_names[x]}"
        for letter, x in sorted(morphism.internal_image.items())
    ]
    return " ".join(parts)
