"""Natural-language rendering of actions and failure explanations.

Each environment ships a semantic map: per-action and per-predicate text
patterns with ``{i}`` argument slots. Failures always get a deterministic
template "TLDR"; a translator callback may add a friendlier long form for
the first few failures.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from typing import Callable

from .pddl.model import Atom, Domain, atom_to_str
from .state import GroundAction
from .validation import Failure, ValidationReport

TLDR_PATTERN = "The action at step {step} ({action}) could not be performed because {reasons}."


class SemanticMapError(Exception):
    """Semantic map does not cover the domain; raised at load, never at runtime."""


@dataclass
class SemanticMap:
    """Text patterns keyed by schema/predicate name, plus display names."""

    action_templates: dict[str, str]
    predicate_templates: dict[str, str]  # positive phrasing, e.g. goal text
    unmet_templates: dict[str, str]  # negated phrasing for failed preconditions
    object_names: dict[str, str]

    def display(self, obj: str) -> str:
        return self.object_names.get(obj, obj)

    def validate_against(self, domain: Domain) -> None:
        missing = [f"action {s.name!r}" for s in domain.schemas if s.name not in self.action_templates]
        missing += [
            f"predicate {p.name!r}"
            for p in domain.predicates
            if p.name not in self.predicate_templates or p.name not in self.unmet_templates
        ]
        if missing:
            raise SemanticMapError(
                f"semantic map for domain {domain.name!r} is missing templates for: " + ", ".join(missing)
            )

    @classmethod
    def auto(cls, domain: Domain) -> SemanticMap:
        """Fallback map rendering raw names; used when no map file is given."""
        actions = {
            s.name: " ".join([s.name] + [f"'{{{i}}}'" for i in range(s.arity)])
            for s in domain.schemas
        }
        return cls(actions, {}, {}, {})


def load_semantic_map(path: str) -> SemanticMap:
    """Read a ``semantics.map`` file (INI sections, ``key = pattern`` lines)."""
    config = configparser.ConfigParser(interpolation=None)
    config.optionxform = str  # keep keys case-sensitive-ish; names are lower case anyway
    with open(path, encoding="utf-8") as fh:
        config.read_file(fh, source=str(path))
    def section(name: str) -> dict[str, str]:
        return dict(config[name]) if config.has_section(name) else {}

    return SemanticMap(
        action_templates=section("actions"),
        predicate_templates=section("predicates"),
        unmet_templates=section("predicates.unmet"),
        object_names=section("objects"),
    )


def render_action_nl(action: GroundAction, smap: SemanticMap) -> str:
    template = smap.action_templates.get(action.schema_name)
    if template is None:
        raise SemanticMapError(f"no action template for {action.schema_name!r}")
    return template.format(*(smap.display(a) for a in action.args))


def render_unmet_nl(atom: Atom, smap: SemanticMap) -> str:
    template = smap.unmet_templates.get(atom[0])
    if template is None:
        return f"precondition {atom_to_str(atom)} is false"
    return template.format(*(smap.display(a) for a in atom[1:]))


def render_atom_nl(atom: Atom, smap: SemanticMap) -> str:
    template = smap.predicate_templates.get(atom[0])
    if template is None:
        return atom_to_str(atom)
    return template.format(*(smap.display(a) for a in atom[1:]))


@dataclass
class Explanation:
    step_index: int  # 1-based, as displayed to the learner
    action_nl: str
    reasons_nl: list[str]
    tldr: str
    detailed: str | None = None
    source: str = "template"


def explain_failure(failure: Failure, smap: SemanticMap) -> Explanation:
    """Template explanation for one failure; requires a nonempty unmet set."""
    if not failure.unmet:
        raise ValueError("explain_failure requires at least one unmet precondition")
    action_nl = render_action_nl(failure.action, smap)
    reasons = [render_unmet_nl(atom, smap) for atom in sorted(failure.unmet)]
    tldr = TLDR_PATTERN.format(
        step=failure.step_index + 1,
        action=action_nl,
        reasons=" and ".join(reasons),
    )
    return Explanation(
        step_index=failure.step_index + 1,
        action_nl=action_nl,
        reasons_nl=reasons,
        tldr=tldr,
    )


def explanations_for_report(
    report: ValidationReport,
    smap: SemanticMap,
    detail_limit: int = 2,
    translator: Callable[[Explanation], str | None] | None = None,
) -> list[Explanation]:
    """Template explanations for every failure; detailed text for the first few.

    The translator is asked for at most ``detail_limit`` long-form
    translations; a None result leaves the explanation template-only.
    """
    explanations = []
    for i, failure in enumerate(report.failures):
        explanation = explain_failure(failure, smap)
        if translator is not None and i < detail_limit:
            detailed = translator(explanation)
            if detailed is not None:
                explanation.detailed = detailed
                explanation.source = "llm"
        explanations.append(explanation)
    return explanations
