"""Canonical pretty-printing of domains and problems.

The output reparses to a structurally equal model (round-trip property)
and doubles as the PDDL text embedded in translation prompts.
"""

from __future__ import annotations

from .model import ActionSchema, Domain, Parameter, Problem, atom_to_str


def _params_to_str(params: tuple[Parameter, ...]) -> str:
    return " ".join(f"{p.name} - {p.type}" for p in params)


def _conjunction(atoms, negated=()) -> str:
    parts = [atom_to_str(a) for a in sorted(atoms)]
    parts += [f"(not {atom_to_str(a)})" for a in sorted(negated)]
    if not parts:
        return "(and)"
    if len(parts) == 1:
        return parts[0]
    return "(and " + " ".join(parts) + ")"


def _schema_to_str(schema: ActionSchema) -> str:
    lines = [f"  (:action {schema.name}"]
    lines.append(f"    :parameters ({_params_to_str(schema.params)})")
    lines.append(f"    :precondition {_conjunction(schema.precondition)}")
    lines.append(f"    :effect {_conjunction(schema.add_effects, negated=schema.del_effects)})")
    return "\n".join(lines)


def domain_to_pddl(domain: Domain) -> str:
    lines = [f"(define (domain {domain.name})"]
    lines.append("  (:requirements :strips :typing)")
    if domain.types:
        typed = " ".join(f"{name} - {parent}" for name, parent in domain.types)
        lines.append(f"  (:types {typed})")
    if domain.predicates:
        lines.append("  (:predicates")
        for pred in domain.predicates:
            sig = f" {_params_to_str(pred.params)}" if pred.params else ""
            lines.append(f"    ({pred.name}{sig})")
        lines.append("  )")
    for schema in domain.schemas:
        lines.append(_schema_to_str(schema))
    lines.append(")")
    return "\n".join(lines) + "\n"


def problem_to_pddl(problem: Problem) -> str:
    lines = [f"(define (problem {problem.name})"]
    lines.append(f"  (:domain {problem.domain_name})")
    if problem.objects:
        typed = " ".join(f"{o.name} - {o.type}" for o in problem.objects)
        lines.append(f"  (:objects {typed})")
    lines.append("  (:init")
    for atom in sorted(problem.init):
        lines.append(f"    {atom_to_str(atom)}")
    lines.append("  )")
    lines.append(f"  (:goal {_conjunction(problem.goal)})")
    lines.append(")")
    return "\n".join(lines) + "\n"
