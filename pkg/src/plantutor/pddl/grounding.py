"""Ground action-schema instantiation with static-predicate filtering.

Grounding is deterministic: schemas in declaration order, argument tuples
in lexicographic order. Predicates that never appear in any effect are
static; instantiations whose static preconditions are false in the
initial state are dropped, and the surviving actions carry only dynamic
precondition atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..state import GroundAction, State
from .model import Atom, Domain, Problem


@dataclass
class GroundedTask:
    """A domain/problem pair compiled to ground actions."""

    domain: Domain
    problem: Problem
    actions: list[GroundAction]
    init: State
    goal: frozenset[Atom]
    _by_key: dict[tuple[str, tuple[str, ...]], GroundAction] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self._by_key:
            self._by_key = {(a.schema_name, a.args): a for a in self.actions}

    def find_action(self, name: str, args: tuple[str, ...]) -> GroundAction | None:
        return self._by_key.get((name, args))

    def with_goal(self, goal: frozenset[Atom]) -> GroundedTask:
        """Same compiled actions and init, different goal (generated tasks)."""
        return GroundedTask(
            domain=self.domain,
            problem=self.problem,
            actions=self.actions,
            init=self.init,
            goal=goal,
            _by_key=self._by_key,
        )


def static_predicates(domain: Domain) -> set[str]:
    """Predicate names never occurring in any schema's effects."""
    dynamic = {
        atom[0]
        for schema in domain.schemas
        for atom in schema.add_effects | schema.del_effects
    }
    return {pred.name for pred in domain.predicates} - dynamic


def _substitute(atom: Atom, binding: dict[str, str]) -> Atom:
    return (atom[0],) + tuple(binding[arg] for arg in atom[1:])


def ground(domain: Domain, problem: Problem) -> GroundedTask:
    """Instantiate every schema over all type-compatible object tuples."""
    statics = static_predicates(domain)
    init = problem.init
    actions: list[GroundAction] = []

    for schema in domain.schemas:
        candidates = [problem.objects_of_type(domain, p.type) for p in schema.params]
        if any(not c for c in candidates):
            continue
        for combo in product(*candidates):
            binding = {p.name: obj for p, obj in zip(schema.params, combo)}
            pre = {_substitute(a, binding) for a in schema.precondition}
            static_pre = {a for a in pre if a[0] in statics}
            if not static_pre <= init:
                continue
            add = frozenset(_substitute(a, binding) for a in schema.add_effects)
            delete = frozenset(_substitute(a, binding) for a in schema.del_effects)
            actions.append(
                GroundAction(
                    schema_name=schema.name,
                    args=tuple(combo),
                    pre=frozenset(pre - static_pre),
                    add=add,
                    delete=delete - add,  # add wins on ground collisions
                    index=len(actions),
                )
            )

    return GroundedTask(
        domain=domain,
        problem=problem,
        actions=actions,
        init=State(frozenset(init)),
        goal=problem.goal,
    )
