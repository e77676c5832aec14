"""Closed-world states and ground-action semantics.

States are immutable sets of ground atoms; everything here is a pure
value operation, safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pddl.model import Atom, atom_to_str


class InapplicableActionError(Exception):
    """Raised when apply() is called on an action whose precondition fails."""


@dataclass(frozen=True)
class State:
    atoms: frozenset[Atom]

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.atoms

    def to_strings(self) -> list[str]:
        """Sorted ``(pred obj1 obj2)`` strings, the display/API encoding."""
        return [atom_to_str(a) for a in sorted(self.atoms)]

    @classmethod
    def from_atoms(cls, atoms) -> State:
        return cls(frozenset(atoms))


@dataclass(frozen=True)
class GroundAction:
    """One instantiated action: ground precondition and effects."""

    schema_name: str
    args: tuple[str, ...]
    pre: frozenset[Atom]
    add: frozenset[Atom]
    delete: frozenset[Atom]
    index: int = -1

    @property
    def name(self) -> str:
        """Plan-file form, e.g. ``(move d1 d2 peg3)``."""
        return "(" + " ".join((self.schema_name,) + self.args) + ")"

    @property
    def arity(self) -> int:
        return len(self.args)


def is_applicable(state: State, action: GroundAction) -> bool:
    return action.pre <= state.atoms


def unmet_preconditions(state: State, action: GroundAction) -> frozenset[Atom]:
    """Precondition atoms absent from the state; empty iff applicable."""
    return action.pre - state.atoms


def apply(state: State, action: GroundAction) -> State:
    """Progress the state; the caller must have checked applicability."""
    if not is_applicable(state, action):
        missing = ", ".join(atom_to_str(a) for a in sorted(unmet_preconditions(state, action)))
        raise InapplicableActionError(f"{action.name} is not applicable: missing {missing}")
    return State((state.atoms - action.delete) | action.add)


def satisfies(state: State, goal: frozenset[Atom]) -> bool:
    return goal <= state.atoms
