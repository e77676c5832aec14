"""Data model for the supported PDDL subset.

The subset is typed STRIPS: a single-parent type hierarchy rooted at
``object``, conjunctive positive preconditions and goals, and add/delete
effects. Identifiers are case-insensitive and normalized to lower case.

Atoms are plain tuples ``(predicate, arg1, ..., argN)`` so that states and
precondition sets are hashable and cheap to compare.
"""

from __future__ import annotations

from dataclasses import dataclass

Atom = tuple[str, ...]

ROOT_TYPE = "object"


def atom_to_str(atom: Atom) -> str:
    """Render an atom in PDDL list form, e.g. ``(on d1 d2)``."""
    return "(" + " ".join(atom) + ")"


def atoms_to_strs(atoms) -> list[str]:
    """Sorted string forms of a collection of atoms (canonical order)."""
    return [atom_to_str(a) for a in sorted(atoms)]


@dataclass(frozen=True)
class Parameter:
    """A typed variable (``?x - block``) or typed object slot."""

    name: str
    type: str = ROOT_TYPE


@dataclass(frozen=True)
class Predicate:
    name: str
    params: tuple[Parameter, ...]

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ActionSchema:
    """A lifted action: precondition/effect atoms over the parameters."""

    name: str
    params: tuple[Parameter, ...]
    precondition: frozenset[Atom]
    add_effects: frozenset[Atom]
    del_effects: frozenset[Atom]

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class TypedObject:
    name: str
    type: str = ROOT_TYPE


@dataclass
class Domain:
    """A parsed domain: type hierarchy, predicate signatures, schemas."""

    name: str
    types: tuple[tuple[str, str], ...] = ()  # (type, parent) in declaration order
    predicates: tuple[Predicate, ...] = ()
    schemas: tuple[ActionSchema, ...] = ()

    def __post_init__(self) -> None:
        self._parents: dict[str, str] = {ROOT_TYPE: ROOT_TYPE}
        for name, parent in self.types:
            self._parents[name] = parent
        self._predicates = {p.name: p for p in self.predicates}
        self._schemas = {s.name: s for s in self.schemas}

    def predicate(self, name: str) -> Predicate | None:
        return self._predicates.get(name)

    def schema(self, name: str) -> ActionSchema | None:
        return self._schemas.get(name)

    def schema_names(self) -> list[str]:
        return [s.name for s in self.schemas]

    def has_type(self, name: str) -> bool:
        return name in self._parents

    def is_subtype(self, child: str, ancestor: str) -> bool:
        """True when ``child`` equals or descends from ``ancestor``."""
        if ancestor == ROOT_TYPE:
            return child in self._parents
        seen = set()
        current = child
        while current not in seen:
            if current == ancestor:
                return True
            seen.add(current)
            current = self._parents.get(current, ROOT_TYPE)
        return False


@dataclass
class Problem:
    """A parsed problem: typed objects, initial atoms, goal atoms."""

    name: str
    domain_name: str
    objects: tuple[TypedObject, ...] = ()
    init: frozenset[Atom] = frozenset()
    goal: frozenset[Atom] = frozenset()

    def __post_init__(self) -> None:
        self._object_types = {o.name: o.type for o in self.objects}

    def object_type(self, name: str) -> str | None:
        return self._object_types.get(name)

    def objects_of_type(self, domain: Domain, type_name: str) -> list[str]:
        """Object names compatible with ``type_name``, sorted."""
        return sorted(
            o.name for o in self.objects if domain.is_subtype(o.type, type_name)
        )
