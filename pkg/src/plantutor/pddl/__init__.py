from .grounding import GroundedTask, ground, static_predicates
from .model import ActionSchema, Atom, Domain, Parameter, Predicate, Problem, TypedObject, atom_to_str
from .parser import PddlParseError, parse_domain, parse_domain_file, parse_problem, parse_problem_file
from .writer import domain_to_pddl, problem_to_pddl

__all__ = [
    "ActionSchema",
    "Atom",
    "Domain",
    "GroundedTask",
    "Parameter",
    "PddlParseError",
    "Predicate",
    "Problem",
    "TypedObject",
    "atom_to_str",
    "domain_to_pddl",
    "ground",
    "parse_domain",
    "parse_domain_file",
    "parse_problem",
    "parse_problem_file",
    "problem_to_pddl",
    "static_predicates",
]
