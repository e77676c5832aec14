from __future__ import annotations

import pytest

from plantutor.pddl import (
    PddlParseError,
    domain_to_pddl,
    ground,
    parse_domain,
    parse_problem,
    problem_to_pddl,
)

EMPTY_DOMAIN = "(define (domain empty))"

TINY_DOMAIN = """
(define (domain tiny)
  (:requirements :strips :typing)
  (:types block - object)
  (:predicates (clear ?x - block) (on ?x - block ?y - block))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (clear ?x) (clear ?y))
    :effect (and (on ?x ?y) (not (clear ?y)))))
"""

TINY_PROBLEM = """
(define (problem tiny_1)
  (:domain tiny)
  (:objects a b - block)
  (:init (clear a) (clear b))
  (:goal (on a b)))
"""


def test_empty_domain():
    domain = parse_domain(EMPTY_DOMAIN)
    assert domain.name == "empty"
    assert domain.schemas == ()
    assert domain.predicates == ()


def test_hanoi_domain_counts(hanoi):
    assert [s.name for s in hanoi.domain.schemas] == ["move"]
    assert sorted(p.name for p in hanoi.domain.predicates) == ["clear", "on", "smaller"]


def test_hanoi_init_hand_enumeration(hanoi):
    # 3 on-facts + 3 clear-facts (uncovered tops) + 12 smaller-facts
    # (9 peg/disc pairs + 3 disc/disc pairs), enumerated by hand.
    problem = hanoi.problems["classic_3"]
    expected = {
        ("on", "d1", "d2"), ("on", "d2", "d3"), ("on", "d3", "peg1"),
        ("clear", "d1"), ("clear", "peg2"), ("clear", "peg3"),
        ("smaller", "d2", "d1"), ("smaller", "d3", "d1"), ("smaller", "d3", "d2"),
        ("smaller", "peg1", "d1"), ("smaller", "peg1", "d2"), ("smaller", "peg1", "d3"),
        ("smaller", "peg2", "d1"), ("smaller", "peg2", "d2"), ("smaller", "peg2", "d3"),
        ("smaller", "peg3", "d1"), ("smaller", "peg3", "d2"), ("smaller", "peg3", "d3"),
    }
    assert problem.init == frozenset(expected)
    assert len(problem.init) == 18


def test_negated_precondition_rejected():
    text = TINY_DOMAIN.replace("(and (clear ?x) (clear ?y))", "(and (not (clear ?x)))")
    with pytest.raises(PddlParseError) as err:
        parse_domain(text)
    assert "unsupported construct: negated precondition" in str(err.value)


def test_error_format_has_location():
    with pytest.raises(PddlParseError) as err:
        parse_domain("(define (domain x)\n  (:predicates (p ?a ?a)))", filename="bad.pddl")
    message = str(err.value)
    assert message.startswith("bad.pddl:2:")
    assert "duplicate declaration of parameter" in message


def test_unknown_requirement_flag():
    with pytest.raises(PddlParseError) as err:
        parse_domain("(define (domain x) (:requirements :adl))")
    assert "unknown requirement flag" in str(err.value)


def test_duplicate_schema_rejected():
    text = TINY_DOMAIN.rstrip()[:-1] + """
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (clear ?x)
    :effect (on ?x ?y)))
"""
    with pytest.raises(PddlParseError) as err:
        parse_domain(text)
    assert "duplicate declaration of action" in str(err.value)


def test_unbound_variable_rejected():
    text = TINY_DOMAIN.replace("(on ?x ?y)", "(on ?x ?z)")
    with pytest.raises(PddlParseError) as err:
        parse_domain(text)
    assert "unbound variable" in str(err.value)


def test_case_insensitive_identifiers():
    domain = parse_domain(TINY_DOMAIN.replace("stack", "Stack").replace("clear", "CLEAR"))
    assert domain.schemas[0].name == "stack"
    assert domain.predicate("clear") is not None


def test_empty_goal_problem():
    domain = parse_domain(TINY_DOMAIN)
    problem = parse_problem(TINY_PROBLEM.replace("(:goal (on a b))", "(:goal (and))"), domain)
    assert problem.goal == frozenset()


def test_goal_arity_mismatch():
    domain = parse_domain(TINY_DOMAIN)
    with pytest.raises(PddlParseError) as err:
        parse_problem(TINY_PROBLEM.replace("(on a b)", "(on a b b)"), domain)
    assert "arity mismatch" in str(err.value)


def test_undeclared_object():
    domain = parse_domain(TINY_DOMAIN)
    with pytest.raises(PddlParseError) as err:
        parse_problem(TINY_PROBLEM.replace("(clear b)", "(clear c)"), domain)
    assert "undeclared object 'c'" in str(err.value)


def test_type_mismatch():
    domain = parse_domain(
        TINY_DOMAIN.replace("(:types block - object)", "(:types block table - object)")
    )
    with pytest.raises(PddlParseError) as err:
        parse_problem(TINY_PROBLEM.replace("a b - block", "a - block b - table"), domain)
    assert "type mismatch" in str(err.value)


def test_domain_name_mismatch():
    domain = parse_domain(TINY_DOMAIN)
    with pytest.raises(PddlParseError) as err:
        parse_problem(TINY_PROBLEM.replace("(:domain tiny)", "(:domain other)"), domain)
    assert "references domain" in str(err.value)


def test_round_trip_bundled(registry):
    for name in registry.names():
        env = registry.get(name)
        reparsed = parse_domain(domain_to_pddl(env.domain))
        assert reparsed == env.domain
        for problem in env.problems.values():
            assert parse_problem(problem_to_pddl(problem), env.domain) == problem


def test_round_trip_synthetic():
    domain = parse_domain(TINY_DOMAIN)
    problem = parse_problem(TINY_PROBLEM, domain)
    assert parse_domain(domain_to_pddl(domain)) == domain
    assert parse_problem(problem_to_pddl(problem), domain) == problem


def test_grounding_deterministic(hanoi):
    a = ground(hanoi.domain, hanoi.problems["classic_3"])
    b = ground(hanoi.domain, hanoi.problems["classic_3"])
    assert [(x.schema_name, x.args) for x in a.actions] == [
        (x.schema_name, x.args) for x in b.actions
    ]


def test_hanoi_ground_count_matches_enumeration(hanoi, hanoi_task):
    # Independent brute force: typed triples filtered by the static
    # smaller-facts, exactly what grounding is specified to produce.
    problem = hanoi.problems["classic_3"]
    objects = sorted(o.name for o in problem.objects)
    expected = [
        ("move", (disc, source, target))
        for disc in objects
        for source in objects
        for target in objects
        if ("smaller", target, disc) in problem.init
    ]
    got = [(a.schema_name, a.args) for a in hanoi_task.actions]
    assert len(got) == len(expected) == 72
    assert sorted(got) == sorted(expected)


def test_zero_parameter_schema_grounds_once():
    domain = parse_domain(
        """
        (define (domain waiting)
          (:predicates (done))
          (:action wait :parameters () :precondition (and) :effect (done)))
        """
    )
    problem = parse_problem(
        "(define (problem w) (:domain waiting) (:init) (:goal (done)))", domain
    )
    task = ground(domain, problem)
    assert len(task.actions) == 1
    assert task.actions[0].args == ()


def test_object_without_matching_type_contributes_nothing():
    domain = parse_domain(TINY_DOMAIN)
    problem = parse_problem(
        """
        (define (problem none) (:domain tiny)
          (:objects a - block)
          (:init (clear a))
          (:goal (and)))
        """,
        domain,
    )
    # 'stack' needs two blocks; one block still yields the self-pair only
    task = ground(domain, problem)
    assert [(a.schema_name, a.args) for a in task.actions] == [("stack", ("a", "a"))]


def test_ground_atoms_mention_declared_objects_only(coffee_task):
    declared = {o.name for o in coffee_task.problem.objects}
    for action in coffee_task.actions:
        for atom in action.pre | action.add | action.delete:
            assert set(atom[1:]) <= declared
