from __future__ import annotations

from oracles import as_triples, bfs_optimal_plan
from plantutor.search import (
    STATUS_FOUND,
    STATUS_TIMEOUT,
    STATUS_UNSOLVABLE,
    h_add,
    plan_search,
    zero_heuristic,
)
from plantutor.state import apply, satisfies


def test_h_add_zero_when_goal_holds(hanoi_task):
    assert h_add(hanoi_task.init, frozenset({("clear", "d1")}), hanoi_task.actions) == 0.0


def test_h_add_unreachable_is_infinite(hanoi_task):
    assert h_add(hanoi_task.init, frozenset({("on", "d3", "d1")}), hanoi_task.actions) == float("inf")


def test_goal_already_satisfied_returns_empty_plan(hanoi_task):
    result = plan_search(hanoi_task, hanoi_task.init, timeout=1e-6)
    # goal not in init here, so craft one that is
    trivial = hanoi_task.with_goal(frozenset({("clear", "d1")}))
    result = plan_search(trivial, trivial.init, timeout=1e-6)
    assert result.status == STATUS_FOUND
    assert result.plan == []


def test_bfs_oracle_hanoi_optimum_is_seven(hanoi_task):
    oracle_plan = bfs_optimal_plan(hanoi_task.init.atoms, hanoi_task.goal, as_triples(hanoi_task.actions))
    assert oracle_plan is not None
    assert len(oracle_plan) == 7  # 2^3 - 1


def test_zero_heuristic_degenerates_to_bfs_optimal(hanoi_task):
    result = plan_search(hanoi_task, hanoi_task.init, heuristic=zero_heuristic)
    assert result.status == STATUS_FOUND
    assert len(result.plan) == 7


def test_greedy_plan_is_valid_and_reaches_goal(hanoi_task, coffee_task):
    for task in (hanoi_task, coffee_task):
        result = plan_search(task, task.init)
        assert result.status == STATUS_FOUND
        state = task.init
        for action in result.plan:
            assert action.pre <= state.atoms
            state = apply(state, action)
        assert satisfies(state, task.goal)
    # optimal length is a lower bound for any found plan
    result = plan_search(hanoi_task, hanoi_task.init)
    assert len(result.plan) >= 7


def test_microsecond_timeout_returns_timeout_status(hanoi_task):
    result = plan_search(hanoi_task, hanoi_task.init, timeout=1e-6)
    assert result.status == STATUS_TIMEOUT
    assert result.plan is None


def test_exhausted_space_reports_unsolvable(hanoi_task):
    impossible = hanoi_task.with_goal(frozenset({("on", "d3", "d1")}))
    result = plan_search(impossible, impossible.init)
    assert result.status == STATUS_UNSOLVABLE
