from __future__ import annotations

import pytest

from oracles import as_triples, bfs_distance
from plantutor.curriculum import (
    PerformanceMap,
    TaskGenerationError,
    generate_adaptive_task,
    generate_random_task,
    replay_witness,
    training_task_series,
    update_performance,
)
from plantutor.state import State, satisfies


def test_cold_start_map(coffee_task):
    perf = PerformanceMap.cold_start(coffee_task.domain.schema_names())
    assert perf.costs == {"move": 0, "pick": 0, "place": 0}


def test_update_truth_table(coffee_task):
    # exhaustive over (applicable, hinted) x cost in {0, 1, 3}
    applicable_action = coffee_task.find_action("move", ("fetch", "starting_point", "counter"))
    blocked_action = coffee_task.find_action("move", ("fetch", "counter", "starting_point"))
    state = coffee_task.init
    for cost in (0, 1, 3):
        for applicable in (True, False):
            for hinted in (True, False):
                perf = PerformanceMap({"move": cost, "pick": 0, "place": 0})
                action = applicable_action if applicable else blocked_action
                updated = update_performance(perf, "move", state, action, hinted)
                if applicable and not hinted:
                    expected = cost + 1
                else:
                    expected = max(0, cost - 1)
                assert updated.costs["move"] == expected, (cost, applicable, hinted)
                assert perf.costs["move"] == cost  # input map untouched


def test_update_unknown_schema(coffee_task):
    perf = PerformanceMap.cold_start(coffee_task.domain.schema_names())
    with pytest.raises(KeyError):
        update_performance(perf, "fly", coffee_task.init, coffee_task.actions[0], False)


def test_cost_never_negative(coffee_task):
    blocked = coffee_task.find_action("move", ("fetch", "counter", "starting_point"))
    perf = PerformanceMap({"move": 0, "pick": 0, "place": 0})
    for _ in range(3):
        perf = update_performance(perf, "move", coffee_task.init, blocked, False)
        assert perf.costs["move"] == 0


def first_applicable(task):
    for action in task.actions:
        if action.pre <= task.init.atoms:
            return action
    raise AssertionError("no applicable action")


def test_cold_start_task_single_action(coffee_task):
    perf = PerformanceMap.cold_start(coffee_task.domain.schema_names())
    generated = generate_adaptive_task(perf, coffee_task)
    expected = first_applicable(coffee_task)
    assert generated.reference_plan_length == 1
    assert generated.trigger == (expected.schema_name, 1)
    assert len(generated.witness) == 1
    assert generated.witness[0].name == expected.schema_name
    assert generated.witness[0].args == expected.args
    # goal is the added-atom delta of that one action
    assert generated.goal == expected.add - coffee_task.init.atoms


def test_all_costs_positive_stops_at_depth_cap(coffee_task):
    perf = PerformanceMap({"move": 2, "pick": 1, "place": 3})
    generated = generate_adaptive_task(perf, coffee_task, max_depth=4)
    assert generated.trigger is not None
    assert generated.trigger[1] == 4
    assert generated.reference_plan_length == 4
    assert len(generated.witness) == 4


def test_single_zero_cost_schema_is_the_trigger(coffee_task):
    perf = PerformanceMap({"move": 1, "pick": 0, "place": 2})
    generated = generate_adaptive_task(perf, coffee_task)
    assert generated.trigger[0] == "pick"
    assert generated.witness[-1].name == "pick"
    # every earlier step uses a known (nonzero-cost) schema
    assert all(step.name != "pick" for step in generated.witness[:-1])


def test_generated_goal_replays_from_init(coffee_task, hanoi_task):
    for task in (coffee_task, hanoi_task):
        perf = PerformanceMap.cold_start(task.domain.schema_names())
        for costs in (None, {name: 1 for name in perf.costs}):
            current = PerformanceMap(costs) if costs else perf
            generated = generate_adaptive_task(current, task)
            final = replay_witness(task, generated)
            assert satisfies(final, generated.goal)


def test_pop_order_nondecreasing_with_fifo_ties(coffee_task):
    perf = PerformanceMap({"move": 1, "pick": 2, "place": 1})
    pops: list[tuple[int, int]] = []
    generate_adaptive_task(perf, coffee_task, pop_trace=pops)
    costs = [c for c, _ in pops]
    assert costs == sorted(costs)
    for (c1, s1), (c2, s2) in zip(pops, pops[1:]):
        if c1 == c2:
            assert s1 < s2  # FIFO among equal costs


def test_generation_impossible_without_applicable_action(coffee_task):
    stuck = coffee_task.with_goal(coffee_task.goal)
    stuck.actions = []  # no applicable actions at all
    perf = PerformanceMap.cold_start(coffee_task.domain.schema_names())
    with pytest.raises(TaskGenerationError):
        generate_adaptive_task(perf, stuck)


def test_random_task_depth_one(coffee_task):
    generated = generate_random_task(coffee_task, 1, rng_seed=3)
    assert generated.reference_plan_length == 1
    distance = bfs_distance(coffee_task.init.atoms, generated.goal, as_triples(coffee_task.actions))
    assert distance is not None and distance <= 1


def test_random_task_depth_four_within_bfs_distance(coffee_task):
    generated = generate_random_task(coffee_task, 4, rng_seed=11)
    distance = bfs_distance(coffee_task.init.atoms, generated.goal, as_triples(coffee_task.actions))
    assert distance is not None and distance <= 4
    assert satisfies(replay_witness(coffee_task, generated), generated.goal)


def test_random_task_seeded_determinism(coffee_task):
    a = generate_random_task(coffee_task, 3, rng_seed=42)
    b = generate_random_task(coffee_task, 3, rng_seed=42)
    assert a.goal == b.goal
    assert a.witness == b.witness


def test_random_task_reports_max_achievable_depth(hanoi_task):
    # hanoi's reachable space has 27 states; far beyond its diameter the
    # frontier dries up and the error names the deepest level reached
    with pytest.raises(TaskGenerationError) as err:
        generate_random_task(hanoi_task, 50, rng_seed=1)
    assert err.value.max_depth is not None
    assert 0 < err.value.max_depth < 50


def test_training_series_respects_half_length_cap(coffee_task):
    perf = PerformanceMap.cold_start(coffee_task.domain.schema_names())
    tasks = training_task_series(perf, coffee_task, test_task_length=16)
    assert len(tasks) == 3
    assert all(t.reference_plan_length <= 8 for t in tasks)


def test_training_series_minimum_cap(coffee_task):
    perf = PerformanceMap.cold_start(coffee_task.domain.schema_names())
    tasks = training_task_series(perf, coffee_task, test_task_length=2)
    assert all(t.reference_plan_length == 1 for t in tasks)


def test_training_series_cap_below_max_depth(coffee_task):
    perf = PerformanceMap({"move": 1, "pick": 1, "place": 1})
    tasks = training_task_series(perf, coffee_task, test_task_length=4, max_depth=4)
    assert all(t.trigger[1] <= 2 for t in tasks)


def test_simulated_learner_reaches_full_coverage(coffee_task, hanoi_task):
    # a learner that "knows" a schema after one successful use needs at
    # most |schemas| + 1 adaptive tasks to see them all
    for task in (coffee_task, hanoi_task):
        schemas = task.domain.schema_names()
        perf = PerformanceMap.cold_start(schemas)
        tasks_used = 0
        while min(perf.costs.values()) == 0:
            generated = generate_adaptive_task(perf, task)
            tasks_used += 1
            assert tasks_used <= len(schemas) + 1
            # pre-cap tasks require exactly one previously unknown schema
            unknown_used = {s.name for s in generated.witness if perf.costs[s.name] == 0}
            if generated.trigger[1] < 4:
                assert len(unknown_used) == 1
            state = task.init
            for step in generated.witness:
                action = task.find_action(step.name, step.args)
                perf = update_performance(perf, step.name, state, action, hinted=False)
                state = State((state.atoms - action.delete) | action.add)
        assert tasks_used <= len(schemas) + 1
