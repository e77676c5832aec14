"""Learner-performance tracking and adaptive task generation.

The performance map holds one nonnegative integer cost per action schema:
correct unhinted use increments it, mistakes and hinted use decrement it
(clamped at zero), so zero marks an action the learner has not yet shown
they know.

Adaptive generation runs a greedy search over the state space: a min
priority queue keyed by cumulative schema cost with FIFO tie-breaking,
expanding applicable actions in canonical order. The first expansion that
either uses a zero-cost schema or reaches the depth cap ends the search,
and the resulting state's new atoms (relative to the initial state)
become the goal. The random generator is plain breadth-first search to a
fixed depth with a uniformly sampled frontier state.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from heapq import heappop, heappush

from .pddl.grounding import GroundedTask
from .pddl.model import Atom
from .state import GroundAction, State, apply, is_applicable
from .validation import PlanStep

DEFAULT_MAX_DEPTH = 4


class TaskGenerationError(Exception):
    def __init__(self, message: str, max_depth: int | None = None):
        self.max_depth = max_depth
        super().__init__(message)


@dataclass
class PerformanceMap:
    costs: dict[str, int]

    @classmethod
    def cold_start(cls, schema_names) -> PerformanceMap:
        """A new learner is assumed not proficient at any action."""
        return cls({name: 0 for name in schema_names})

    def cost(self, schema: str) -> int:
        return self.costs[schema]

    def copy(self) -> PerformanceMap:
        return PerformanceMap(dict(self.costs))


def update_performance(
    perf: PerformanceMap,
    schema: str,
    state: State,
    action: GroundAction,
    hinted: bool,
) -> PerformanceMap:
    """One tracking step: cost up on correct unhinted use, down otherwise."""
    if schema not in perf.costs:
        raise KeyError(f"unknown action schema {schema!r}")
    updated = perf.copy()
    if is_applicable(state, action) and not hinted:
        updated.costs[schema] += 1
    else:
        updated.costs[schema] = max(0, updated.costs[schema] - 1)
    return updated


@dataclass(frozen=True)
class SearchNode:
    s: State
    c: int  # cumulative schema cost
    d: int  # depth
    seq: int  # insertion order, breaks priority ties
    path: tuple[PlanStep, ...] = ()


@dataclass
class GeneratedTask:
    goal: frozenset[Atom]
    provenance: str  # adaptive | random | preset
    trigger: tuple[str, int] | None  # (schema, depth) that ended the adaptive search
    reference_plan_length: int
    witness: tuple[PlanStep, ...]  # generating path from init, replays to the goal


def _step(action: GroundAction) -> PlanStep:
    return PlanStep(action.schema_name, action.args)


def generate_adaptive_task(
    perf: PerformanceMap,
    task: GroundedTask,
    max_depth: int = DEFAULT_MAX_DEPTH,
    pop_trace: list[tuple[int, int]] | None = None,
) -> GeneratedTask:
    """Greedy cost-directed search for the next practice goal.

    ``pop_trace`` (when given) collects (cost, seq) per fringe pop for
    instrumentation.
    """
    if not any(is_applicable(task.init, a) for a in task.actions):
        raise TaskGenerationError("no action is applicable in the initial state")

    fringe: list[tuple[int, int, SearchNode]] = []
    seq = 0
    heappush(fringe, (0, seq, SearchNode(task.init, 0, 0, seq)))
    visited = {task.init.atoms}
    last_expansion: tuple[State, str, int, tuple[PlanStep, ...]] | None = None

    while fringe:
        cost, _, node = heappop(fringe)
        if pop_trace is not None:
            pop_trace.append((cost, node.seq))
        for action in task.actions:
            if not is_applicable(node.s, action):
                continue
            nxt = apply(node.s, action)
            schema_cost = perf.cost(action.schema_name)
            next_cost = node.c + schema_cost
            next_depth = node.d + 1
            path = node.path + (_step(action),)
            if schema_cost == 0 or next_depth >= max_depth:
                return GeneratedTask(
                    goal=nxt.atoms - task.init.atoms,
                    provenance="adaptive",
                    trigger=(action.schema_name, next_depth),
                    reference_plan_length=next_depth,
                    witness=path,
                )
            last_expansion = (nxt, action.schema_name, next_depth, path)
            if nxt.atoms not in visited:
                visited.add(nxt.atoms)
                seq += 1
                heappush(fringe, (next_cost, seq, SearchNode(nxt, next_cost, next_depth, seq, path)))

    # Reachable space exhausted below the depth cap with every schema known:
    # fall back to the deepest expansion seen (deterministic).
    assert last_expansion is not None
    nxt, schema, depth, path = last_expansion
    return GeneratedTask(
        goal=nxt.atoms - task.init.atoms,
        provenance="adaptive",
        trigger=(schema, depth),
        reference_plan_length=depth,
        witness=path,
    )


def generate_random_task(task: GroundedTask, depth: int, rng_seed: int | None = None) -> GeneratedTask:
    """Equal-cost BFS to exactly ``depth`` levels; goal from a random frontier state."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    frontier: list[tuple[State, tuple[PlanStep, ...]]] = [(task.init, ())]
    visited = {task.init.atoms}
    reached = 0
    for level in range(1, depth + 1):
        nxt_frontier: list[tuple[State, tuple[PlanStep, ...]]] = []
        for state, path in frontier:
            for action in task.actions:
                if not is_applicable(state, action):
                    continue
                nxt = apply(state, action)
                if nxt.atoms in visited:
                    continue
                visited.add(nxt.atoms)
                nxt_frontier.append((nxt, path + (_step(action),)))
        if not nxt_frontier:
            raise TaskGenerationError(
                f"no new states at depth {level}; maximum achievable depth is {reached}",
                max_depth=reached,
            )
        frontier = nxt_frontier
        reached = level

    state, path = random.Random(rng_seed).choice(frontier)
    return GeneratedTask(
        goal=state.atoms - task.init.atoms,
        provenance="random",
        trigger=None,
        reference_plan_length=depth,
        witness=path,
    )


def training_task_series(
    perf: PerformanceMap,
    task: GroundedTask,
    test_task_length: int,
    count: int = 3,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[GeneratedTask]:
    """Adaptive training tasks needing at most half the test task's steps.

    Simulates a learner that solves each task via its witness path, so
    successive tasks progress through the schema set.
    """
    if test_task_length < 2:
        raise ValueError("test_task_length must be at least 2")
    cap = min(max_depth, math.ceil(test_task_length / 2))
    tasks = []
    current = perf.copy()
    for _ in range(count):
        generated = generate_adaptive_task(current, task, max_depth=cap)
        tasks.append(generated)
        state = task.init
        for step in generated.witness:
            action = task.find_action(step.name, step.args)
            assert action is not None
            current = update_performance(current, action.schema_name, state, action, hinted=False)
            state = apply(state, action)
    return tasks


def replay_witness(task: GroundedTask, generated: GeneratedTask) -> State:
    """Apply the witness path from init; proves the generated goal reachable."""
    state = task.init
    for step in generated.witness:
        action = task.find_action(step.name, step.args)
        if action is None:
            raise TaskGenerationError(f"witness step {step} does not resolve")
        state = apply(state, action)
    return state
