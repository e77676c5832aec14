"""Forward state-space search used for hint generation.

Greedy best-first search over the additive delete-relaxation heuristic,
with a duplicate-state closed set and a cooperative deadline. The
heuristic is a plain callable, so other strategies plug in; passing the
zero heuristic degenerates to breadth-first search and therefore returns
optimal-length plans.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from heapq import heappop, heappush

from .pddl.grounding import GroundedTask
from .pddl.model import Atom
from .state import GroundAction, State, apply, is_applicable, satisfies

INF = float("inf")

STATUS_FOUND = "found"
STATUS_TIMEOUT = "timeout"
STATUS_UNSOLVABLE = "unsolvable"


@dataclass
class SearchResult:
    status: str  # found | timeout | unsolvable
    plan: list[GroundAction] | None = None
    expanded: int = 0


def h_add(state: State, goal: frozenset[Atom], actions: list[GroundAction]) -> float:
    """Additive heuristic: per-atom achievement costs under delete relaxation."""
    cost: dict[Atom, float] = {atom: 0.0 for atom in state.atoms}
    changed = True
    while changed:
        changed = False
        for action in actions:
            total = 1.0
            for p in action.pre:
                pc = cost.get(p, INF)
                if pc == INF:
                    total = INF
                    break
                total += pc
            if total == INF:
                continue
            for q in action.add:
                if total < cost.get(q, INF):
                    cost[q] = total
                    changed = True
    result = 0.0
    for g in goal:
        gc = cost.get(g, INF)
        if gc == INF:
            return INF
        result += gc
    return result


def zero_heuristic(state: State, goal: frozenset[Atom], actions: list[GroundAction]) -> float:
    return 0.0


def plan_search(
    task: GroundedTask,
    start: State,
    timeout: float = 5.0,
    heuristic=h_add,
) -> SearchResult:
    """Search for a plan from ``start`` to the task goal.

    Returns a found plan, a timeout status once the deadline passes, or an
    unsolvable status when the reachable space is exhausted.
    """
    if satisfies(start, task.goal):
        return SearchResult(STATUS_FOUND, [])
    deadline = time.monotonic() + timeout

    seq = 0
    heap: list[tuple[float, int, State, tuple[GroundAction, ...]]] = []
    heappush(heap, (heuristic(start, task.goal, task.actions), seq, start, ()))
    closed = {start.atoms}
    expanded = 0

    while heap:
        if time.monotonic() >= deadline:
            return SearchResult(STATUS_TIMEOUT, expanded=expanded)
        _, _, state, path = heappop(heap)
        expanded += 1
        for action in task.actions:
            if not is_applicable(state, action):
                continue
            nxt = apply(state, action)
            if nxt.atoms in closed:
                continue
            closed.add(nxt.atoms)
            new_path = path + (action,)
            if satisfies(nxt, task.goal):
                return SearchResult(STATUS_FOUND, list(new_path), expanded)
            seq += 1
            heappush(heap, (heuristic(nxt, task.goal, task.actions), seq, nxt, new_path))

    return SearchResult(STATUS_UNSOLVABLE, expanded=expanded)
