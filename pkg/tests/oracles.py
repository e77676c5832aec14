"""Independent reference implementations used to check the real modules.

Everything here works on raw atom sets and (pre, add, delete) triples so
it shares no code with the package under test.
"""

from __future__ import annotations

from collections import deque


def naive_validate(init_atoms, goal_atoms, steps):
    """Skip-and-continue interpreter over (pre, add, delete) triples.

    Returns (statuses, failures, trace, final_atoms, goal_achieved) where
    failures are (index, unmet_set) pairs and the trace stops at the state
    before the first failing step.
    """
    state = set(init_atoms)
    statuses = []
    failures = []
    trace = [frozenset(state)]
    failed_once = False
    for i, (pre, add, delete) in enumerate(steps):
        unmet = set(pre) - state
        if unmet:
            statuses.append("invalid")
            failures.append((i, frozenset(unmet)))
            failed_once = True
        else:
            statuses.append("valid")
            state = (state - set(delete)) | set(add)
            if not failed_once:
                trace.append(frozenset(state))
    goal_achieved = set(goal_atoms) <= trace[-1]
    return statuses, failures, trace, frozenset(state), goal_achieved


def successors(atoms, actions):
    """(action_index, next_atoms) for every applicable (pre, add, delete)."""
    out = []
    for i, (pre, add, delete) in enumerate(actions):
        if set(pre) <= atoms:
            out.append((i, frozenset((atoms - set(delete)) | set(add))))
    return out


def bfs_optimal_plan(init_atoms, goal_atoms, actions):
    """Exhaustive breadth-first search; returns the shortest plan as a list
    of action indices, or None when the goal is unreachable."""
    start = frozenset(init_atoms)
    goal = set(goal_atoms)
    if goal <= start:
        return []
    seen = {start}
    queue = deque([(start, [])])
    while queue:
        atoms, path = queue.popleft()
        for idx, nxt in successors(atoms, actions):
            if nxt in seen:
                continue
            seen.add(nxt)
            if goal <= nxt:
                return path + [idx]
            queue.append((nxt, path + [idx]))
    return None


def bfs_distance(init_atoms, goal_atoms, actions):
    plan = bfs_optimal_plan(init_atoms, goal_atoms, actions)
    return None if plan is None else len(plan)


def reachable_states(init_atoms, actions, max_depth=None):
    """All states reachable from init, optionally bounded by depth."""
    start = frozenset(init_atoms)
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        nxt_frontier = []
        for atoms in frontier:
            for _, nxt in successors(atoms, actions):
                if nxt not in seen:
                    seen.add(nxt)
                    nxt_frontier.append(nxt)
        frontier = nxt_frontier
        depth += 1
    return seen


def as_triples(ground_actions):
    """Adapt package GroundAction objects to raw (pre, add, delete) triples."""
    return [(a.pre, a.add, a.delete) for a in ground_actions]
