"""Plan validation with skip-and-continue multi-failure semantics.

Steps are checked sequentially from the initial state. An applicable step
is applied; an inapplicable step is recorded as a failure with its unmet
preconditions and treated as a no-op so later steps are still diagnosed.
The state trace stops at the first failure (the display truncation rule),
while the final state reflects the full skip-and-continue pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pddl.grounding import GroundedTask
from .pddl.model import Atom
from .state import GroundAction, State, apply, satisfies, unmet_preconditions


class PlanResolutionError(Exception):
    """A step names no ground action: unknown schema, objects, or arity.

    Distinct from a semantic failure; the plan cannot even be interpreted.
    """

    def __init__(self, step_index: int, message: str):
        self.step_index = step_index
        super().__init__(f"step {step_index + 1}: {message}")


@dataclass(frozen=True)
class PlanStep:
    name: str
    args: tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> PlanStep:
        """Parse ``(move d1 d2 peg3)`` or ``move d1 d2 peg3``."""
        parts = text.strip().strip("()").split()
        if not parts:
            raise ValueError("empty plan step")
        return cls(parts[0].lower(), tuple(p.lower() for p in parts[1:]))


@dataclass
class Plan:
    steps: list[PlanStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Failure:
    step_index: int  # 0-based position in the plan
    action: GroundAction
    unmet: frozenset[Atom]


@dataclass
class TraceStep:
    label: str
    state: State
    added: frozenset[Atom]
    removed: frozenset[Atom]


@dataclass
class ValidationReport:
    step_status: list[str]  # "valid" | "invalid" per step
    failures: list[Failure]
    trace: list[State]
    is_valid: bool
    goal_achieved: bool
    final_state: State
    pre_states: list[State] = field(default_factory=list)  # working state before each step


def resolve_plan(task: GroundedTask, plan: Plan) -> list[GroundAction]:
    actions = []
    for i, step in enumerate(plan.steps):
        action = task.find_action(step.name, step.args)
        if action is None:
            if task.domain.schema(step.name) is None:
                raise PlanResolutionError(i, f"unknown action {step.name!r}")
            raise PlanResolutionError(
                i,
                f"no ground action {step.name}({', '.join(step.args)}): "
                "check the argument objects and their order",
            )
        actions.append(action)
    return actions


def validate(task: GroundedTask, plan: Plan) -> ValidationReport:
    actions = resolve_plan(task, plan)
    working = task.init
    trace = [working]
    pre_states: list[State] = []
    step_status: list[str] = []
    failures: list[Failure] = []

    for i, action in enumerate(actions):
        pre_states.append(working)
        unmet = unmet_preconditions(working, action)
        if unmet:
            step_status.append("invalid")
            failures.append(Failure(i, action, unmet))
        else:
            step_status.append("valid")
            working = apply(working, action)
            if not failures:
                trace.append(working)

    # goal is judged on the state reached by the uninterrupted valid prefix
    return ValidationReport(
        step_status=step_status,
        failures=failures,
        trace=trace,
        is_valid=not failures,
        goal_achieved=satisfies(trace[-1], task.goal),
        final_state=working,
        pre_states=pre_states,
    )


def state_trace(task: GroundedTask, plan: Plan) -> list[TraceStep]:
    """Per-step states with added/removed deltas, truncated at the first failure."""
    actions = resolve_plan(task, plan)
    entries = [TraceStep("init", task.init, frozenset(), frozenset())]
    current = task.init
    for action in actions:
        if unmet_preconditions(current, action):
            break
        nxt = apply(current, action)
        entries.append(
            TraceStep(
                label=action.name,
                state=nxt,
                added=nxt.atoms - current.atoms,
                removed=current.atoms - nxt.atoms,
            )
        )
        current = nxt
    return entries
