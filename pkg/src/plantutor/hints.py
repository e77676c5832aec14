"""Next-action hints with per-argument obscuring.

The hint is the first action of a fresh forward search from the learner's
current state. Each argument is shown independently with the configured
reveal probability; hidden arguments render as ``?``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .explain import SemanticMap
from .pddl.grounding import GroundedTask
from .search import STATUS_FOUND, h_add, plan_search
from .state import GroundAction, State

HINT_PREFIX = "You might want to try the action: "

STATUS_OK = "ok"
STATUS_HINT_TIMEOUT = "hint-timeout"
STATUS_UNSOLVABLE = "unsolvable"
STATUS_ALREADY_SOLVED = "already-solved"

STATUS_MESSAGES = {
    STATUS_HINT_TIMEOUT: "No hint could be computed within the time limit. Try simplifying your plan.",
    STATUS_UNSOLVABLE: "The goal cannot be reached from the current state. Try removing some steps.",
    STATUS_ALREADY_SOLVED: "Your plan already reaches the goal. Nothing left to hint!",
}


@dataclass(frozen=True)
class HintConfig:
    reveal_probability: float = 0.5
    timeout: float = 5.0
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.reveal_probability <= 1.0:
            raise ValueError("reveal_probability must be in [0, 1]")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class Hint:
    action: GroundAction
    visible: tuple[bool, ...]
    text: str


@dataclass
class HintOutcome:
    status: str  # ok | hint-timeout | unsolvable | already-solved
    hint: Hint | None = None

    @property
    def message(self) -> str:
        if self.status == STATUS_OK and self.hint is not None:
            return self.hint.text
        return STATUS_MESSAGES[self.status]


def sample_mask(arity: int, reveal_probability: float, rng: random.Random) -> tuple[bool, ...]:
    return tuple(rng.random() < reveal_probability for _ in range(arity))


def render_hint_text(action: GroundAction, visible: tuple[bool, ...], smap: SemanticMap) -> str:
    shown = [smap.display(arg) if vis else "?" for arg, vis in zip(action.args, visible)]
    template = smap.action_templates.get(action.schema_name)
    if template is None:
        body = " ".join([action.schema_name] + shown)
    else:
        body = template.format(*shown)
    return HINT_PREFIX + body


def next_hint(
    task: GroundedTask,
    current: State,
    cfg: HintConfig,
    smap: SemanticMap,
    rng: random.Random | None = None,
    heuristic=h_add,
) -> HintOutcome:
    """Plan from ``current`` and obscure the first action's arguments.

    A caller-provided rng keeps one reproducible mask stream across calls;
    otherwise a fresh stream is seeded from the config.
    """
    result = plan_search(task, current, timeout=cfg.timeout, heuristic=heuristic)
    if result.status != STATUS_FOUND:
        return HintOutcome(STATUS_HINT_TIMEOUT if result.status == "timeout" else STATUS_UNSOLVABLE)
    assert result.plan is not None
    if not result.plan:
        return HintOutcome(STATUS_ALREADY_SOLVED)
    action = result.plan[0]
    if rng is None:
        rng = random.Random(cfg.rng_seed)
    visible = sample_mask(action.arity, cfg.reveal_probability, rng)
    return HintOutcome(STATUS_OK, Hint(action, visible, render_hint_text(action, visible, smap)))
