"""Prompt assembly and the pluggable chat-completion client.

The model is used strictly as a translator: prompts are fixed templates
carrying the domain/problem PDDL, the reached state, and the template
explanation or hint. Prompts never include session or user identifiers.
Every failure mode (disabled, timeout, HTTP error, malformed body) maps
to a fallback signal (None) so callers degrade to template-only output.
"""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass

import httpx

logger = logging.getLogger(__name__)

_QUESTIONS = (
    "Can you please convert the explanation into a brief, more non-expert friendly "
    "message that a novice user can understand? Also, can you suggested briefly what "
    "could be done to fix the issue, taking into account the state reached by the plan so far?"
)

EXPLANATION_PROMPT_TEMPLATE = (
    "The following lines describe the {domain_name} domain file :\n"
    "{domain_text}\n"
    "\n"
    "The problem to be solved is described in pddl format  as:\n"
    "{problem_text}\n"
    "\n"
    "While running a plan for a problem, an action failed and an explanation "
    "generator was used to generate the following explanation:\n"
    "Explanation:  {payload_text}\n"
    "\n"
    "The state of the problem - which means the set of predicates that are true "
    "in the plan upto the first invalid action are as follows\n"
    "State: {state_text}\n"
    "\n" + _QUESTIONS
)

HINT_PROMPT_TEMPLATE = (
    "This is the pddl domain file for the {domain_name} domain :\n"
    "{domain_text}\n"
    "\n"
    "A user has to solve a this problem task described in pddl\n"
    "{problem_text}\n"
    "\n"
    "The plan was run till the problem reached this state - that is the set of "
    "predicates that are true :\n"
    "{state_text}\n"
    "\n"
    "And the hint generated, which suggests which next action to take with certain "
    "arguments to actions replaced with ? is given below:\n"
    "{payload_text}\n"
    "\n" + _QUESTIONS
)

_DOMAIN_NAME_RE = re.compile(r"\(\s*define\s*\(\s*domain\s+([^)\s]+)", re.IGNORECASE)


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-3.5-turbo"
    api_key_env: str = "OPENAI_API_KEY"  # name of the variable, never the key itself
    timeout: float = 10.0
    enabled: bool = False
    temperature: float = 0.0


@dataclass(frozen=True)
class PromptBundle:
    kind: str  # explanation | hint
    domain_text: str
    problem_text: str
    payload_text: str
    state_text: str
    rendered: str


def _domain_name(domain_text: str) -> str:
    match = _DOMAIN_NAME_RE.search(domain_text)
    return match.group(1) if match else "given"


def _build(kind: str, template: str, domain_text: str, problem_text: str, payload_text: str, state_text: str) -> PromptBundle:
    for label, value in (
        ("domain_text", domain_text),
        ("problem_text", problem_text),
        ("payload_text", payload_text),
        ("state_text", state_text),
    ):
        if not value:
            raise ValueError(f"{kind} prompt requires a nonempty {label}")
    rendered = template.format(
        domain_name=_domain_name(domain_text),
        domain_text=domain_text,
        problem_text=problem_text,
        payload_text=payload_text,
        state_text=state_text,
    )
    return PromptBundle(kind, domain_text, problem_text, payload_text, state_text, rendered)


def build_explanation_prompt(domain_text: str, problem_text: str, explanation_tldr: str, state_text: str) -> PromptBundle:
    return _build("explanation", EXPLANATION_PROMPT_TEMPLATE, domain_text, problem_text, explanation_tldr, state_text)


def build_hint_prompt(domain_text: str, problem_text: str, hint_text: str, state_text: str) -> PromptBundle:
    return _build("hint", HINT_PROMPT_TEMPLATE, domain_text, problem_text, hint_text, state_text)


def translate(bundle: PromptBundle, cfg: LlmConfig) -> str | None:
    """Send the prompt as a single user message; None signals fallback."""
    if not cfg.enabled:
        return None
    headers = {}
    api_key = os.environ.get(cfg.api_key_env, "")
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    payload = {
        "model": cfg.model,
        "messages": [{"role": "user", "content": bundle.rendered}],
        "temperature": cfg.temperature,
    }
    try:
        response = httpx.post(cfg.endpoint, json=payload, headers=headers, timeout=cfg.timeout)
        response.raise_for_status()
        data = response.json()
        content = data["choices"][0]["message"]["content"]
        if not isinstance(content, str) or not content.strip():
            raise ValueError("empty completion")
        return content
    except Exception as exc:  # noqa: BLE001 - fallback totality is the contract
        logger.warning("translation failed (%s); falling back to template output", exc)
        return None
