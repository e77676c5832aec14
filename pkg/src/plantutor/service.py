"""HTTP facade: sessions, task generation, validation, hints, execution.

Each request loads the session snapshot, does pure computation through
the core modules, records events, and returns JSON. Hint searches run on
a small worker pool with a cooperative deadline and at most one in-flight
search per session.
"""

from __future__ import annotations

import dataclasses
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import curriculum, llm
from .config import AppConfig
from .envs import Environment, EnvironmentRegistry, load_builtin
from .explain import Explanation, explanations_for_report, render_action_nl, render_atom_nl
from .hints import STATUS_OK, HintConfig, HintOutcome, next_hint
from .pddl.grounding import GroundedTask
from .pddl.writer import problem_to_pddl
from .sessions import Event, SessionStore, UnknownSessionError, session_task_outcomes
from .validation import Plan, PlanResolutionError, PlanStep, state_trace, validate

DETAIL_LIMIT = 2  # failures that get a long-form translation


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int = 400, details: dict | None = None):
        self.code = code
        self.message = message
        self.status = status
        self.details = details
        super().__init__(message)


class SessionRequest(BaseModel):
    domain: str


class StepModel(BaseModel):
    name: str
    args: list[str] = Field(default_factory=list)


class PlanRequest(BaseModel):
    plan: list[StepModel] = Field(default_factory=list)


class TaskRequest(BaseModel):
    mode: str = "adaptive"
    preset_id: str | None = None
    depth: int | None = None
    seed: int | None = None


def _to_plan(body: PlanRequest) -> Plan:
    return Plan([PlanStep(s.name.lower(), tuple(a.lower() for a in s.args)) for s in body.plan])


def _atoms_json(atoms) -> list[str]:
    return ["(" + " ".join(a) + ")" for a in sorted(atoms)]


def _parse_atoms(strings) -> frozenset:
    return frozenset(tuple(s.strip("()").split()) for s in strings)


class TutorService:
    """Shared state behind the FastAPI routes."""

    def __init__(self, config: AppConfig, registry: EnvironmentRegistry, store: SessionStore):
        self.config = config
        self.registry = registry
        self.store = store
        self.hint_pool = ThreadPoolExecutor(max_workers=2, thread_name_prefix="hint")
        self.llm_slots = threading.Semaphore(4)
        self._hint_lock = threading.Lock()
        self._hints_in_flight: set[str] = set()
        self._mask_rngs: dict[str, random.Random] = {}

    # -- session plumbing --------------------------------------------------

    def session(self, session_id: str):
        try:
            return self.store.get(session_id)
        except UnknownSessionError:
            raise ApiError("unknown_session", f"no session {session_id!r}", 404)

    def environment(self, name: str) -> Environment:
        try:
            return self.registry.get(name)
        except KeyError:
            raise ApiError("unknown_domain", f"no domain {name!r}", 404)

    def grounded_for(self, session) -> GroundedTask:
        env = self.environment(session.domain_name)
        task = session.current_task
        if task is None:
            raise ApiError("no_task", "generate or select a task first", 409)
        grounded = env.grounded(task["preset"])
        return grounded.with_goal(_parse_atoms(task["goal"]))

    def mask_rng(self, session_id: str) -> random.Random:
        if session_id not in self._mask_rngs:
            self._mask_rngs[session_id] = random.Random(self.config.hint_rng_seed)
        return self._mask_rngs[session_id]

    def last_plan(self, session) -> Plan:
        for event in reversed(session.history):
            if event.kind == "validation":
                return Plan(
                    [PlanStep(s["name"], tuple(s["args"])) for s in event.payload["plan"]]
                )
        return Plan([])

    def goal_nl(self, env: Environment, goal) -> str:
        if not goal:
            return "Any state satisfies this task."
        parts = [render_atom_nl(atom, env.semantic_map) for atom in sorted(goal)]
        return "Reach a state where " + " and ".join(parts) + "."

    def _task_doc(self, env: Environment, preset: str, task_id: str, generated) -> dict:
        return {
            "task_id": task_id,
            "provenance": generated.provenance,
            "preset": preset,
            "goal": _atoms_json(generated.goal),
            "goal_nl": self.goal_nl(env, generated.goal),
            "reference_plan_length": generated.reference_plan_length,
            "trigger": list(generated.trigger) if generated.trigger else None,
            "witness": [{"name": s.name, "args": list(s.args)} for s in generated.witness],
        }

    def _problem_text(self, env: Environment, session) -> str:
        preset = session.current_task["preset"]
        goal = _parse_atoms(session.current_task["goal"])
        problem = env.problems[preset]
        if goal == problem.goal:
            return env.problem_texts[preset]
        return problem_to_pddl(dataclasses.replace(problem, goal=goal))

    def translator(self, env: Environment, session, state_text: str):
        if not self.config.llm.enabled:
            return None
        domain_text = env.domain_text
        problem_text = self._problem_text(env, session)

        def run(explanation: Explanation) -> str | None:
            bundle = llm.build_explanation_prompt(
                domain_text, problem_text, explanation.tldr, state_text
            )
            with self.llm_slots:
                return llm.translate(bundle, self.config.llm)

        return run

    # -- event recording ----------------------------------------------------

    def record_plan_events(self, session, report, plan: Plan, actions) -> None:
        previous = self.last_plan(session).steps
        common = 0
        for old, new in zip(previous, plan.steps):
            if old != new:
                break
            common += 1
        now = time.time()
        for i in range(common, len(plan.steps)):
            self.store.record_event(
                session.session_id,
                Event(
                    kind="plan_edit",
                    timestamp=now,
                    payload={
                        "step": {"name": plan.steps[i].name, "args": list(plan.steps[i].args)},
                        "state": report.pre_states[i].to_strings(),
                        "pre": _atoms_json(actions[i].pre),
                    },
                ),
            )
        self.store.record_event(
            session.session_id,
            Event(
                kind="validation",
                timestamp=now,
                payload={
                    "plan": [{"name": s.name, "args": list(s.args)} for s in plan.steps],
                    "is_valid": report.is_valid,
                    "goal_achieved": report.goal_achieved,
                },
            ),
        )


def _report_json(report) -> dict:
    return {
        "step_status": report.step_status,
        "failures": [
            {
                "step_index": f.step_index,
                "action": {"name": f.action.schema_name, "args": list(f.action.args)},
                "unmet": _atoms_json(f.unmet),
            }
            for f in report.failures
        ],
        "trace": [s.to_strings() for s in report.trace],
        "is_valid": report.is_valid,
        "goal_achieved": report.goal_achieved,
        "final_state": report.final_state.to_strings(),
    }


def _explanation_json(explanation: Explanation) -> dict:
    return {
        "step_index": explanation.step_index,
        "action_nl": explanation.action_nl,
        "reasons_nl": explanation.reasons_nl,
        "tldr": explanation.tldr,
        "detailed": explanation.detailed,
        "source": explanation.source,
    }


def _trace_json(entries, env: Environment, grounded: GroundedTask) -> list[dict]:
    frames = []
    for entry in entries:
        if entry.label == "init":
            nl = "Initial state"
        else:
            step = PlanStep.parse(entry.label)
            action = grounded.find_action(step.name, step.args)
            nl = render_action_nl(action, env.semantic_map)
        frames.append(
            {
                "label": entry.label,
                "nl": nl,
                "state": entry.state.to_strings(),
                "added": _atoms_json(entry.added),
                "removed": _atoms_json(entry.removed),
            }
        )
    return frames


def create_app(
    config: AppConfig | None = None,
    registry: EnvironmentRegistry | None = None,
) -> FastAPI:
    config = config or AppConfig()
    if registry is None:
        registry = load_builtin()
        if config.env_dir:
            registry.load_directory(config.env_dir)
    store = SessionStore(Path(config.data_dir) / "sessions", registry.schema_map())
    service = TutorService(config, registry, store)

    app = FastAPI(title="plantutor", version="0.1.0")
    app.state.service = service

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError):
        body = {"code": exc.code, "message": exc.message}
        if exc.details is not None:
            body["details"] = exc.details
        return JSONResponse(status_code=exc.status, content=body)

    @app.get("/api/domains")
    def list_domains():
        out = []
        for name in service.registry.names():
            env = service.registry.get(name)
            out.append(
                {
                    "name": name,
                    "description": env.description,
                    "default_preset": env.default_preset,
                    "presets": [
                        {
                            "id": preset,
                            "goal_nl": service.goal_nl(env, env.problems[preset].goal),
                            "reference_plan_length": len(env.reference_plans[preset]),
                        }
                        for preset in sorted(env.problems)
                    ],
                    "schemas": [
                        {
                            "name": schema.name,
                            "params": [{"name": p.name, "type": p.type} for p in schema.params],
                            "label": env.semantic_map.action_templates[schema.name],
                        }
                        for schema in env.domain.schemas
                    ],
                }
            )
        return out

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionRequest):
        env = service.environment(body.domain)
        session = service.store.create_session(env.name)
        return {
            "session_id": session.session_id,
            "domain": session.domain_name,
            "performance": dict(session.performance.costs),
        }

    @app.post("/api/sessions/{session_id}/task")
    def next_task(session_id: str, body: TaskRequest):
        session = service.session(session_id)
        env = service.environment(session.domain_name)
        preset = env.default_preset
        grounded = env.grounded(preset)
        sequence = 1 + sum(1 for e in session.history if e.kind == "task_generated")

        if body.mode == "adaptive":
            try:
                generated = curriculum.generate_adaptive_task(
                    session.performance, grounded, max_depth=service.config.max_depth
                )
            except curriculum.TaskGenerationError as exc:
                raise ApiError("generation_impossible", str(exc), 409)
            task_id = f"adaptive-{sequence}"
        elif body.mode == "random":
            depth = body.depth or service.config.max_depth
            try:
                generated = curriculum.generate_random_task(grounded, depth, body.seed)
            except curriculum.TaskGenerationError as exc:
                raise ApiError(
                    "generation_impossible", str(exc), 409, {"max_depth": exc.max_depth}
                )
            task_id = f"random-{sequence}"
        elif body.mode == "preset":
            if body.preset_id is None or body.preset_id not in env.problems:
                raise ApiError("unknown_preset", f"no preset {body.preset_id!r}", 404)
            preset = body.preset_id
            reference = env.reference_plans[preset]
            generated = curriculum.GeneratedTask(
                goal=env.problems[preset].goal,
                provenance="preset",
                trigger=None,
                reference_plan_length=len(reference),
                witness=tuple(reference.steps),
            )
            task_id = f"preset:{preset}"
        else:
            raise ApiError("bad_mode", f"unknown task mode {body.mode!r}", 422)

        task_doc = service._task_doc(env, preset, task_id, generated)
        service.store.record_event(
            session_id,
            Event(kind="task_generated", timestamp=time.time(), payload={"task_id": task_id, "task": task_doc}),
        )
        objects = [
            {"name": o.name, "type": o.type, "display": env.semantic_map.display(o.name)}
            for o in env.problems[preset].objects
        ]
        return {"task": task_doc, "objects": objects, "description": env.description}

    @app.post("/api/sessions/{session_id}/validate")
    def validate_plan(session_id: str, body: PlanRequest):
        session = service.session(session_id)
        env = service.environment(session.domain_name)
        grounded = service.grounded_for(session)
        plan = _to_plan(body)
        try:
            report = validate(grounded, plan)
        except PlanResolutionError as exc:
            raise ApiError("unresolvable_step", str(exc), 422, {"step_index": exc.step_index})

        actions = [grounded.find_action(s.name, s.args) for s in plan.steps]
        service.record_plan_events(session, report, plan, actions)

        state_text = ", ".join(report.trace[-1].to_strings())
        explanations = explanations_for_report(
            report,
            env.semantic_map,
            detail_limit=DETAIL_LIMIT,
            translator=service.translator(env, session, state_text),
        )
        return {
            "report": _report_json(report),
            "explanations": [_explanation_json(e) for e in explanations],
            "trace": _trace_json(state_trace(grounded, plan), env, grounded),
        }

    @app.post("/api/sessions/{session_id}/hint")
    def request_hint(session_id: str):
        session = service.session(session_id)
        env = service.environment(session.domain_name)
        grounded = service.grounded_for(session)

        with service._hint_lock:
            if session_id in service._hints_in_flight:
                raise ApiError("hint_in_flight", "a hint is already being computed", 409)
            service._hints_in_flight.add(session_id)
        try:
            service.store.record_event(
                session_id, Event(kind="hint_requested", timestamp=time.time())
            )
            start = validate(grounded, service.last_plan(session)).trace[-1]
            cfg = HintConfig(
                reveal_probability=service.config.hint_reveal_probability,
                timeout=service.config.hint_timeout,
                rng_seed=service.config.hint_rng_seed,
            )
            future = service.hint_pool.submit(
                next_hint, grounded, start, cfg, env.semantic_map, service.mask_rng(session_id)
            )
            try:
                outcome: HintOutcome = future.result(timeout=cfg.timeout + 1.0)
            except FutureTimeoutError:
                future.cancel()
                outcome = HintOutcome("hint-timeout")
        finally:
            with service._hint_lock:
                service._hints_in_flight.discard(session_id)

        response: dict = {"status": outcome.status, "message": outcome.message}
        if outcome.status == STATUS_OK and outcome.hint is not None:
            hint = outcome.hint
            service.store.record_event(
                session_id,
                Event(
                    kind="hint_shown",
                    timestamp=time.time(),
                    payload={
                        "schema": hint.action.schema_name,
                        "args": list(hint.action.args),
                        "visible": list(hint.visible),
                        "text": hint.text,
                    },
                ),
            )
            response["hint"] = {
                "action": {"name": hint.action.schema_name, "args": list(hint.action.args)},
                "visible": list(hint.visible),
                "text": hint.text,
            }
            if service.config.llm.enabled:
                bundle = llm.build_hint_prompt(
                    env.domain_text,
                    service._problem_text(env, session),
                    hint.text,
                    ", ".join(start.to_strings()),
                )
                with service.llm_slots:
                    detailed = llm.translate(bundle, service.config.llm)
                if detailed is not None:
                    response["detailed"] = detailed
        return response

    @app.post("/api/sessions/{session_id}/execute")
    def execute_plan(session_id: str, body: PlanRequest):
        session = service.session(session_id)
        env = service.environment(session.domain_name)
        grounded = service.grounded_for(session)
        plan = _to_plan(body)
        try:
            report = validate(grounded, plan)
        except PlanResolutionError as exc:
            raise ApiError("unresolvable_step", str(exc), 422, {"step_index": exc.step_index})
        if not report.is_valid:
            raise ApiError("plan_invalid", "only valid plans can be executed", 409)

        frames = _trace_json(state_trace(grounded, plan), env, grounded)
        now = time.time()
        service.store.record_event(
            session_id,
            Event(kind="execute", timestamp=now, payload={"steps": len(plan.steps)}),
        )
        if report.goal_achieved:
            task_id = session.current_task["task_id"] if session.current_task else None
            service.store.record_event(
                session_id,
                Event(kind="task_solved", timestamp=now, payload={"task_id": task_id}),
            )
        return {"frames": frames, "goal_achieved": report.goal_achieved}

    @app.get("/api/sessions/{session_id}/report")
    def session_report(session_id: str):
        session = service.session(session_id)
        outcomes = session_task_outcomes(session)
        return {
            "session_id": session.session_id,
            "domain": session.domain_name,
            "performance": dict(session.performance.costs),
            "tasks": [
                {
                    "task_id": o.task_id,
                    "solve_seconds": o.solve_seconds,
                    "hints_used": o.hints_used,
                    "solved": o.solve_seconds is not None,
                }
                for o in outcomes
            ],
            "events": len(session.history),
        }

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
