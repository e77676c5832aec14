"""Per-learner session persistence: one JSON document per session.

The event log is append-only with nondecreasing timestamps. Plan-edit
events carrying a new step drive the performance map through the
curriculum update rule; a shown hint marks its schema so the learner's
next use of that schema counts as hinted. Replaying a session's log
reconstructs the stored performance map exactly.

No personal data is stored: sessions are identified only by unguessable
random tokens.
"""

from __future__ import annotations

import json
import os
import secrets
import statistics
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .curriculum import PerformanceMap, update_performance
from .state import GroundAction, State

EVENT_KINDS = {
    "plan_edit",
    "validation",
    "hint_requested",
    "hint_shown",
    "execute",
    "task_solved",
    "task_generated",
}


class SessionError(Exception):
    pass


class UnknownSessionError(SessionError):
    pass


@dataclass
class Event:
    kind: str
    timestamp: float
    payload: dict = field(default_factory=dict)


@dataclass
class Session:
    session_id: str
    domain_name: str
    current_task: dict | None
    performance: PerformanceMap
    history: list[Event]
    created_at: float
    updated_at: float
    pending_hint: str | None = None  # schema awaiting its next use

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "domain_name": self.domain_name,
            "current_task": self.current_task,
            "performance": dict(self.performance.costs),
            "history": [asdict(e) for e in self.history],
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "pending_hint": self.pending_hint,
        }

    @classmethod
    def from_json(cls, doc: dict) -> Session:
        return cls(
            session_id=doc["session_id"],
            domain_name=doc["domain_name"],
            current_task=doc.get("current_task"),
            performance=PerformanceMap(dict(doc["performance"])),
            history=[Event(**e) for e in doc["history"]],
            created_at=doc["created_at"],
            updated_at=doc["updated_at"],
            pending_hint=doc.get("pending_hint"),
        )


def _parse_atom(text: str) -> tuple[str, ...]:
    return tuple(text.strip("()").split())


def apply_event(performance: PerformanceMap, pending_hint: str | None, event: Event) -> tuple[PerformanceMap, str | None]:
    """Fold one event into (performance map, pending hint schema)."""
    if event.kind == "hint_shown":
        return performance, event.payload.get("schema", pending_hint)
    if event.kind == "plan_edit" and "step" in event.payload:
        step = event.payload["step"]
        action = GroundAction(
            schema_name=step["name"],
            args=tuple(step["args"]),
            pre=frozenset(_parse_atom(a) for a in event.payload.get("pre", [])),
            add=frozenset(),
            delete=frozenset(),
        )
        state = State(frozenset(_parse_atom(a) for a in event.payload.get("state", [])))
        hinted = pending_hint == step["name"]
        performance = update_performance(performance, step["name"], state, action, hinted)
        return performance, (None if hinted else pending_hint)
    return performance, pending_hint


def replay_performance(session: Session, schema_names) -> PerformanceMap:
    """Recompute the performance map from the event log alone."""
    performance = PerformanceMap.cold_start(schema_names)
    pending: str | None = None
    for event in session.history:
        performance, pending = apply_event(performance, pending, event)
    return performance


class SessionStore:
    """Directory of ``sessions/{id}.json`` documents with atomic writes."""

    def __init__(self, root: str | Path, domains: dict[str, list[str]]):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.domains = domains  # domain name -> schema names, for cold-start maps
        self._cache: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def _write(self, session: Session) -> None:
        path = self._path(session.session_id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(session.to_json(), indent=2), encoding="utf-8")
        os.replace(tmp, path)

    def create_session(self, domain_name: str) -> Session:
        if domain_name not in self.domains:
            raise SessionError(f"unknown domain {domain_name!r}")
        now = time.time()
        session = Session(
            session_id=secrets.token_hex(16),
            domain_name=domain_name,
            current_task=None,
            performance=PerformanceMap.cold_start(self.domains[domain_name]),
            history=[],
            created_at=now,
            updated_at=now,
        )
        with self._lock_for(session.session_id):
            self._cache[session.session_id] = session
            self._write(session)
        return session

    def get(self, session_id: str) -> Session:
        if session_id in self._cache:
            return self._cache[session_id]
        path = self._path(session_id)
        if not path.is_file():
            raise UnknownSessionError(f"unknown session {session_id!r}")
        session = Session.from_json(json.loads(path.read_text(encoding="utf-8")))
        self._cache[session_id] = session
        return session

    def record_event(self, session_id: str, event: Event) -> Session:
        if event.kind not in EVENT_KINDS:
            raise SessionError(f"unknown event kind {event.kind!r}")
        with self._lock_for(session_id):
            session = self.get(session_id)
            if session.history and event.timestamp < session.history[-1].timestamp:
                raise SessionError("event timestamp is earlier than the last recorded event")
            session.performance, session.pending_hint = apply_event(
                session.performance, session.pending_hint, event
            )
            session.history.append(event)
            session.updated_at = max(session.updated_at, event.timestamp)
            if event.kind == "task_generated":
                session.current_task = event.payload.get("task")
            self._write(session)
            return session

    def set_current_task(self, session_id: str, task: dict | None) -> Session:
        with self._lock_for(session_id):
            session = self.get(session_id)
            session.current_task = task
            self._write(session)
            return session

    def all_sessions(self) -> list[Session]:
        sessions = []
        for path in sorted(self.root.glob("*.json")):
            sessions.append(self.get(path.stem))
        return sessions


@dataclass
class TaskOutcome:
    session_id: str
    task_id: str
    solve_seconds: float | None  # None when never solved
    hints_used: int


def session_task_outcomes(session: Session) -> list[TaskOutcome]:
    """Per generated task: time to solve (if solved) and hints used."""
    outcomes: list[TaskOutcome] = []
    current: TaskOutcome | None = None
    started_at = 0.0
    for event in session.history:
        if event.kind == "task_generated":
            current = TaskOutcome(
                session_id=session.session_id,
                task_id=event.payload.get("task_id", f"task-{len(outcomes) + 1}"),
                solve_seconds=None,
                hints_used=0,
            )
            started_at = event.timestamp
            outcomes.append(current)
        elif current is None:
            continue
        elif event.kind == "hint_shown" and current.solve_seconds is None:
            current.hints_used += 1
        elif event.kind == "task_solved" and current.solve_seconds is None:
            current.solve_seconds = event.timestamp - started_at
    return outcomes


def solve_time_report(sessions) -> dict[str, dict]:
    """Aggregate per-task solve-time stats across sessions."""
    by_task: dict[str, list[float]] = {}
    unsolved: dict[str, int] = {}
    for session in sessions:
        for outcome in session_task_outcomes(session):
            if outcome.solve_seconds is None:
                unsolved[outcome.task_id] = unsolved.get(outcome.task_id, 0) + 1
            else:
                by_task.setdefault(outcome.task_id, []).append(outcome.solve_seconds)
    report = {}
    for task_id in sorted(set(by_task) | set(unsolved)):
        durations = by_task.get(task_id, [])
        report[task_id] = {
            "solved": len(durations),
            "unsolved": unsolved.get(task_id, 0),
            "mean": statistics.mean(durations) if durations else None,
            "median": statistics.median(durations) if durations else None,
            "durations": durations,
        }
    return report


def export_csv(sessions, path: str | Path) -> int:
    """Write (session, task, solve_seconds, hints_used) rows; returns row count."""
    import csv

    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["session", "task", "solve_seconds", "hints_used"])
        for session in sessions:
            for outcome in session_task_outcomes(session):
                writer.writerow(
                    [
                        outcome.session_id,
                        outcome.task_id,
                        "" if outcome.solve_seconds is None else f"{outcome.solve_seconds:.3f}",
                        outcome.hints_used,
                    ]
                )
                rows += 1
    return rows
