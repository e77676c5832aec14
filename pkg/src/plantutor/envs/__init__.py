"""Bundled and user-provided environments.

A bundle directory holds ``domain.pddl``, ``problems/*.pddl`` presets with
matching ``*.plan`` reference plans, a ``semantics.map`` file, and a
``description.md``. Everything is parsed and cross-validated at load time:
the semantic map must cover the domain and every reference plan must
replay to its preset's goal. Registration aborts with a full report on
any failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..explain import SemanticMap, load_semantic_map
from ..pddl.grounding import GroundedTask, ground
from ..pddl.model import Domain, Problem
from ..pddl.parser import PddlParseError, parse_domain, parse_problem
from ..validation import Plan, PlanStep, validate


class BundleError(Exception):
    """A bundle failed cross-validation; the message lists every problem found."""


@dataclass
class Environment:
    name: str
    domain: Domain
    domain_text: str
    semantic_map: SemanticMap
    description: str
    problems: dict[str, Problem]
    problem_texts: dict[str, str]
    reference_plans: dict[str, Plan]
    _grounded: dict[str, GroundedTask] = field(default_factory=dict, repr=False)

    @property
    def default_preset(self) -> str:
        return sorted(self.problems)[0]

    def grounded(self, preset: str | None = None) -> GroundedTask:
        preset = preset or self.default_preset
        if preset not in self.problems:
            raise KeyError(f"unknown preset {preset!r}")
        if preset not in self._grounded:
            self._grounded[preset] = ground(self.domain, self.problems[preset])
        return self._grounded[preset]


def load_bundle(path: str | Path) -> Environment:
    path = Path(path)
    errors: list[str] = []

    domain: Domain | None = None
    domain_text = ""
    domain_file = path / "domain.pddl"
    if not domain_file.is_file():
        errors.append(f"missing {domain_file}")
    else:
        domain_text = domain_file.read_text(encoding="utf-8")
        try:
            domain = parse_domain(domain_text, filename=str(domain_file))
        except PddlParseError as exc:
            errors.append(str(exc))

    semantic_map: SemanticMap | None = None
    map_file = path / "semantics.map"
    if not map_file.is_file():
        errors.append(f"missing {map_file}")
    else:
        try:
            semantic_map = load_semantic_map(str(map_file))
            if domain is not None:
                semantic_map.validate_against(domain)
        except Exception as exc:  # configparser or coverage errors
            errors.append(str(exc))

    description_file = path / "description.md"
    description = ""
    if not description_file.is_file():
        errors.append(f"missing {description_file}")
    else:
        description = description_file.read_text(encoding="utf-8")

    problems: dict[str, Problem] = {}
    problem_texts: dict[str, str] = {}
    reference_plans: dict[str, Plan] = {}
    problems_dir = path / "problems"
    problem_files = sorted(problems_dir.glob("*.pddl")) if problems_dir.is_dir() else []
    if not problem_files:
        errors.append(f"no problem files in {problems_dir}")
    for problem_file in problem_files:
        if domain is None:
            break
        preset = problem_file.stem
        text = problem_file.read_text(encoding="utf-8")
        try:
            problem = parse_problem(text, domain, filename=str(problem_file))
        except PddlParseError as exc:
            errors.append(str(exc))
            continue
        problems[preset] = problem
        problem_texts[preset] = text
        plan_file = problem_file.with_suffix(".plan")
        if not plan_file.is_file():
            errors.append(f"preset {preset!r} has no reference plan ({plan_file})")
            continue
        steps = [
            PlanStep.parse(line)
            for line in plan_file.read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.strip().startswith(";")
        ]
        plan = Plan(steps)
        try:
            report = validate(ground(domain, problem), plan)
        except Exception as exc:
            errors.append(f"preset {preset!r}: reference plan does not resolve: {exc}")
            continue
        if not report.is_valid or not report.goal_achieved:
            errors.append(f"preset {preset!r}: reference plan does not reach the goal")
        reference_plans[preset] = plan

    if errors:
        raise BundleError(f"bundle {path.name!r} failed validation:\n  " + "\n  ".join(errors))
    assert domain is not None and semantic_map is not None
    return Environment(
        name=path.name,
        domain=domain,
        domain_text=domain_text,
        semantic_map=semantic_map,
        description=description,
        problems=problems,
        problem_texts=problem_texts,
        reference_plans=reference_plans,
    )


class EnvironmentRegistry:
    def __init__(self) -> None:
        self.environments: dict[str, Environment] = {}

    def register(self, env: Environment) -> None:
        self.environments[env.name] = env

    def get(self, name: str) -> Environment:
        if name not in self.environments:
            raise KeyError(f"unknown environment {name!r}")
        return self.environments[name]

    def names(self) -> list[str]:
        return sorted(self.environments)

    def schema_map(self) -> dict[str, list[str]]:
        return {name: env.domain.schema_names() for name, env in self.environments.items()}

    def load_directory(self, root: str | Path) -> None:
        root = Path(root)
        for bundle_dir in sorted(p for p in root.iterdir() if p.is_dir()):
            self.register(load_bundle(bundle_dir))


def builtin_data_dir() -> Path:
    return Path(str(resources.files("plantutor.envs") / "data"))


def load_builtin() -> EnvironmentRegistry:
    registry = EnvironmentRegistry()
    registry.load_directory(builtin_data_dir())
    return registry
