"""Command-line entry points: serve the API, check plans, generate tasks.

Exit codes for ``check``: 0 when the plan is valid and reaches the goal,
1 when valid but the goal is unmet, 2 on invalid plans and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .curriculum import (
    PerformanceMap,
    TaskGenerationError,
    generate_adaptive_task,
    generate_random_task,
)
from .envs import load_builtin
from .explain import SemanticMap, explanations_for_report, load_semantic_map
from .pddl.grounding import ground
from .pddl.model import atom_to_str
from .pddl.parser import PddlParseError, parse_domain_file, parse_problem_file
from .sessions import SessionStore, export_csv, solve_time_report
from .validation import Plan, PlanResolutionError, PlanStep, validate

EXIT_SOLVED = 0
EXIT_VALID_NOT_SOLVED = 1
EXIT_INVALID = 2


def _load_task(domain_path: str, problem_path: str):
    domain = parse_domain_file(domain_path)
    problem = parse_problem_file(problem_path, domain)
    return domain, ground(domain, problem)


def _load_plan(path: str) -> Plan:
    steps = [
        PlanStep.parse(line)
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.strip().startswith(";")
    ]
    return Plan(steps)


def _semantic_map(args, domain) -> SemanticMap:
    if args.map:
        smap = load_semantic_map(args.map)
        smap.validate_against(domain)
        return smap
    default = Path(args.domain).parent / "semantics.map"
    if default.is_file():
        return load_semantic_map(str(default))
    return SemanticMap.auto(domain)


def cmd_check(args) -> int:
    try:
        domain, task = _load_task(args.domain, args.problem)
        plan = _load_plan(args.plan)
        report = validate(task, plan)
    except (PddlParseError, PlanResolutionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    smap = _semantic_map(args, domain)
    explanations = explanations_for_report(report, smap)
    if args.json:
        print(
            json.dumps(
                {
                    "is_valid": report.is_valid,
                    "goal_achieved": report.goal_achieved,
                    "step_status": report.step_status,
                    "failures": [
                        {"step_index": f.step_index, "action": f.action.name, "unmet": [atom_to_str(a) for a in sorted(f.unmet)]}
                        for f in report.failures
                    ],
                    "explanations": [e.tldr for e in explanations],
                    "final_state": report.final_state.to_strings(),
                }
            )
        )
    else:
        for i, status in enumerate(report.step_status, start=1):
            print(f"step {i}: {status}")
        for explanation in explanations:
            print(explanation.tldr)
        print(f"plan valid: {'yes' if report.is_valid else 'no'}")
        print(f"goal achieved: {'yes' if report.goal_achieved else 'no'}")
    if report.is_valid and report.goal_achieved:
        return EXIT_SOLVED
    if report.is_valid:
        return EXIT_VALID_NOT_SOLVED
    return EXIT_INVALID


def cmd_gen(args) -> int:
    try:
        domain, task = _load_task(args.domain, args.problem)
    except PddlParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if args.costs_file:
        costs = json.loads(Path(args.costs_file).read_text(encoding="utf-8"))
        unknown = set(costs) - set(domain.schema_names())
        if unknown:
            print(f"error: costs for unknown schemas: {sorted(unknown)}", file=sys.stderr)
            return EXIT_INVALID
        perf = PerformanceMap({name: int(costs.get(name, 0)) for name in domain.schema_names()})
    else:
        perf = PerformanceMap.cold_start(domain.schema_names())

    try:
        if args.mode == "adaptive":
            generated = generate_adaptive_task(perf, task, max_depth=args.depth)
        else:
            generated = generate_random_task(task, args.depth, args.seed)
    except TaskGenerationError as exc:
        message = str(exc)
        if exc.max_depth is not None:
            message += f" (maximum achievable depth: {exc.max_depth})"
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INVALID

    if args.json:
        print(
            json.dumps(
                {
                    "goal": [atom_to_str(a) for a in sorted(generated.goal)],
                    "provenance": generated.provenance,
                    "trigger": list(generated.trigger) if generated.trigger else None,
                    "reference_plan_length": generated.reference_plan_length,
                    "witness": [f"({s.name} {' '.join(s.args)})" for s in generated.witness],
                }
            )
        )
    else:
        for atom in sorted(generated.goal):
            print(atom_to_str(atom))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    Path(config.data_dir).mkdir(parents=True, exist_ok=True)
    app = create_app(config)
    names = ", ".join(app.state.service.registry.names())
    print(f"plantutor ready on http://{config.host}:{config.port} (domains: {names})")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def cmd_export(args) -> int:
    registry = load_builtin()
    store = SessionStore(Path(args.data_dir) / "sessions", registry.schema_map())
    sessions = store.all_sessions()
    rows = export_csv(sessions, args.out)
    print(f"wrote {rows} rows to {args.out}")
    if args.summary:
        for task_id, stats in solve_time_report(sessions).items():
            mean = f"{stats['mean']:.1f}s" if stats["mean"] is not None else "-"
            print(f"{task_id}: solved={stats['solved']} unsolved={stats['unsolved']} mean={mean}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plantutor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", default=None, help="path to a JSON config file")
    p_serve.set_defaults(func=cmd_serve)

    p_check = sub.add_parser("check", help="validate a plan file offline")
    p_check.add_argument("domain")
    p_check.add_argument("problem")
    p_check.add_argument("plan")
    p_check.add_argument("--map", default=None, help="semantics.map for NL explanations")
    p_check.add_argument("--json", action="store_true")
    p_check.set_defaults(func=cmd_check)

    p_gen = sub.add_parser("gen", help="generate a practice task goal")
    p_gen.add_argument("domain")
    p_gen.add_argument("problem")
    p_gen.add_argument("--mode", choices=["adaptive", "random"], default="adaptive")
    p_gen.add_argument("--depth", type=int, default=4)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--costs-file", default=None, help="JSON map of schema name to cost")
    p_gen.add_argument("--json", action="store_true")
    p_gen.set_defaults(func=cmd_gen)

    p_export = sub.add_parser("export", help="export session analytics as CSV")
    p_export.add_argument("--data-dir", default="data")
    p_export.add_argument("--out", default="analytics.csv")
    p_export.add_argument("--summary", action="store_true")
    p_export.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
