from __future__ import annotations

import json

from plantutor.cli import main
from plantutor.envs import builtin_data_dir

HANOI = builtin_data_dir() / "hanoi"
COFFEE = builtin_data_dir() / "coffee_shop"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_solved_plan_exits_zero(capsys):
    code, out, _ = run(
        capsys,
        "check",
        HANOI / "domain.pddl",
        HANOI / "problems" / "classic_3.pddl",
        HANOI / "problems" / "classic_3.plan",
    )
    assert code == 0
    assert "plan valid: yes" in out
    assert "goal achieved: yes" in out


def test_check_valid_unsolved_exits_one(capsys, tmp_path):
    plan = tmp_path / "one.plan"
    plan.write_text("(move d1 d2 peg3)\n", encoding="utf-8")
    code, out, _ = run(
        capsys, "check", HANOI / "domain.pddl", HANOI / "problems" / "classic_3.pddl", plan
    )
    assert code == 1
    assert "goal achieved: no" in out


def test_check_invalid_plan_prints_tldr(capsys, tmp_path):
    plan = tmp_path / "bad.plan"
    plan.write_text(
        "(move fetch starting_point counter)\n"
        "(pick can_red counter gripper fetch)\n"
        "(place counter can_blue gripper fetch)\n",
        encoding="utf-8",
    )
    code, out, _ = run(
        capsys, "check", COFFEE / "domain.pddl", COFFEE / "problems" / "delivery_1.pddl", plan
    )
    assert code == 2
    assert (
        "The action at step 3 (Place at location 'counter' object 'can_blue' using "
        "gripper 'gripper' this robot 'fetch') could not be performed because "
        "'gripper' is not holding 'can_blue'." in out
    )


def test_check_parse_error_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.pddl"
    bad.write_text("(define (domain broken", encoding="utf-8")
    code, _, err = run(capsys, "check", bad, HANOI / "problems" / "classic_3.pddl", bad)
    assert code == 2
    assert "error:" in err


def test_check_json_output(capsys, tmp_path):
    plan = tmp_path / "one.plan"
    plan.write_text("(move d1 d2 peg3)\n", encoding="utf-8")
    code, out, _ = run(
        capsys,
        "check",
        HANOI / "domain.pddl",
        HANOI / "problems" / "classic_3.pddl",
        plan,
        "--json",
    )
    doc = json.loads(out)
    assert code == 1
    assert doc["is_valid"] is True and doc["goal_achieved"] is False
    assert doc["step_status"] == ["valid"]


def test_gen_cold_start_single_action_goal(capsys):
    code, out, _ = run(
        capsys, "gen", COFFEE / "domain.pddl", COFFEE / "problems" / "delivery_1.pddl", "--json"
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["reference_plan_length"] == 1
    assert doc["goal"] == ["(at fetch counter)"]


def test_gen_random_seed_deterministic(capsys):
    argv = [
        "gen",
        COFFEE / "domain.pddl",
        COFFEE / "problems" / "delivery_1.pddl",
        "--mode",
        "random",
        "--depth",
        "3",
        "--seed",
        "9",
    ]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_gen_depth_beyond_frontier_reports_max(capsys):
    code, _, err = run(
        capsys,
        "gen",
        HANOI / "domain.pddl",
        HANOI / "problems" / "classic_3.pddl",
        "--mode",
        "random",
        "--depth",
        "50",
    )
    assert code == 2
    assert "maximum achievable depth" in err


def test_gen_costs_file(capsys, tmp_path):
    costs = tmp_path / "costs.json"
    costs.write_text(json.dumps({"move": 1, "pick": 0, "place": 1}), encoding="utf-8")
    code, out, _ = run(
        capsys,
        "gen",
        COFFEE / "domain.pddl",
        COFFEE / "problems" / "delivery_1.pddl",
        "--costs-file",
        costs,
        "--json",
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["trigger"][0] == "pick"


def test_export_empty_data_dir(capsys, tmp_path):
    code, out, _ = run(
        capsys, "export", "--data-dir", tmp_path / "nothing", "--out", tmp_path / "out.csv"
    )
    assert code == 0
    assert "wrote 0 rows" in out


def test_serve_rejects_malformed_config(capsys, tmp_path):
    config = tmp_path / "config.json"
    config.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "serve", "--config", config)
    assert code == 2
    assert "invalid JSON" in err
