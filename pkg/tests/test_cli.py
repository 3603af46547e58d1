"""End-to-end tests of the command-line verbs and exit codes."""

import json

import pytest

from fleetplan.cli import main
from fleetplan.files import read_solution, write_instance, write_solution
from fleetplan.grid import GridMap
from fleetplan.prioritized import Instance, Solution
from fleetplan.sipp import Configuration, PlannerConfig, RobotSpec, Trajectory, Translate


@pytest.fixture()
def instance_file(tmp_path):
    inst = Instance(
        GridMap(10, 10),
        (
            RobotSpec(0.4, 1.0, 180.0, Configuration(1.5, 1.5, 0.0), Configuration(8.5, 1.5, 0.0)),
            RobotSpec(0.4, 1.0, 180.0, Configuration(1.5, 4.5, 0.0), Configuration(8.5, 4.5, 0.0)),
        ),
    )
    path = tmp_path / "inst.json"
    write_instance(str(path), inst)
    return str(path)


def test_plan_writes_solution_and_exits_zero(instance_file, tmp_path, capsys):
    out = tmp_path / "sol.json"
    assert main(["plan", instance_file, "--out", str(out)]) == 0
    sol, cfg = read_solution(str(out))
    assert isinstance(sol, Solution)
    assert cfg == PlannerConfig()
    assert len(sol.trajectories) == 2


def test_plan_to_stdout(instance_file, capsys):
    assert main(["plan", instance_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["format"] == "fleetplan-solution/1"
    assert len(payload["robots"]) == 2


def test_plan_failure_exits_one(tmp_path, capsys):
    walled = Instance(
        GridMap.from_rows([".#.", ".#.", ".#."]),
        (RobotSpec(0.4, 1.0, 180.0, Configuration(0.5, 0.5, 0.0), Configuration(2.5, 0.5, 0.0)),),
    )
    path = tmp_path / "walled.json"
    write_instance(str(path), walled)
    assert main(["plan", str(path)]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "plan_failure"
    assert payload["reason"] == "top_priority_unsolvable"


def test_validate_certifies_good_solution(instance_file, tmp_path, capsys):
    sol_path = tmp_path / "sol.json"
    assert main(["plan", instance_file, "--out", str(sol_path)]) == 0
    assert main(["validate", instance_file, str(sol_path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["certified"] is True
    assert main(["validate", instance_file, str(sol_path), "--mode", "sampled"]) == 0


def test_validate_flags_bad_solution(instance_file, tmp_path, capsys):
    # robot 1 never reaches its goal row: structural violation
    bad = Solution(
        (
            Trajectory(
                Configuration(1.5, 1.5, 0.0),
                (Translate(1.5, 1.5, 8.5, 1.5, 0.0, 0.0, 7.0),),
            ),
            Trajectory(
                Configuration(1.5, 4.5, 0.0),
                (Translate(1.5, 4.5, 8.5, 3.5, 0.0, 0.0, 7.0),),
            ),
        ),
        14.0,
        7.0,
        1,
    )
    bad_path = tmp_path / "bad.json"
    write_solution(str(bad_path), bad, PlannerConfig())
    assert main(["validate", instance_file, str(bad_path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["certified"] is False
    assert report["conflicts"]


def test_missing_and_malformed_files_exit_two(tmp_path, capsys):
    assert main(["plan", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "wrong/1"}')
    assert main(["plan", str(bad)]) == 2
    notjson = tmp_path / "garbage.json"
    notjson.write_text("}{")
    assert main(["plan", str(notjson)]) == 2


def test_invalid_instance_exits_two(tmp_path, capsys):
    overlapping = Instance(
        GridMap(6, 6),
        (
            RobotSpec(0.9, 1.0, 180.0, Configuration(1.5, 1.5, 0.0), Configuration(4.5, 4.5, 0.0)),
            RobotSpec(0.9, 1.0, 180.0, Configuration(2.5, 1.5, 0.0), Configuration(4.5, 1.5, 0.0)),
        ),
    )
    path = tmp_path / "overlap.json"
    write_instance(str(path), overlapping)
    assert main(["plan", str(path)]) == 2


def test_generate_then_benchmark_roundtrip(tmp_path, capsys):
    out_dir = tmp_path / "instances"
    code = main(
        [
            "generate",
            "--out-dir",
            str(out_dir),
            "--count",
            "2",
            "--width",
            "12",
            "--height",
            "12",
            "--robots-per-type",
            "1",
            "--seed",
            "3",
        ]
    )
    assert code == 0
    listing = json.loads(capsys.readouterr().out)
    files = [str(out_dir / name) for name in listing["files"]]
    assert len(files) == 2

    report_path = tmp_path / "report.json"
    sol_dir = tmp_path / "solutions"
    code = main(
        ["benchmark", *files, "--report", str(report_path), "--out-dir", str(sol_dir)]
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["instances"] == 2
    assert report["solved"] == 2
    assert len(list(sol_dir.iterdir())) == 2


def test_simulate_verb(instance_file, tmp_path, capsys):
    sol_path = tmp_path / "sol.json"
    main(["plan", instance_file, "--wait-floor", "2.0", "--out", str(sol_path)])
    code = main(
        [
            "simulate",
            instance_file,
            str(sol_path),
            "--wait-floor",
            "2.0",
            "--delay-model",
            "fixed",
            "--delay",
            "1.0",
            "--seed",
            "5",
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "simulation"
    assert payload["certified"] is True
    assert len(payload["robots"]) == 2
    assert all(r["arrival_realized"] >= r["arrival_planned"] for r in payload["robots"])


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["plan"])  # missing instance argument
    assert err.value.code == 2
