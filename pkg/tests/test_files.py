"""Round-trip and format-validation tests for the JSON file formats."""

import json
import math

import pytest

from fleetplan.files import (
    FormatError,
    dumps_canonical,
    instance_from_dict,
    instance_to_dict,
    planner_config_from_dict,
    planner_config_to_dict,
    read_instance,
    read_solution,
    solution_from_dict,
    solution_to_dict,
    write_instance,
    write_solution,
)
from fleetplan.grid import GridMap
from fleetplan.prioritized import Instance, Solution, plan_all
from fleetplan.sipp import Configuration, PlannerConfig, RobotSpec


def sample_instance():
    grid = GridMap.from_rows(
        [
            "........",
            "..##....",
            "........",
            "........",
        ]
    )
    return Instance(
        grid,
        (
            RobotSpec(0.4, 1.0, 180.0, Configuration(0.5, 0.5, 0.0), Configuration(6.5, 3.5, 90.0)),
            RobotSpec(0.3, 1.5, math.inf, Configuration(7.5, 0.5, 45.0), Configuration(1.5, 3.5, 0.0)),
        ),
    )


def test_instance_roundtrip_is_byte_identical(tmp_path):
    inst = sample_instance()
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    write_instance(str(p1), inst)
    back = read_instance(str(p1))
    assert back == inst
    write_instance(str(p2), back)
    assert p1.read_bytes() == p2.read_bytes()


def test_solution_roundtrip_is_byte_identical(tmp_path):
    inst = sample_instance()
    cfg = PlannerConfig(delta=0.25, wait_floor=0.5)
    sol = plan_all(inst, cfg)
    assert isinstance(sol, Solution)
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    write_solution(str(p1), sol, cfg)
    back, back_cfg = read_solution(str(p1))
    assert back_cfg == cfg
    assert back == sol  # elapsed is excluded from equality by design
    write_solution(str(p2), back, back_cfg)
    assert p1.read_bytes() == p2.read_bytes()


def test_infinite_rotation_speed_stored_as_null():
    inst = sample_instance()
    text = dumps_canonical(instance_to_dict(inst))
    payload = json.loads(text)
    assert payload["robots"][1]["omega_rotate"] is None
    assert instance_from_dict(payload).robots[1].omega_rotate == math.inf


def test_headings_normalized_on_write():
    robot = RobotSpec(
        0.4, 1.0, 180.0, Configuration(0.5, 0.5, -90.0), Configuration(2.5, 0.5, 540.0)
    )
    payload = instance_to_dict(Instance(GridMap(4, 4), (robot,)))
    assert payload["robots"][0]["start"]["theta"] == 270.0
    assert payload["robots"][0]["goal"]["theta"] == 180.0


def test_format_errors():
    good = instance_to_dict(sample_instance())

    with pytest.raises(FormatError):
        instance_from_dict({**good, "format": "fleetplan-instance/2"})
    with pytest.raises(FormatError):
        instance_from_dict({k: v for k, v in good.items() if k != "map"})
    bad_dims = {**good, "map": {**good["map"], "width": 99}}
    with pytest.raises(FormatError):
        instance_from_dict(bad_dims)
    bad_robot = json.loads(dumps_canonical(good))
    bad_robot["robots"][0]["radius"] = -1.0
    with pytest.raises(FormatError):
        instance_from_dict(bad_robot)

    inst = sample_instance()
    cfg = PlannerConfig()
    sol = plan_all(inst, cfg)
    sdict = solution_to_dict(sol, cfg)
    with pytest.raises(FormatError):
        solution_from_dict({**sdict, "format": "fleetplan-instance/1"})
    doctored = json.loads(dumps_canonical(sdict))
    doctored["robots"][0]["primitives"][0]["kind"] = "teleport"
    with pytest.raises(FormatError):
        solution_from_dict(doctored)
    with pytest.raises(FormatError):
        planner_config_from_dict({"delta": 0.1, "warp_speed": True})
    with pytest.raises(FormatError):
        planner_config_from_dict({"delta": -1.0})


def test_read_rejects_invalid_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(FormatError):
        read_instance(str(p))


def test_planner_config_roundtrip():
    cfg = PlannerConfig(
        delta=0.05,
        ssi_duration=2.0,
        timeout=30.0,
        neighborhood_k=3,
        max_reschedules=7,
        priority_scheme="as_given",
        wait_floor=1.0,
        any_angle=False,
    )
    assert planner_config_from_dict(planner_config_to_dict(cfg)) == cfg


def test_dumps_canonical_shape():
    text = dumps_canonical({"a": 1})
    assert text.endswith("\n") and not text.endswith("\n\n")
    with pytest.raises(ValueError):
        dumps_canonical({"bad": float("nan")})
