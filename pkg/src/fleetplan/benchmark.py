"""Batch benchmark runner: plan every instance, validate every success,
aggregate success rate and solution quality.

A validation conflict on a planner "success" is never counted or averaged
away: it raises InvariantViolation, because it means the planner broke its
own guarantee, not that the instance was hard.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .files import REPORT_FORMAT, planner_config_to_dict, write_solution
from .prioritized import Instance, PlanFailure, Solution, plan_all
from .robustness import RobustnessConfig, inflate_instance, simulate_execution
from .sipp import PlannerConfig
from .validate import validate_solution


class InvariantViolation(RuntimeError):
    """A planned solution failed independent validation."""


def _robustness_to_dict(rb: RobustnessConfig) -> dict:
    return {
        "inflation": rb.inflation,
        "wait_floor": rb.wait_floor,
        "delay_model": rb.delay_model,
        "delay": rb.delay,
    }


def _run_one(task) -> tuple[dict, Solution | None, PlannerConfig]:
    index, instance, cfg, robustness, executions, seed = task
    plan_instance = instance
    plan_cfg = cfg
    if robustness is not None:
        plan_instance = inflate_instance(instance, robustness.inflation)
        plan_cfg = replace(cfg, wait_floor=robustness.wait_floor)
    result = plan_all(plan_instance, plan_cfg)
    if isinstance(result, PlanFailure):
        row = {
            "index": index,
            "status": "failure",
            "reason": result.reason,
            "robot": result.robot,
            "attempts": result.attempts,
            "runtime": result.elapsed,
        }
        return row, None, plan_cfg
    report = validate_solution(result, plan_instance, mode="analytic")
    if not report.certified:
        first = report.conflicts[0]
        row = {
            "index": index,
            "status": "invalid",
            "detail": f"{first.kind} conflict, robots {first.robots}, "
            f"t={first.time}, {first.detail}".strip().rstrip(","),
        }
        return row, result, plan_cfg
    row = {
        "index": index,
        "status": "success",
        "runtime": result.elapsed,
        "flowtime": result.flowtime,
        "makespan": result.makespan,
        "attempts": result.attempts,
    }
    if robustness is not None and executions > 0:
        clean = 0
        for k in range(executions):
            _, sim_report = simulate_execution(
                result, instance, robustness, seed=seed * 1_000_000 + index * 1_000 + k
            )
            clean += bool(sim_report.certified)
        row["executions"] = {"total": executions, "conflict_free": clean}
    return row, result, plan_cfg


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def run_benchmark(
    instances: list[Instance],
    cfg: PlannerConfig,
    robustness: RobustnessConfig | None = None,
    executions: int = 5,
    out_dir: str | None = None,
    seed: int = 0,
    workers: int = 1,
) -> dict:
    """Plan each instance, validate, optionally simulate delayed executions.

    Returns the aggregate report; when out_dir is given, writes one solution
    file per solved instance (instance_<index>.solution.json) whose bytes
    depend only on the instances, configs, and seed.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if executions < 0 or executions > 999:
        raise ValueError("executions must be in [0, 999]")
    tasks = [
        (i, inst, cfg, robustness, executions, seed) for i, inst in enumerate(instances)
    ]
    if workers == 1 or len(tasks) <= 1:
        outcomes = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_one, tasks))

    rows = []
    for row, solution, plan_cfg in outcomes:
        if row["status"] == "invalid":
            raise InvariantViolation(
                f"instance {row['index']}: planner reported success but "
                f"validation found a {row['detail']}"
            )
        rows.append(row)
        if out_dir is not None and solution is not None:
            os.makedirs(out_dir, exist_ok=True)
            name = f"instance_{row['index']:04d}.solution.json"
            write_solution(os.path.join(out_dir, name), solution, plan_cfg)

    successes = [r for r in rows if r["status"] == "success"]
    failures = [r for r in rows if r["status"] == "failure"]
    reasons: dict[str, int] = {}
    for r in failures:
        reasons[r["reason"]] = reasons.get(r["reason"], 0) + 1
    report = {
        "format": REPORT_FORMAT,
        "kind": "benchmark",
        "config": planner_config_to_dict(cfg),
        "robustness": None if robustness is None else _robustness_to_dict(robustness),
        "seed": seed,
        "instances": len(rows),
        "solved": len(successes),
        "success_rate": 100.0 * len(successes) / len(rows) if rows else None,
        "failure_reasons": dict(sorted(reasons.items())),
        "mean_runtime": _mean([r["runtime"] for r in successes]),
        "mean_flowtime": _mean([r["flowtime"] for r in successes]),
        "mean_makespan": _mean([r["makespan"] for r in successes]),
        "per_instance": rows,
    }
    if robustness is not None:
        total = sum(r["executions"]["total"] for r in successes if "executions" in r)
        clean = sum(r["executions"]["conflict_free"] for r in successes if "executions" in r)
        report["executions"] = {"total": total, "conflict_free": clean}
    return report
