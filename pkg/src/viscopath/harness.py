"""Batch evaluation: run the iterative planner over a dataset and reduce the
results to a success rate plus deviation and timing statistics.

Success is never taken from the planner's own flag alone; every safe result
is re-verified with a separate collision check so a planner bug cannot
silently inflate the rate.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dynamics import SimConfig
from .errors import NumericError, ValidationError
from .forces import ObstacleForceParams, SpringParams
from .geometry import path_deviation
from .grid import collision_check
from .iterative import IterativeConfig, iterative_rvp
from .scenarios import Scenario

REFERENCE_SUCCESS_RATE = 0.943  # published large-scale figure, shown for context


@dataclass(frozen=True)
class ScenarioRecord:
    """Outcome of one scenario: verified success flag, planner iterations,
    squared-deviation sum of the local path against the global path, and
    wall time (monotonic clock; excluded from determinism guarantees)."""

    scenario_seed: int
    success: bool
    iterations_used: int
    path_deviation: float | None
    wall_time: float
    failure_reason: str | None = None


@dataclass(frozen=True)
class EvalReport:
    """Aggregate over a dataset. deviation_stats covers successful scenarios
    only and is None when there were none; timing_stats covers all."""

    total: int
    successes: int
    success_rate: float
    deviation_stats: dict | None
    timing_stats: dict
    params_echo: dict


def evaluate_scenario(scenario: Scenario, spring_params: SpringParams,
                      obstacle_params: ObstacleForceParams, sim_config: SimConfig,
                      iter_config: IterativeConfig) -> ScenarioRecord:
    """Run the iterative planner on one scenario and verify its outcome."""
    t0 = time.perf_counter()
    try:
        result = iterative_rvp(
            scenario.global_path, scenario.grid, spring_params, obstacle_params,
            sim_config, iter_config,
        )
    except NumericError:
        return ScenarioRecord(
            scenario_seed=scenario.seed,
            success=False,
            iterations_used=0,
            path_deviation=None,
            wall_time=time.perf_counter() - t0,
            failure_reason="numeric",
        )
    colliding, _ = collision_check(
        result.path, scenario.grid, iter_config.d_c, iter_config.eval_spacing
    )
    success = result.safe and not colliding
    deviation = path_deviation(result.path, scenario.global_path)
    reason = None
    if not success:
        reason = "collision" if colliding else "unsafe_flag"
    return ScenarioRecord(
        scenario_seed=scenario.seed,
        success=success,
        iterations_used=result.iterations_used,
        path_deviation=deviation,
        wall_time=time.perf_counter() - t0,
        failure_reason=reason,
    )


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _median(values: list[float]) -> float:
    v = sorted(values)
    n = len(v)
    if n % 2:
        return v[n // 2]
    return (v[n // 2 - 1] + v[n // 2]) / 2.0


def _p95(values: list[float]) -> float:
    v = sorted(values)
    return v[math.ceil(0.95 * len(v)) - 1]


_WORKER_ARGS = None


def _init_worker(params):
    global _WORKER_ARGS
    _WORKER_ARGS = params


def _run_one(item):
    index, scenario = item
    return index, evaluate_scenario(scenario, *_WORKER_ARGS)


def run_batch(dataset: list[Scenario], spring_params: SpringParams,
              obstacle_params: ObstacleForceParams, sim_config: SimConfig,
              iter_config: IterativeConfig, worker_count: int = 1,
              ) -> tuple[EvalReport, list[ScenarioRecord]]:
    """Evaluate every scenario, optionally across processes.

    Records come back keyed by scenario index, so the report is identical
    for any worker count.
    """
    if worker_count < 1:
        raise ValidationError("worker_count must be at least 1", field="worker_count")
    params = (spring_params, obstacle_params, sim_config, iter_config)

    if worker_count == 1 or len(dataset) == 1:
        records = [evaluate_scenario(s, *params) for s in dataset]
    else:
        indexed = list(enumerate(dataset))
        chunk = max(1, len(dataset) // (worker_count * 4))
        with ProcessPoolExecutor(max_workers=worker_count, initializer=_init_worker,
                                 initargs=(params,)) as pool:
            results = list(pool.map(_run_one, indexed, chunksize=chunk))
        results.sort(key=lambda r: r[0])
        records = [rec for _, rec in results]

    successes = [r for r in records if r.success]
    deviations = [r.path_deviation for r in successes if r.path_deviation is not None]
    times = [r.wall_time for r in records]
    report = EvalReport(
        total=len(records),
        successes=len(successes),
        success_rate=len(successes) / len(records) if records else 0.0,
        deviation_stats=(
            {"mean": _mean(deviations), "median": _median(deviations),
             "p95": _p95(deviations)}
            if deviations else None
        ),
        timing_stats={"mean": _mean(times), "p95": _p95(times)} if times else {},
        params_echo={
            "spring": spring_params,
            "obstacle": obstacle_params,
            "sim": sim_config,
            "iterative": iter_config,
            "generator": dataset[0].metadata if dataset else None,
        },
    )
    return report, records
