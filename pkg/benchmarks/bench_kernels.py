"""Benchmark the compiled step kernel against the numpy fallback.

Runs the inner integration step on representative chain sizes and obstacle
counts, then times one full planning call under each backend. Run as

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from viscopath import (
    IterativeConfig,
    SimConfig,
    SpringParams,
    compute_anchor_points,
    default_obstacle_params,
    initial_state,
    iterative_rvp,
    rest_lengths_for,
)
from viscopath._kernels import BACKEND, pure

try:
    from viscopath._kernels import _native as native
except ImportError:
    native = None


def _problem(n_points: int, n_cells: int, seed: int = 9):
    rng = np.random.default_rng(seed)
    xs = np.linspace(0.0, 8.0, n_points)
    ys = 5.0 + 0.05 * rng.standard_normal(n_points)
    positions = np.column_stack([xs, ys])
    spring = SpringParams()
    from viscopath.geometry import Path

    path = Path(positions.copy())
    rest = rest_lengths_for(path, spring)
    anchors = compute_anchor_points(path, spring, rest)
    state = initial_state(path)
    occ = np.column_stack([
        rng.uniform(1.0, 7.0, n_cells),
        rng.uniform(4.0, 6.0, n_cells),
    ])
    return state, anchors, rest, spring, occ


def _time_kernel(impl, n_points: int, n_cells: int, steps: int) -> float:
    state, anchors, rest, spring, occ = _problem(n_points, n_cells)
    obstacle = default_obstacle_params(0.8, 3.0, 0.1)
    positions = state.positions.copy()
    velocities = state.velocities.copy()
    acc = np.zeros((n_points - 2, 2))
    args = (anchors.anchors, anchors.rest_lengths, rest, occ, 0.01,
            spring.k_p, spring.k_a, spring.b, spring.m, 0.01,
            obstacle.a1, obstacle.a2, obstacle.a3, obstacle.n_exp,
            obstacle.r_max, obstacle.r_floor)
    impl.step_chain(positions, velocities, acc, *args)  # warm up
    t0 = time.perf_counter()
    for _ in range(steps):
        impl.step_chain(positions, velocities, acc, *args)
    return (time.perf_counter() - t0) / steps


def _time_plan(scenario_seed: int = 12) -> float:
    from viscopath import GeneratorConfig, generate_scenario

    scenario = generate_scenario(GeneratorConfig(), scenario_seed)
    t0 = time.perf_counter()
    iterative_rvp(scenario.global_path, scenario.grid, SpringParams(),
                  default_obstacle_params(0.8, 3.0, 0.1), SimConfig(),
                  IterativeConfig())
    return time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=3000,
                        help="kernel invocations per measurement")
    args = parser.parse_args()

    impls = [("pure", pure)]
    if native is not None:
        impls.append(("native", native))
    else:
        print("compiled kernel unavailable; timing the fallback only")

    print(f"active backend at import: {BACKEND}\n")
    print(f"{'points':>7} {'cells':>6} " +
          " ".join(f"{name + ' us/step':>16}" for name, _ in impls) +
          ("  speedup" if len(impls) == 2 else ""))
    for n_points, n_cells in [(50, 0), (50, 40), (50, 200), (100, 40),
                              (200, 200), (400, 400)]:
        row = [_time_kernel(impl, n_points, n_cells, args.steps)
               for _, impl in impls]
        line = f"{n_points:>7} {n_cells:>6} " + \
            " ".join(f"{t * 1e6:>16.2f}" for t in row)
        if len(row) == 2:
            line += f"  {row[0] / row[1]:>7.1f}x"
        print(line)

    print(f"\nfull plan on one generated scenario ({BACKEND} backend): "
          f"{_time_plan():.3f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
