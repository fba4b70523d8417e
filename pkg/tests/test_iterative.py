"""Outer loop: decay schedule, densification, safety flag semantics."""
from __future__ import annotations

import numpy as np
import pytest

import support
from viscopath import (
    IterativeConfig,
    ObstacleForceParams,
    Path,
    SimConfig,
    SpringParams,
    ValidationError,
    collision_check,
    decay_schedule,
    densify_path,
    iterative_rvp,
    path_deviation,
)

SPRING = SpringParams()
OBSTACLE = ObstacleForceParams()
SIM = SimConfig()
ITER = IterativeConfig()


def _run(scenario, iter_config=ITER, on_step=None):
    return iterative_rvp(scenario.global_path, scenario.grid, SPRING, OBSTACLE,
                         SIM, iter_config, on_step=on_step)


# --- config and schedule -----------------------------------------------------------

def test_iterative_config_validation():
    with pytest.raises(ValidationError):
        IterativeConfig(lambda_decay=0.0)
    with pytest.raises(ValidationError):
        IterativeConfig(lambda_decay=1.1)
    with pytest.raises(ValidationError):
        IterativeConfig(d_c=-0.1)
    with pytest.raises(ValidationError):
        IterativeConfig(max_iters=0)
    with pytest.raises(ValidationError):
        IterativeConfig(eval_spacing=0.0)


def test_decay_schedule_from_original_values():
    assert decay_schedule(0.8, 3.0, 0.5, 1) == (0.8, 3.0)
    a1, a2 = decay_schedule(0.8, 3.0, 0.5, 3)
    assert a1 == pytest.approx(0.8 * 0.25)
    assert a2 == pytest.approx(3.0 * 0.25)


def test_decay_schedule_rejects_zero_iteration():
    with pytest.raises(ValidationError):
        decay_schedule(0.8, 3.0, 0.5, 0)


# --- densification ------------------------------------------------------------------

def test_densify_inserts_unsafe_point():
    # unsafe points come from the collision check, so they lie on the polyline
    path = Path([(0.0, 0.0), (10.0, 0.0)])
    out = densify_path(path, [(4.0, 0.0)])
    assert np.allclose(out.pts, [[0.0, 0.0], [4.0, 0.0], [10.0, 0.0]])


def test_densify_keeps_all_vertices_and_orders_inserts():
    path = Path([(0.0, 0.0), (10.0, 0.0)])
    out = densify_path(path, [(7.0, 0.0), (2.0, 0.0)])
    assert np.allclose(out.pts, [[0.0, 0.0], [2.0, 0.0], [7.0, 0.0], [10.0, 0.0]])


def test_densify_skips_points_on_existing_vertices():
    path = Path([(0.0, 0.0), (5.0, 0.0), (10.0, 0.0)])
    out = densify_path(path, [(5.0, 0.0), (0.0, 0.0), (10.0, 0.0)])
    assert np.array_equal(out.pts, path.pts)


def test_densify_empty_list_is_identity():
    path = Path([(0.0, 0.0), (5.0, 0.0)])
    assert densify_path(path, []) is path


def test_densify_multiple_segments():
    path = Path([(0.0, 0.0), (4.0, 0.0), (4.0, 4.0)])
    out = densify_path(path, [(2.0, 0.0), (4.0, 2.0)])
    assert np.allclose(out.pts, [[0.0, 0.0], [2.0, 0.0], [4.0, 0.0],
                                 [4.0, 2.0], [4.0, 4.0]])


def test_densify_deduplicates_repeated_points():
    # a repeated unsafe point must not create a zero-length segment
    path = Path([(0.0, 0.0), (10.0, 0.0)])
    out = densify_path(path, [(3.0, 0.0), (3.0, 0.0)])
    assert np.allclose(out.pts, [[0.0, 0.0], [3.0, 0.0], [10.0, 0.0]])


# --- full loop ------------------------------------------------------------------------

def test_empty_grid_passes_first_iteration():
    path = support.straight_path(1.0, 5.0, 9.0, 5.0)
    result = iterative_rvp(path, support.make_grid([]), SPRING, OBSTACLE, SIM, ITER)
    assert result.safe
    assert result.iterations_used == 1
    assert len(result.per_iteration) == 1
    assert path_deviation(result.path, path) < 1e-6


def test_corridor_needs_more_than_one_iteration():
    sc = support.corridor_scenario()
    result = _run(sc)
    assert result.safe
    assert 2 <= result.iterations_used <= ITER.max_iters
    assert not collision_check(result.path, sc.grid, ITER.d_c, ITER.eval_spacing)[0]
    assert len(result.per_iteration) == result.iterations_used


def test_walled_off_exhausts_iterations_unsafe():
    sc = support.walled_off_scenario()
    result = _run(sc)
    assert not result.safe
    assert result.iterations_used == ITER.max_iters
    # the flag agrees with the oracle: the returned path really collides
    assert collision_check(result.path, sc.grid, ITER.d_c, ITER.eval_spacing)[0]


def test_safe_flag_never_contradicts_oracle():
    for build in (support.clear_field_scenario, support.single_block_scenario,
                  support.corridor_scenario, support.walled_off_scenario):
        sc = build()
        result = _run(sc)
        colliding, _ = collision_check(result.path, sc.grid, ITER.d_c, ITER.eval_spacing)
        assert bool(result.safe) == (not colliding)


def test_iterative_is_deterministic():
    sc = support.corridor_scenario()
    a = _run(sc)
    b = _run(sc)
    assert np.array_equal(a.path.pts, b.path.pts)
    assert (a.safe, a.iterations_used) == (b.safe, b.iterations_used)
    assert a.per_iteration == b.per_iteration


def test_on_step_reports_iteration_and_step():
    sc = support.corridor_scenario()
    calls = []

    def hook(iteration, step, positions, velocities):
        calls.append((iteration, step))
        assert positions.shape == velocities.shape

    result = _run(sc, on_step=hook)
    iterations = sorted({it for it, _ in calls})
    assert iterations == list(range(1, result.iterations_used + 1))
    for it, diag in enumerate(result.per_iteration, start=1):
        steps = [s for i, s in calls if i == it]
        assert steps == list(range(1, diag.steps_taken + 1))


def test_single_iteration_cap_marks_unsafe():
    sc = support.corridor_scenario()  # needs at least two rounds
    result = _run(sc, IterativeConfig(max_iters=1))
    assert not result.safe
    assert result.iterations_used == 1


def test_zero_margin_relaxes_the_check():
    # with d_c = 0 only direct hits on cell centers count as collisions
    sc = support.single_block_scenario()
    result = _run(sc, IterativeConfig(d_c=0.0))
    assert result.safe
