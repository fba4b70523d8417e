"""Chain relaxation: single-step dynamics, steady-state and stagnation
predicates, and the planning loop that relaxes a global path against an
occupancy grid and resamples the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import step_chain
from .errors import NumericError, ValidationError
from .forces import (
    AnchorSet,
    ObstacleForceParams,
    SpringParams,
    compute_anchor_points,
    rest_lengths_for,
)
from .geometry import Path, arc_length_profile, resample_spline
from .grid import OccupancyGrid, nearest_obstacle_distances
from .rng import Rng


@dataclass(frozen=True)
class SimConfig:
    """Integration loop settings.

    The loop runs at fixed ``dt`` for at most ``max_steps`` steps and may
    exit early once more than ``p_min * max_steps`` steps have run and every
    interior acceleration magnitude is below ``a_t``. A point is considered
    stagnated when its speed stays below ``v_stag`` for ``stag_window``
    consecutive steps while it sits within twice the grid resolution of an
    obstacle; stagnated points are kicked by ``perturb_mag`` in a random
    direction drawn from a stream seeded with ``rng_seed``.
    """

    dt: float = 0.01
    max_steps: int = 2000
    p_min: float = 0.25
    a_t: float = 1e-2
    v_stag: float = 1e-3
    stag_window: int = 25
    perturb_mag: float = 0.2
    rng_seed: int = 0

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValidationError("dt must be positive", field="dt")
        if self.max_steps < 1:
            raise ValidationError("max_steps must be at least 1", field="max_steps")
        if not 0.0 < self.p_min <= 1.0:
            raise ValidationError("p_min must lie in (0, 1]", field="p_min")
        if not self.a_t > 0.0:
            raise ValidationError("a_t must be positive", field="a_t")
        if self.v_stag < 0.0:
            raise ValidationError("v_stag must be non-negative", field="v_stag")
        if self.stag_window < 1:
            raise ValidationError("stag_window must be at least 1", field="stag_window")
        if not self.perturb_mag > 0.0:
            raise ValidationError("perturb_mag must be positive", field="perturb_mag")
        if not 0 <= self.rng_seed < 2**64:
            raise ValidationError("rng_seed must fit in 64 bits", field="rng_seed")


@dataclass
class SimState:
    """Mutable integration state; endpoints stay pinned throughout."""

    positions: np.ndarray  # (n, 2)
    velocities: np.ndarray  # (n, 2)
    accelerations: np.ndarray  # (n, 2), endpoints always zero
    step: int
    stagnation_counters: np.ndarray  # (n,) ints, endpoints always zero


@dataclass(frozen=True)
class PlanDiagnostics:
    """What the planning loop did: step count, how it exited, how many
    point perturbations were applied, and the last max acceleration."""

    steps_taken: int
    steady_exit: bool
    perturbations: int
    final_max_accel: float


def initial_state(path: Path) -> SimState:
    """State at rest on the given path."""
    n = len(path)
    return SimState(
        positions=path.pts.copy(),
        velocities=np.zeros((n, 2)),
        accelerations=np.zeros((n, 2)),
        step=0,
        stagnation_counters=np.zeros(n, dtype=np.int64),
    )


def step_dynamics(state: SimState, grid: OccupancyGrid, anchors: AnchorSet,
                  rest: np.ndarray, spring_params: SpringParams,
                  obstacle_params: ObstacleForceParams, dt: float) -> SimState:
    """One semi-implicit Euler step: a = (F_p + F_o - b*v)/m evaluated on the
    incoming state, then v' = v + dt*a and x' = x + dt*v'. Returns a new
    state; endpoints do not move."""
    new = SimState(
        positions=state.positions.copy(),
        velocities=state.velocities.copy(),
        accelerations=np.zeros_like(state.accelerations),
        step=state.step + 1,
        stagnation_counters=state.stagnation_counters.copy(),
    )
    op = obstacle_params
    sp = spring_params
    amax = step_chain(
        new.positions, new.velocities, new.accelerations[1:-1],
        anchors.anchors, anchors.rest_lengths, rest,
        grid.occupied_centers(), grid.resolution * grid.resolution,
        sp.k_p, sp.k_a, sp.b, sp.m, dt,
        op.a1, op.a2, op.a3, op.n_exp, op.r_max, op.r_floor,
    )
    if amax < 0.0:
        raise NumericError("non-finite acceleration during integration step")
    return new


def is_steady(state: SimState, a_t: float) -> bool:
    """True iff every interior acceleration magnitude is strictly below a_t."""
    acc = state.accelerations[1:-1]
    if acc.shape[0] == 0:
        return True
    return float(np.max(np.hypot(acc[:, 0], acc[:, 1]))) < a_t


def path_stagnated(state: SimState, grid: OccupancyGrid, d_c: float,
                   v_stag: float, stag_window: int) -> list[int]:
    """Advance the per-point slow-motion counters and report interior points
    that have been slow for ``stag_window`` consecutive calls while within
    ``d_c`` of an obstacle. Counters live in ``state`` and are updated here,
    once per step."""
    v = state.velocities[1:-1]
    slow = np.hypot(v[:, 0], v[:, 1]) < v_stag
    counters = state.stagnation_counters
    counters[1:-1] = np.where(slow, counters[1:-1] + 1, 0)
    candidates = np.nonzero(counters[1:-1] >= stag_window)[0] + 1
    if candidates.size == 0:
        return []
    dists = nearest_obstacle_distances(grid, state.positions[candidates])
    return [int(i) for i, d in zip(candidates, dists) if d <= d_c]


class _StagnationTracker:
    """Per-plan stagnation bookkeeping, equivalent to path_stagnated but with
    the obstacle-proximity test memoized.

    A measured clearance d stays valid (point is farther than d_c) until the
    point has drifted more than d - d_c from where it was measured, by the
    triangle inequality; points slower than v_stag cannot cover that distance
    within a run, so settled points cost O(1) per step.
    """

    def __init__(self, grid: OccupancyGrid, d_c: float, n: int):
        self.grid = grid
        self.d_c = d_c
        self.has_obstacles = grid.occupied_centers().shape[0] > 0
        self.eval_pos = np.full((n, 2), np.inf)
        self.eval_dist = np.full(n, -np.inf)

    def stagnated(self, state: SimState, v_stag: float, stag_window: int) -> list[int]:
        v = state.velocities[1:-1]
        slow = np.hypot(v[:, 0], v[:, 1]) < v_stag
        counters = state.stagnation_counters
        counters[1:-1] = np.where(slow, counters[1:-1] + 1, 0)
        if not self.has_obstacles:
            return []
        cand = np.nonzero(counters[1:-1] >= stag_window)[0] + 1
        if cand.size == 0:
            return []
        pos = state.positions[cand]
        drift = np.hypot(pos[:, 0] - self.eval_pos[cand, 0],
                         pos[:, 1] - self.eval_pos[cand, 1])
        margin = self.eval_dist[cand] - self.d_c
        stale = (margin <= 0.0) | (drift >= margin)
        if np.any(stale):
            fresh = cand[stale]
            self.eval_dist[fresh] = nearest_obstacle_distances(self.grid,
                                                               state.positions[fresh])
            self.eval_pos[fresh] = state.positions[fresh]
        return [int(i) for i in cand[self.eval_dist[cand] <= self.d_c]]


def perturb_path(state: SimState, indices, perturb_mag: float, rng: Rng) -> SimState:
    """Kick each listed interior point by ``perturb_mag`` in a random
    direction, zero its velocity, and reset its counter. In place."""
    n = state.positions.shape[0]
    for i in indices:
        if not 0 < i < n - 1:
            raise ValidationError("only interior points can be perturbed", field="indices")
        ux, uy = rng.unit_vector()
        state.positions[i, 0] += perturb_mag * ux
        state.positions[i, 1] += perturb_mag * uy
        state.velocities[i] = 0.0
        state.stagnation_counters[i] = 0
    return state


def rvp_plan(global_path: Path, grid: OccupancyGrid, spring_params: SpringParams,
             obstacle_params: ObstacleForceParams, sim_config: SimConfig,
             on_step=None) -> tuple[Path, PlanDiagnostics]:
    """Relax the global path against the grid and return the reshaped path.

    Anchors and rest lengths are taken from the input path, the chain is
    integrated for up to ``max_steps`` steps with stagnation perturbation,
    and the final positions are resampled at the input's mean point spacing.
    A step that perturbed points cannot also be the steady exit step (its
    stored accelerations predate the kick).

    ``on_step(step, positions, velocities)`` is called with copies after
    every step when given.
    """
    n = len(global_path)
    if n < 3:
        raise ValidationError("planning needs at least 3 path points", field="global_path")

    rest = rest_lengths_for(global_path, spring_params)
    anchors = compute_anchor_points(global_path, spring_params, rest)
    occ = grid.occupied_centers()
    cell_area = grid.resolution * grid.resolution
    mean_spacing = float(arc_length_profile(global_path)[-1]) / (n - 1)
    stag_margin = 2.0 * grid.resolution
    rng = Rng(sim_config.rng_seed)
    cfg = sim_config
    sp = spring_params
    op = obstacle_params

    state = initial_state(global_path)
    acc_interior = state.accelerations[1:-1]
    tracker = _StagnationTracker(grid, stag_margin, n)
    steady_exit = False
    perturbations = 0
    amax = 0.0
    steady_after = cfg.p_min * cfg.max_steps

    for step in range(1, cfg.max_steps + 1):
        amax = step_chain(
            state.positions, state.velocities, acc_interior,
            anchors.anchors, anchors.rest_lengths, rest, occ, cell_area,
            sp.k_p, sp.k_a, sp.b, sp.m, cfg.dt,
            op.a1, op.a2, op.a3, op.n_exp, op.r_max, op.r_floor,
        )
        if amax < 0.0:
            raise NumericError(f"non-finite acceleration at step {step}")
        state.step = step

        stuck = tracker.stagnated(state, cfg.v_stag, cfg.stag_window)
        perturbed = bool(stuck)
        if perturbed:
            perturb_path(state, stuck, cfg.perturb_mag, rng)
            perturbations += len(stuck)

        if on_step is not None:
            on_step(step, state.positions.copy(), state.velocities.copy())

        if step > steady_after and not perturbed and amax < cfg.a_t:
            steady_exit = True
            break

    final = Path(state.positions.copy())
    out = resample_spline(final, mean_spacing)
    diag = PlanDiagnostics(
        steps_taken=state.step,
        steady_exit=steady_exit,
        perturbations=perturbations,
        final_max_accel=amax,
    )
    return out, diag
