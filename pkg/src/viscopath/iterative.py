"""Outer planning loop: run the relaxation, check the result for collisions
at a safety margin, and on failure densify the path where it collided,
shrink the obstacle-force parameters, and try again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import PlanDiagnostics, SimConfig, rvp_plan
from .errors import ValidationError
from .forces import ObstacleForceParams, SpringParams
from .geometry import Path
from .grid import OccupancyGrid, collision_check

_VERTEX_SNAP = 1e-9  # meters; closer than this counts as an existing vertex


@dataclass(frozen=True)
class IterativeConfig:
    """Outer loop settings: decay factor for (a1, a2), safety margin d_c,
    iteration cap, and the spacing of interpolated collision-check points."""

    lambda_decay: float = 0.8
    d_c: float = 0.2
    max_iters: int = 5
    eval_spacing: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.lambda_decay <= 1.0:
            raise ValidationError("lambda_decay must lie in (0, 1]", field="lambda_decay")
        if self.d_c < 0.0:
            raise ValidationError("d_c must be non-negative", field="d_c")
        if self.max_iters < 1:
            raise ValidationError("max_iters must be at least 1", field="max_iters")
        if not self.eval_spacing > 0.0:
            raise ValidationError("eval_spacing must be positive", field="eval_spacing")


@dataclass(frozen=True)
class IterativeResult:
    """Final path with its safety flag (1: clear of obstacles by d_c at every
    evaluated point, 0: still colliding after max_iters attempts), the number
    of planner runs used, and per-run diagnostics."""

    path: Path
    safe: bool
    iterations_used: int
    per_iteration: tuple[PlanDiagnostics, ...]


def decay_schedule(a1: float, a2: float, lambda_decay: float, iteration: int):
    """(a1, a2) scaled by lambda^(iteration-1); iteration counts from 1 and
    the inputs are always the original configured values."""
    if iteration < 1:
        raise ValidationError("iteration counts from 1", field="iteration")
    f = lambda_decay ** (iteration - 1)
    return a1 * f, a2 * f


def densify_path(path: Path, unsafe_points) -> Path:
    """Insert colliding evaluation points into the path at their arc-length
    positions. Points that already are vertices (within 1e-9 m) are skipped;
    existing vertices are never removed."""
    if len(unsafe_points) == 0:
        return path
    pts = path.pts
    seg = pts[1:] - pts[:-1]
    seg_len2 = seg[:, 0] ** 2 + seg[:, 1] ** 2
    safe_len2 = np.where(seg_len2 > 0.0, seg_len2, 1.0)

    inserts: dict[int, list[tuple[float, tuple[float, float]]]] = {}
    for p in unsafe_points:
        px, py = float(p[0]), float(p[1])
        rel = np.array([px, py]) - pts[:-1]
        t = np.clip((rel[:, 0] * seg[:, 0] + rel[:, 1] * seg[:, 1]) / safe_len2, 0.0, 1.0)
        proj = pts[:-1] + t[:, None] * seg
        d2 = (proj[:, 0] - px) ** 2 + (proj[:, 1] - py) ** 2
        j = int(np.argmin(d2))
        if math.hypot(px - pts[j, 0], py - pts[j, 1]) < _VERTEX_SNAP:
            continue
        if math.hypot(px - pts[j + 1, 0], py - pts[j + 1, 1]) < _VERTEX_SNAP:
            continue
        inserts.setdefault(j, []).append((float(t[j]), (px, py)))

    if not inserts:
        return path
    out: list[tuple[float, float]] = []
    for i in range(pts.shape[0] - 1):
        out.append((float(pts[i, 0]), float(pts[i, 1])))
        for _, q in sorted(inserts.get(i, [])):
            if q != out[-1]:
                out.append(q)
    out.append((float(pts[-1, 0]), float(pts[-1, 1])))
    return Path(np.array(out))


def iterative_rvp(global_path: Path, grid: OccupancyGrid,
                  spring_params: SpringParams,
                  obstacle_params: ObstacleForceParams,
                  sim_config: SimConfig,
                  iter_config: IterativeConfig,
                  on_step=None) -> IterativeResult:
    """Plan, evaluate, and retry with a densified path and decayed forces.

    Each attempt runs the full relaxation on the current path (anchors are
    recomputed from it, so later attempts preserve earlier reshaping), then
    checks the output against the grid at margin d_c. The first clear output
    is returned with safe=1; after max_iters colliding attempts the last
    output is returned with safe=0. iterations_used counts planner runs.

    ``on_step(iteration, step, positions, velocities)`` is forwarded to every
    planner run when given.
    """
    op = obstacle_params
    current = global_path
    diags: list[PlanDiagnostics] = []
    planned = global_path
    for it in range(1, iter_config.max_iters + 1):
        a1_it, a2_it = decay_schedule(op.a1, op.a2, iter_config.lambda_decay, it)
        op_it = ObstacleForceParams(
            a1=max(a1_it, op.r_floor * (1.0 + 1e-9)),
            a2=a2_it,
            a3=op.a3,
            n_exp=op.n_exp,
            r_max=op.r_max,
            r_floor=op.r_floor,
        )
        hook = None
        if on_step is not None:
            def hook(step, positions, velocities, _it=it):
                on_step(_it, step, positions, velocities)
        planned, diag = rvp_plan(current, grid, spring_params, op_it, sim_config,
                                 on_step=hook)
        diags.append(diag)
        colliding, unsafe = collision_check(
            planned, grid, iter_config.d_c, iter_config.eval_spacing
        )
        if not colliding:
            return IterativeResult(
                path=planned, safe=True, iterations_used=it, per_iteration=tuple(diags)
            )
        current = densify_path(planned, unsafe)
    return IterativeResult(
        path=planned,
        safe=False,
        iterations_used=iter_config.max_iters,
        per_iteration=tuple(diags),
    )
