"""Shared scenario builders and physics oracles for the test suite.

Scenarios here are built by hand rather than through the generator so that
tests pin exact geometry. Oracles recompute quantities the package derives
(potential energies, force integrals) through an independent route, mostly
closed forms via scipy.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import exp1

import viscopath as v

RESOLUTION = 0.1
GRID_CELLS = 100


def cells_in_box(x0, x1, y0, y1, resolution=RESOLUTION, cells=GRID_CELLS):
    """All (row, col) whose centers fall inside the closed box."""
    out = []
    for row in range(cells):
        cy = (row + 0.5) * resolution
        if not (y0 <= cy <= y1):
            continue
        for col in range(cells):
            cx = (col + 0.5) * resolution
            if x0 <= cx <= x1:
                out.append((row, col))
    return out


def cells_in_disc(cx, cy, radius, resolution=RESOLUTION, cells=GRID_CELLS):
    out = []
    for row in range(cells):
        py = (row + 0.5) * resolution
        for col in range(cells):
            px = (col + 0.5) * resolution
            if (px - cx) ** 2 + (py - cy) ** 2 <= radius * radius:
                out.append((row, col))
    return out


def make_grid(cell_list):
    return v.OccupancyGrid.from_cells(
        resolution=RESOLUTION, origin=(0.0, 0.0),
        width=GRID_CELLS, height=GRID_CELLS, cells=cell_list,
    )


def straight_path(x0, y0, x1, y1, n=50):
    pts = np.stack([np.linspace(x0, x1, n), np.linspace(y0, y1, n)], axis=1)
    return v.Path(pts)


def _scenario(seed, cell_list, path):
    return v.Scenario(seed=seed, grid=make_grid(cell_list),
                      global_path=path, metadata=v.GeneratorConfig())


# ---------------------------------------------------------------------------
# Golden rendering scenarios: four canonical obstacle layouts.

def clear_field_scenario():
    """Obstacles present but all farther than the force cutoff from the path."""
    cells = cells_in_box(1.0, 2.2, 7.5, 8.7) + cells_in_box(7.4, 8.6, 7.3, 8.5)
    return _scenario(101, cells, straight_path(1.0, 2.0, 9.0, 2.0))


def single_block_scenario():
    """One square block sitting on the path midpoint."""
    cells = cells_in_box(4.6, 5.4, 4.6, 5.4)
    return _scenario(102, cells, straight_path(1.0, 5.0, 9.0, 5.0))


def double_gap_scenario():
    """A wall across the path with two openings; the path aims between them."""
    wall = [
        (row, col)
        for (row, col) in cells_in_box(4.8, 5.2, 1.0, 9.0)
        if not (4.3 <= (row + 0.5) * RESOLUTION <= 5.1)
        and not (5.9 <= (row + 0.5) * RESOLUTION <= 6.7)
    ]
    return _scenario(103, wall, straight_path(1.0, 5.0, 9.0, 5.0))


def blob_cluster_scenario():
    """Overlapping discs forming one irregular blob next to the path."""
    cells = sorted(set(
        cells_in_disc(4.7, 5.2, 0.55)
        + cells_in_disc(5.3, 4.8, 0.45)
        + cells_in_disc(5.0, 5.6, 0.40)
    ))
    return _scenario(104, cells, straight_path(1.0, 4.4, 9.0, 5.6))


GOLDEN_BUILDERS = {
    "clear_field": clear_field_scenario,
    "single_block": single_block_scenario,
    "double_gap": double_gap_scenario,
    "blob_cluster": blob_cluster_scenario,
}


# ---------------------------------------------------------------------------
# Constructed iterative-planner scenarios.

def corridor_scenario():
    """Corridor with a small pinch block; the global path has sparse vertices.

    The first planned pass clears the pinch at every vertex while a chord
    between vertices still cuts inside the safety margin, so at least one
    densify-and-replan round is required before the check passes.
    """
    walls = cells_in_box(3.0, 7.0, 4.0, 4.3) + cells_in_box(3.0, 7.0, 5.7, 6.0)
    pinch = [(50, 50), (50, 51), (51, 50), (51, 51)]
    return _scenario(105, walls + pinch, straight_path(1.0, 5.0, 9.0, 5.0, n=12))


def walled_off_scenario():
    """Goal enclosed by a ring; no collision-free reshaping exists."""
    ring = [
        (row, col)
        for (row, col) in cells_in_box(6.8, 9.3, 3.8, 6.3)
        if 0.8 <= math.hypot((col + 0.5) * RESOLUTION - 8.0,
                             (row + 0.5) * RESOLUTION - 5.0) <= 1.1
    ]
    return _scenario(106, ring, straight_path(1.0, 5.0, 8.0, 5.0))


# ---------------------------------------------------------------------------
# Shared physics probes.

def random_walk_path(rng, n):
    """Random open polyline with segment lengths bounded away from zero."""
    pts = [(rng.uniform(-5, 5), rng.uniform(-5, 5))]
    for _ in range(n - 1):
        dx, dy = rng.unit_vector()
        step = 0.3 + rng.random()
        pts.append((pts[-1][0] + step * dx, pts[-1][1] + step * dy))
    return v.Path(pts)


def oscillator_error(dt):
    """Integration error of a critically damped unit oscillator at t = 1.

    Two far-away neighbors make their springs nearly vertical-force-free, so
    the middle mass reduces to a 1-DOF unit: m=1, k=k_a=1, b=2 (critical).
    With x0=1, v0=0 the closed form at t=1 is 2/e.
    """
    params = v.derive_constants(m=1.0, omega=1.0, zeta=1.0, c_scale=1.0)
    base = v.Path([(-200.0, 0.0), (0.0, 0.0), (200.0, 0.0)])
    rest = v.rest_lengths_for(base, params)
    anchors = v.compute_anchor_points(base, params, rest)
    state = v.initial_state(base)
    state.positions[1] = (0.0, 1.0)

    empty = make_grid([])
    for _ in range(int(round(1.0 / dt))):
        state = v.step_dynamics(state, empty, anchors, rest, params,
                                v.ObstacleForceParams(), dt)
    return abs(state.positions[1, 1] - 2.0 * math.exp(-1.0))


# ---------------------------------------------------------------------------
# Potential-energy oracles.

def spring_potential(positions, anchors, rest, params):
    """Elastic energy of the chain: segment springs plus anchor tethers."""
    total = 0.0
    for i in range(len(positions) - 1):
        length = float(np.linalg.norm(positions[i + 1] - positions[i]))
        total += 0.5 * params.k_p * (length - rest[i]) ** 2
    for i in range(1, len(positions) - 1):
        stretch = float(np.linalg.norm(anchors.anchors[i - 1] - positions[i]))
        total += 0.5 * params.k_a * (stretch - anchors.rest_lengths[i - 1]) ** 2
    return total


def obstacle_potential(r, p):
    """Integral of the repulsive magnitude from r out to the cutoff.

    Valid for the default exponent n = 2. The exponential tail integrates
    in closed form through the exponential integral E1. Accepts scalars or
    arrays; per-step energy audits hit this with thousands of distances.
    """
    assert p.n_exp == 2.0
    scalar = np.ndim(r) == 0
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.zeros_like(rr)

    def tail_antideriv(s):
        return -np.exp(-s / p.a3) / s + exp1(s / p.a3) / p.a3

    # integral of a2 * exp(-(u - a1)/a3) / u^2 from s to r_max
    scale = p.a2 * math.exp(p.a1 / p.a3)
    g_rmax = tail_antideriv(p.r_max)
    u_a1 = scale * (g_rmax - tail_antideriv(p.a1))
    u_floor = p.a2 * (1.0 / p.r_floor - 1.0 / p.a1) + u_a1

    in_tail = (rr > p.a1) & (rr < p.r_max)
    out[in_tail] = scale * (g_rmax - tail_antideriv(rr[in_tail]))
    in_power = (rr >= p.r_floor) & (rr <= p.a1)
    out[in_power] = p.a2 * (1.0 / rr[in_power] - 1.0 / p.a1) + u_a1
    # below the floor the magnitude is clamped, so the potential ramps linearly
    below = rr < p.r_floor
    out[below] = (p.a2 / p.r_floor ** 2) * (p.r_floor - rr[below]) + u_floor
    return float(out[0]) if scalar else out


def grid_obstacle_potential(point, grid, params):
    """Sum of per-cell potentials, weighted like the discretized force."""
    centers = grid.occupied_centers()
    if centers.size == 0:
        return 0.0
    area = grid.resolution * grid.resolution
    dists = np.hypot(centers[:, 0] - point[0], centers[:, 1] - point[1])
    return area * float(np.sum(obstacle_potential(dists, params)))


def mechanical_energy(positions, velocities, anchors, rest, spring, grid, obstacle):
    """Kinetic plus elastic plus repulsive-potential energy of the chain."""
    kinetic = 0.5 * spring.m * float(np.sum(velocities * velocities))
    elastic = spring_potential(positions, anchors, rest, spring)
    repulsive = 0.0
    centers = grid.occupied_centers()
    if centers.size:
        interior = positions[1:-1]
        dists = np.hypot(interior[:, None, 0] - centers[None, :, 0],
                         interior[:, None, 1] - centers[None, :, 1])
        area = grid.resolution * grid.resolution
        repulsive = area * float(np.sum(obstacle_potential(dists.ravel(), obstacle)))
    return kinetic + elastic + repulsive
