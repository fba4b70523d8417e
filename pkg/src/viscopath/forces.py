"""Virtual force model: spring/damper constants, anchor construction, the
per-point path force, and the repulsive obstacle force summed over occupied
cells.

Interior path points are tied to their neighbors with stiffness ``k_p``, to
a fixed anchor with stiffness ``k_a``, and damped with coefficient ``b``.
Obstacle cells repel with an inverse-power law inside radius ``a1`` and an
exponential tail beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .geometry import Path
from .grid import OccupancyGrid, occupied_cells_within

REST_INITIAL = "initial"  # rest lengths = distances in the starting configuration
REST_ZERO = "zero"  # contracting chain; anchors offset to balance it


@dataclass(frozen=True)
class SpringParams:
    """Mass-spring-damper constants for the path chain.

    ``k_p = m * omega^2`` couples neighbors, ``k_a = c_scale * k_p`` couples
    each interior point to its anchor, and ``b = 2 * m * zeta * omega`` damps
    point motion.
    """

    m: float = 1.0
    omega: float = 2.0
    zeta: float = 1.0
    c_scale: float = 0.5
    rest_mode: str = REST_INITIAL
    k_p: float = field(init=False)
    k_a: float = field(init=False)
    b: float = field(init=False)

    def __post_init__(self):
        if not self.m > 0.0:
            raise ValidationError("mass must be positive", field="m")
        if not self.omega > 0.0:
            raise ValidationError("omega must be positive", field="omega")
        if self.zeta < 0.0:
            raise ValidationError("zeta must be non-negative", field="zeta")
        if not self.c_scale > 0.0:
            raise ValidationError("c_scale must be positive", field="c_scale")
        if self.rest_mode not in (REST_INITIAL, REST_ZERO):
            raise ValidationError(
                f"rest_mode must be '{REST_INITIAL}' or '{REST_ZERO}'", field="rest_mode"
            )
        object.__setattr__(self, "k_p", self.m * self.omega**2)
        object.__setattr__(self, "k_a", self.c_scale * self.m * self.omega**2)
        object.__setattr__(self, "b", 2.0 * self.m * self.zeta * self.omega)


def derive_constants(m, omega, zeta, c_scale, rest_mode=REST_INITIAL) -> SpringParams:
    """SpringParams from the four tuning constants."""
    return SpringParams(m=m, omega=omega, zeta=zeta, c_scale=c_scale, rest_mode=rest_mode)


@dataclass(frozen=True)
class ObstacleForceParams:
    """Repulsion profile: ``a2 / r^n`` within ``a1``, exponentially decayed
    (constant ``a3``) beyond, zero past ``r_max``; ``r`` is clamped to
    ``r_floor`` so points inside obstacles get a large but finite push."""

    a1: float = 0.8
    a2: float = 3.0
    a3: float = 0.4
    n_exp: float = 2.0
    r_max: float = 2.8
    r_floor: float = 0.05

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "r_max"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive", field=name)
        if self.n_exp < 1.0:
            raise ValidationError("n_exp must be at least 1", field="n_exp")
        if not 0.0 < self.r_floor < self.a1:
            raise ValidationError("r_floor must lie in (0, a1)", field="r_floor")
        if self.r_max < self.a1:
            raise ValidationError("r_max must be at least a1", field="r_max")

    def scaled(self, factor: float) -> "ObstacleForceParams":
        """Copy with a1 and a2 multiplied by ``factor`` (decay schedule helper).

        The floor and outer cutoff keep their absolute values; a1 is kept
        above r_floor so the profile stays valid.
        """
        a1 = max(self.a1 * factor, self.r_floor * (1.0 + 1e-9))
        return ObstacleForceParams(
            a1=a1,
            a2=self.a2 * factor,
            a3=self.a3,
            n_exp=self.n_exp,
            r_max=self.r_max,
            r_floor=self.r_floor,
        )


def default_obstacle_params(a1, a2, resolution, n_exp=2.0) -> ObstacleForceParams:
    """Profile with the documented derived defaults: a3 = a1/2, r_max = a1 + 5*a3,
    r_floor = resolution/2."""
    a3 = a1 / 2.0
    return ObstacleForceParams(
        a1=a1, a2=a2, a3=a3, n_exp=n_exp, r_max=a1 + 5.0 * a3, r_floor=resolution / 2.0
    )


@dataclass(frozen=True)
class AnchorSet:
    """One anchor per interior path point, with its spring rest length."""

    anchors: np.ndarray  # (n-2, 2)
    rest_lengths: np.ndarray  # (n-2,)

    def __post_init__(self):
        self.anchors.setflags(write=False)
        self.rest_lengths.setflags(write=False)


def rest_lengths_for(path: Path, params: SpringParams) -> np.ndarray:
    """Per-segment spring rest lengths under the configured convention."""
    seg = np.diff(path.pts, axis=0)
    if params.rest_mode == REST_ZERO:
        return np.zeros(seg.shape[0])
    return np.hypot(seg[:, 0], seg[:, 1])


def spring_force(p_from, p_to, k: float, rest: float) -> np.ndarray:
    """Hooke force on ``p_from`` along the line to ``p_to``: k * (|d| - rest) * unit(d).

    Coincident endpoints give zero force (direction undefined).
    """
    dx = p_to[0] - p_from[0]
    dy = p_to[1] - p_from[1]
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        return np.zeros(2)
    scale = k * (dist - rest) / dist
    return np.array([scale * dx, scale * dy])


def _neighbor_forces(pts: np.ndarray, rest: np.ndarray, k_p: float) -> np.ndarray:
    """Sum of both neighbor spring forces for each interior point, vectorized."""
    d = np.diff(pts, axis=0)
    length = np.hypot(d[:, 0], d[:, 1])
    safe = np.where(length > 0.0, length, 1.0)
    # Tension along each segment, as the force the right endpoint exerts on the left.
    pull = (k_p * (length - rest) / safe)[:, None] * d
    pull[length == 0.0] = 0.0
    return pull[1:] - pull[:-1]


def compute_anchor_points(path: Path, params: SpringParams, rest: np.ndarray) -> AnchorSet:
    """Anchor of each interior point: the location whose spring balances the
    neighbor forces in the starting configuration; rest length is its
    distance to the point."""
    if len(path) < 3:
        raise ValidationError("anchors need at least 3 path points", field="points")
    pts = path.pts
    f_neighbors = _neighbor_forces(pts, rest, params.k_p)
    anchors = pts[1:-1] - f_neighbors / params.k_a
    rest_lengths = np.hypot(anchors[:, 0] - pts[1:-1, 0], anchors[:, 1] - pts[1:-1, 1])
    return AnchorSet(anchors=anchors, rest_lengths=rest_lengths)


def path_force(i: int, positions: np.ndarray, anchors: AnchorSet, rest: np.ndarray,
               params: SpringParams) -> np.ndarray:
    """Total spring force on interior point ``i``: both neighbors plus its anchor."""
    n = positions.shape[0]
    if not 0 < i < n - 1:
        raise ValidationError("path force is defined for interior points only", field="i")
    f = spring_force(positions[i], positions[i - 1], params.k_p, rest[i - 1])
    f += spring_force(positions[i], positions[i + 1], params.k_p, rest[i])
    f += spring_force(positions[i], anchors.anchors[i - 1], params.k_a,
                      anchors.rest_lengths[i - 1])
    return f


def obstacle_force_magnitude(r: float, p: ObstacleForceParams) -> float:
    """Scalar repulsion at distance ``r``; see ObstacleForceParams for the profile."""
    if r < 0.0:
        raise ValidationError("distance must be non-negative", field="r")
    if r > p.r_max:
        return 0.0
    rc = max(r, p.r_floor)
    if p.n_exp == 2.0:
        inv = 1.0 / (rc * rc)
    else:
        inv = rc**-p.n_exp
    if rc <= p.a1:
        return p.a2 * inv
    return p.a2 * math.exp(-(rc - p.a1) / p.a3) * inv


def total_obstacle_force(p, grid: OccupancyGrid, params: ObstacleForceParams) -> np.ndarray:
    """Cell-area-weighted sum of repulsions from all occupied cells within range."""
    force = np.zeros(2)
    area = grid.resolution * grid.resolution
    for center, dist in occupied_cells_within(grid, p, params.r_max):
        mag = obstacle_force_magnitude(dist, params)
        if dist == 0.0:
            # Point exactly on a cell center: push along +x by convention.
            force[0] += mag * area
            continue
        ux = (p[0] - center[0]) / dist
        uy = (p[1] - center[1]) / dist
        force[0] += mag * ux * area
        force[1] += mag * uy * area
    return force
