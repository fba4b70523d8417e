"""Deterministic scenario generation: random occupancy grids populated with
simple shapes, and random global paths across them.

Everything downstream of the seed uses the pinned generator from ``rng`` and
arithmetic with exact IEEE semantics (no libm trig), so a (config, count)
pair produces byte-identical datasets on any platform. Circular arcs are
built by recursive chord bisection instead of angle sampling for the same
reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError, ValidationError
from .geometry import Path
from .grid import OccupancyGrid, nearest_obstacle_distance
from .rng import Rng, derive_seed

_OBJECT_KINDS = ("circle", "rectangle", "blob")
_PATH_KINDS = ("straight", "arc", "s_curve")
_ARC_SUBDIVISION_LEVELS = 12  # 4096 equal sub-chords per arc
_ENDPOINT_ATTEMPTS = 1000
_SCENARIO_RETRIES = 16
_MIN_SEPARATION_FRACTION = 0.3  # of the smaller world dimension


@dataclass(frozen=True)
class GeneratorConfig:
    """Distribution parameters for random environments and paths.

    Sizes are overall object diameters in meters. Path kind weights must sum
    to 1. These defaults are declared experiment parameters at desk scale.
    """

    grid_width: int = 100
    grid_height: int = 100
    resolution: float = 0.1
    object_count_range: tuple[int, int] = (5, 20)
    object_kinds: tuple[str, ...] = _OBJECT_KINDS
    object_size_range: tuple[float, float] = (0.2, 1.5)
    path_kind_weights: dict[str, float] = field(
        default_factory=lambda: {"straight": 0.3, "arc": 0.4, "s_curve": 0.3}
    )
    path_point_count: int = 50
    clearance_from_endpoints: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.grid_width < 1 or self.grid_height < 1:
            raise ValidationError("grid dimensions must be positive", field="grid_width")
        if not self.resolution > 0.0:
            raise ValidationError("resolution must be positive", field="resolution")
        lo, hi = self.object_count_range
        if lo < 0 or hi < lo:
            raise ValidationError("object_count_range must be ordered and non-negative",
                                  field="object_count_range")
        slo, shi = self.object_size_range
        if not 0.0 < slo <= shi:
            raise ValidationError("object_size_range must be ordered and positive",
                                  field="object_size_range")
        if not self.object_kinds or any(k not in _OBJECT_KINDS for k in self.object_kinds):
            raise ValidationError(f"object_kinds must be a non-empty subset of {_OBJECT_KINDS}",
                                  field="object_kinds")
        if set(self.path_kind_weights) - set(_PATH_KINDS):
            raise ValidationError(f"path kinds must be among {_PATH_KINDS}",
                                  field="path_kind_weights")
        if any(w < 0.0 for w in self.path_kind_weights.values()):
            raise ValidationError("path kind weights must be non-negative",
                                  field="path_kind_weights")
        if abs(sum(self.path_kind_weights.values()) - 1.0) > 1e-9:
            raise ValidationError("path kind weights must sum to 1",
                                  field="path_kind_weights")
        if self.path_point_count < 3:
            raise ValidationError("path_point_count must be at least 3",
                                  field="path_point_count")
        if self.clearance_from_endpoints < 0.0:
            raise ValidationError("clearance must be non-negative",
                                  field="clearance_from_endpoints")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must fit in 64 bits", field="seed")


@dataclass(frozen=True)
class Scenario:
    """One planning problem: the seed that produced it, the sensed grid, and
    the desired global path."""

    seed: int
    grid: OccupancyGrid
    global_path: Path
    metadata: GeneratorConfig


def _world_size(config: GeneratorConfig) -> tuple[float, float]:
    return config.grid_width * config.resolution, config.grid_height * config.resolution


def _cell_range(lo: float, hi: float, resolution: float, count: int) -> range:
    first = max(0, int(math.floor(lo / resolution)))
    last = min(count - 1, int(math.floor(hi / resolution)))
    return range(first, last + 1)


def _raster_circle(cells: set, config: GeneratorConfig, cx: float, cy: float, r: float):
    res = config.resolution
    r2 = r * r
    for row in _cell_range(cy - r, cy + r, res, config.grid_height):
        ccy = (row + 0.5) * res
        for col in _cell_range(cx - r, cx + r, res, config.grid_width):
            ccx = (col + 0.5) * res
            if (ccx - cx) ** 2 + (ccy - cy) ** 2 <= r2:
                cells.add((row, col))


def _raster_rectangle(cells: set, config: GeneratorConfig, cx: float, cy: float,
                      w: float, h: float, ux: float, uy: float):
    res = config.resolution
    half = math.hypot(w, h) / 2.0
    for row in _cell_range(cy - half, cy + half, res, config.grid_height):
        ccy = (row + 0.5) * res
        for col in _cell_range(cx - half, cx + half, res, config.grid_width):
            ccx = (col + 0.5) * res
            dx = ccx - cx
            dy = ccy - cy
            if abs(dx * ux + dy * uy) <= w / 2.0 and abs(-dx * uy + dy * ux) <= h / 2.0:
                cells.add((row, col))


def generate_environment(config: GeneratorConfig, rng: Rng) -> OccupancyGrid:
    """Place a random number of random shapes onto an empty grid.

    A cell is occupied when its center falls inside any shape; shapes may
    overlap each other and the grid edges.
    """
    lo, hi = config.object_count_range
    count = lo + rng.randrange(hi - lo + 1)
    kinds = [k for k in _OBJECT_KINDS if k in config.object_kinds]
    world_w, world_h = _world_size(config)
    cells: set[tuple[int, int]] = set()
    for _ in range(count):
        kind = kinds[rng.randrange(len(kinds))]
        size = rng.uniform(*config.object_size_range)
        cx = rng.uniform(0.0, world_w)
        cy = rng.uniform(0.0, world_h)
        if kind == "circle":
            _raster_circle(cells, config, cx, cy, size / 2.0)
        elif kind == "rectangle":
            other = rng.uniform(*config.object_size_range)
            ux, uy = rng.unit_vector()
            _raster_rectangle(cells, config, cx, cy, size, other, ux, uy)
        else:
            lobes = 2 + rng.randrange(3)
            for _ in range(lobes):
                lr = rng.uniform(size / 4.0, size / 2.0)
                lx = cx + rng.uniform(-size / 2.0, size / 2.0)
                ly = cy + rng.uniform(-size / 2.0, size / 2.0)
                _raster_circle(cells, config, lx, ly, lr)
    return OccupancyGrid.from_cells(
        resolution=config.resolution,
        origin=(0.0, 0.0),
        width=config.grid_width,
        height=config.grid_height,
        cells=sorted(cells),
    )


def _arc_polyline(start, end, sagitta: float, left: bool) -> np.ndarray:
    """Dense polyline along the circular arc from start to end with the given
    sagitta, as 2^levels equal sub-chords built by recursive bisection.

    Bisection only needs square roots: the midpoint of two points on the arc
    is pushed radially onto the circle.
    """
    sx, sy = start
    ex, ey = end
    chord = math.hypot(ex - sx, ey - sy)
    h = min(sagitta, chord / 2.0)
    radius = h / 2.0 + chord * chord / (8.0 * h)
    mx, my = (sx + ex) / 2.0, (sy + ey) / 2.0
    nx, ny = -(ey - sy) / chord, (ex - sx) / chord
    if not left:
        nx, ny = -nx, -ny
    # Bulge is along +n; the center sits on the other side of the chord.
    ox = mx - nx * (radius - h)
    oy = my - ny * (radius - h)

    pts = [np.array([sx, sy]), np.array([ex, ey])]
    for _ in range(_ARC_SUBDIVISION_LEVELS):
        refined = [pts[0]]
        for a, b in zip(pts[:-1], pts[1:]):
            vx = (a[0] + b[0]) / 2.0 - ox
            vy = (a[1] + b[1]) / 2.0 - oy
            norm = math.hypot(vx, vy)
            refined.append(np.array([ox + radius * vx / norm, oy + radius * vy / norm]))
            refined.append(b)
        pts = refined
    return np.array(pts)


def _resample_polyline(dense: np.ndarray, count: int) -> np.ndarray:
    """``count`` points at even arc-length positions along a dense polyline."""
    d = np.diff(dense, axis=0)
    s = np.concatenate([[0.0], np.cumsum(np.hypot(d[:, 0], d[:, 1]))])
    targets = np.arange(count) * (s[-1] / (count - 1))
    out = np.empty((count, 2))
    out[0] = dense[0]
    out[-1] = dense[-1]
    j = 0
    for i in range(1, count - 1):
        t = targets[i]
        while s[j + 1] < t:
            j += 1
        f = (t - s[j]) / (s[j + 1] - s[j])
        out[i] = dense[j] + f * (dense[j + 1] - dense[j])
    return out


def generate_global_path(config: GeneratorConfig, grid: OccupancyGrid, rng: Rng) -> Path:
    """Random path across the grid: straight line, circular arc, or two-arc
    S-curve, emitted as evenly spaced points.

    Start and end are rejection-sampled from free space with the configured
    clearance and a minimum separation; the path body may cross obstacles.
    """
    world_w, world_h = _world_size(config)
    min_sep = _MIN_SEPARATION_FRACTION * min(world_w, world_h)
    clearance = config.clearance_from_endpoints

    start = end = None
    for _ in range(_ENDPOINT_ATTEMPTS):
        sx, sy = rng.uniform(0.0, world_w), rng.uniform(0.0, world_h)
        ex, ey = rng.uniform(0.0, world_w), rng.uniform(0.0, world_h)
        if math.hypot(ex - sx, ey - sy) < min_sep:
            continue
        ds = nearest_obstacle_distance(grid, (sx, sy))
        if ds is not None and ds < clearance:
            continue
        de = nearest_obstacle_distance(grid, (ex, ey))
        if de is not None and de < clearance:
            continue
        start, end = (sx, sy), (ex, ey)
        break
    if start is None:
        raise GenerationError(
            f"no clear endpoints after {_ENDPOINT_ATTEMPTS} attempts (grid too crowded)"
        )

    r = rng.random()
    kind = _PATH_KINDS[-1]
    acc = 0.0
    for name in _PATH_KINDS:
        acc += config.path_kind_weights.get(name, 0.0)
        if r < acc:
            kind = name
            break

    n = config.path_point_count
    if kind == "straight":
        t = np.linspace(0.0, 1.0, n)
        pts = np.array(start) + t[:, None] * (np.array(end) - np.array(start))
        return Path(pts)

    chord = math.hypot(end[0] - start[0], end[1] - start[1])
    left = rng.random() < 0.5
    if kind == "arc":
        sagitta = rng.uniform(0.1, 0.5) * chord
        dense = _arc_polyline(start, end, sagitta, left)
        return Path(_resample_polyline(dense, n))

    mid = ((start[0] + end[0]) / 2.0, (start[1] + end[1]) / 2.0)
    sagitta = rng.uniform(0.1, 0.45) * (chord / 2.0)
    first = _arc_polyline(start, mid, sagitta, left)
    second = _arc_polyline(mid, end, sagitta, not left)
    dense = np.vstack([first, second[1:]])
    return Path(_resample_polyline(dense, n))


def generate_scenario(config: GeneratorConfig, index: int) -> Scenario:
    """Scenario ``index`` of the dataset, reproducible standalone.

    The first attempt uses a seed derived from (config.seed, index); if path
    generation fails on a crowded grid, the whole scenario is resampled from
    a chained seed, a bounded number of times.
    """
    seed = derive_seed(config.seed, index)
    for _ in range(_SCENARIO_RETRIES):
        rng = Rng(seed)
        grid = generate_environment(config, rng)
        try:
            path = generate_global_path(config, grid, rng)
        except GenerationError:
            seed = derive_seed(seed, 1)
            continue
        return Scenario(seed=seed, grid=grid, global_path=path, metadata=config)
    raise GenerationError(
        f"scenario {index}: no viable environment after {_SCENARIO_RETRIES} resamples"
    )


def generate_dataset(config: GeneratorConfig, count: int) -> list[Scenario]:
    """``count`` scenarios with per-index derived seeds."""
    if count < 1:
        raise ValidationError("count must be at least 1", field="count")
    return [generate_scenario(config, i) for i in range(count)]
