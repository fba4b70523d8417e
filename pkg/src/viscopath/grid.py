"""Boolean occupancy grid with the spatial queries used by forces and
collision checking.

Obstacles are the centers of occupied cells; everything outside the grid is
free space. A grid is immutable once built and safe to share between
workers.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError
from .geometry import Path


class OccupancyGrid:
    """Row-major boolean grid; cell (0, 0) has its corner at ``origin``."""

    __slots__ = ("resolution", "origin", "width", "height", "occupied", "_centers")

    def __init__(self, resolution, origin, width, height, occupied=None):
        if not resolution > 0.0:
            raise ValidationError("resolution must be positive", field="resolution")
        if width < 1 or height < 1:
            raise ValidationError("grid must be at least 1x1", field="width")
        self.resolution = float(resolution)
        self.origin = (float(origin[0]), float(origin[1]))
        self.width = int(width)
        self.height = int(height)
        if occupied is None:
            occ = np.zeros((self.height, self.width), dtype=bool)
        else:
            occ = np.array(occupied, dtype=bool)
            if occ.shape != (self.height, self.width):
                raise ValidationError(
                    f"occupancy array shape {occ.shape} does not match "
                    f"(height, width)=({self.height}, {self.width})",
                    field="occupied",
                )
        occ.setflags(write=False)
        self.occupied = occ
        self._centers = None

    @classmethod
    def from_cells(cls, resolution, origin, width, height, cells):
        """Build from a list of occupied (row, col) pairs, validating bounds."""
        occ = np.zeros((int(height), int(width)), dtype=bool)
        for r, c in cells:
            if not (0 <= r < height and 0 <= c < width):
                raise ValidationError(
                    f"occupied cell ({r}, {c}) outside {height}x{width} grid",
                    field="occupied",
                )
            occ[r, c] = True
        return cls(resolution, origin, width, height, occ)

    def cell_center(self, row, col):
        return (
            self.origin[0] + (col + 0.5) * self.resolution,
            self.origin[1] + (row + 0.5) * self.resolution,
        )

    def cell_of(self, p):
        """(row, col) of the cell containing world point ``p`` (may be out of bounds)."""
        col = math.floor((p[0] - self.origin[0]) / self.resolution)
        row = math.floor((p[1] - self.origin[1]) / self.resolution)
        return row, col

    def occupied_centers(self) -> np.ndarray:
        """(k, 2) world coordinates of all occupied cell centers, row-major order."""
        if self._centers is None:
            rows, cols = np.nonzero(self.occupied)
            centers = np.empty((rows.size, 2))
            centers[:, 0] = self.origin[0] + (cols + 0.5) * self.resolution
            centers[:, 1] = self.origin[1] + (rows + 0.5) * self.resolution
            centers.setflags(write=False)
            self._centers = centers
        return self._centers

    def world_bounds(self):
        """(xmin, ymin, xmax, ymax) of the grid in world coordinates."""
        return (
            self.origin[0],
            self.origin[1],
            self.origin[0] + self.width * self.resolution,
            self.origin[1] + self.height * self.resolution,
        )

    def __eq__(self, other):
        return (
            isinstance(other, OccupancyGrid)
            and self.resolution == other.resolution
            and self.origin == other.origin
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.occupied, other.occupied)
        )


def occupancy_query(grid: OccupancyGrid, p, r: float, theta: float) -> bool:
    """Whether the cell at distance ``r`` and bearing ``theta`` from ``p`` is occupied."""
    if r < 0.0:
        raise ValidationError("query radius must be non-negative", field="r")
    q = (p[0] + r * math.cos(theta), p[1] + r * math.sin(theta))
    row, col = grid.cell_of(q)
    if 0 <= row < grid.height and 0 <= col < grid.width:
        return bool(grid.occupied[row, col])
    return False


def occupied_cells_within(grid: OccupancyGrid, p, r_max: float):
    """Occupied cell centers within ``r_max`` of ``p`` as (center, distance) pairs.

    Row-major order, matching a full-grid scan.
    """
    if not r_max > 0.0:
        raise ValidationError("r_max must be positive", field="r_max")
    centers = grid.occupied_centers()
    if centers.shape[0] == 0:
        return []
    d = np.hypot(centers[:, 0] - p[0], centers[:, 1] - p[1])
    keep = d <= r_max
    return [((c[0], c[1]), float(di)) for c, di in zip(centers[keep], d[keep])]


def nearest_obstacle_distance(grid: OccupancyGrid, p):
    """Distance from ``p`` to the nearest occupied cell center, or None if the grid is empty."""
    centers = grid.occupied_centers()
    if centers.shape[0] == 0:
        return None
    return float(np.min(np.hypot(centers[:, 0] - p[0], centers[:, 1] - p[1])))


def nearest_obstacle_distances(grid: OccupancyGrid, pts: np.ndarray):
    """Vectorized nearest-center distance for an (n, 2) point array; inf when empty."""
    centers = grid.occupied_centers()
    if centers.shape[0] == 0:
        return np.full(pts.shape[0], np.inf)
    dx = pts[:, 0, None] - centers[None, :, 0]
    dy = pts[:, 1, None] - centers[None, :, 1]
    return np.sqrt(np.min(dx * dx + dy * dy, axis=1))


def evaluation_points(path: Path, eval_spacing: float):
    """Path vertices plus points interpolated at ``eval_spacing`` along each segment.

    Returns (points, is_vertex, seg_index, seg_fraction) arrays in path order.
    """
    if not eval_spacing > 0.0:
        raise ValidationError("eval_spacing must be positive", field="eval_spacing")
    pts = path.pts
    chunks = []
    meta = []
    for j in range(pts.shape[0] - 1):
        a, b = pts[j], pts[j + 1]
        seg_len = math.hypot(b[0] - a[0], b[1] - a[1])
        chunks.append(a[None, :])
        meta.append((True, j, 0.0))
        n_in = int(math.ceil(seg_len / eval_spacing)) - 1
        if n_in > 0:
            t = (np.arange(1, n_in + 1) * eval_spacing) / seg_len
            chunks.append(a[None, :] + t[:, None] * (b - a)[None, :])
            meta.extend((False, j, float(ti)) for ti in t)
    chunks.append(pts[-1][None, :])
    meta.append((True, pts.shape[0] - 2, 1.0))
    points = np.vstack(chunks)
    is_vertex = np.array([m[0] for m in meta])
    seg_index = np.array([m[1] for m in meta])
    seg_fraction = np.array([m[2] for m in meta])
    return points, is_vertex, seg_index, seg_fraction


def collision_check(path: Path, grid: OccupancyGrid, d_c: float, eval_spacing: float):
    """Evaluate the path (vertices plus interpolated points) against the grid.

    A point collides when its nearest occupied cell center is within ``d_c``
    (inclusive). Returns (colliding, unsafe_points) with unsafe points listed
    in path order.
    """
    if d_c < 0.0:
        raise ValidationError("d_c must be non-negative", field="d_c")
    points, _, _, _ = evaluation_points(path, eval_spacing)
    dists = nearest_obstacle_distances(grid, points)
    unsafe = dists <= d_c
    return bool(np.any(unsafe)), [tuple(q) for q in points[unsafe]]
