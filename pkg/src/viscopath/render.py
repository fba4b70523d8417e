"""SVG rendering of scenarios and planned paths.

Conventions: occupied cells black, global path as a dashed blue polyline,
planned local path (when given) as a solid magenta polyline. World y points
up, SVG y points down, so the vertical axis is flipped at a fixed pixel
scale. Output is deterministic byte-for-byte for identical inputs.
"""

from __future__ import annotations

import numpy as np

from .geometry import Path
from .scenarios import Scenario

_SCALE = 60.0  # pixels per meter
_BG = "#ffffff"
_CELL = "#000000"
_GLOBAL_STYLE = 'fill="none" stroke="blue" stroke-width="2" stroke-dasharray="8 5"'
_LOCAL_STYLE = 'fill="none" stroke="magenta" stroke-width="2.5"'


def _px(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return s if s != "-0" else "0"


def _polyline(pts: np.ndarray, origin, world_h: float, style: str) -> str:
    coords = " ".join(
        f"{_px((x - origin[0]) * _SCALE)},{_px((world_h - (y - origin[1])) * _SCALE)}"
        for x, y in pts
    )
    return f'<polyline {style} points="{coords}"/>'


def render_svg(scenario: Scenario, local_path: Path | None = None) -> str:
    """Render a scenario (and optionally a planned path) to an SVG document."""
    grid = scenario.grid
    res = grid.resolution
    world_w = grid.width * res
    world_h = grid.height * res
    w_px = _px(world_w * _SCALE)
    h_px = _px(world_h * _SCALE)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w_px}" height="{h_px}" '
        f'viewBox="0 0 {w_px} {h_px}">',
        f'<rect x="0" y="0" width="{w_px}" height="{h_px}" fill="{_BG}" '
        'stroke="#888888" stroke-width="1"/>',
    ]
    cells = np.argwhere(grid.occupied)
    if cells.shape[0]:
        side = _px(res * _SCALE)
        rects = [
            f'<rect x="{_px(col * res * _SCALE)}" '
            f'y="{_px((world_h - (row + 1) * res) * _SCALE)}" '
            f'width="{side}" height="{side}"/>'
            for row, col in cells
        ]
        parts.append(f'<g fill="{_CELL}">' + "".join(rects) + "</g>")
    parts.append(_polyline(scenario.global_path.pts, grid.origin, world_h, _GLOBAL_STYLE))
    if local_path is not None:
        parts.append(_polyline(local_path.pts, grid.origin, world_h, _LOCAL_STYLE))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
