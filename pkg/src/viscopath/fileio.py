"""File formats: scenarios, parameter sets, planning results, and batch
reports, all as JSON documents with a ``format_version`` field.

Documents are emitted by a small fixed serializer (stable key order, floats
as decimals with 17 significant digits) so that identical inputs always
produce identical bytes; stdlib json handles parsing. All writes go through
a temp-file-and-rename so interrupted runs never leave truncated artifacts.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .dynamics import PlanDiagnostics, SimConfig
from .errors import ParseError, ValidationError
from .forces import ObstacleForceParams, SpringParams
from .geometry import Path
from .grid import OccupancyGrid
from .harness import REFERENCE_SUCCESS_RATE, EvalReport
from .iterative import IterativeConfig, IterativeResult
from .scenarios import GeneratorConfig, Scenario

FORMAT_VERSION = 1

_PATH_KIND_ORDER = ("straight", "arc", "s_curve")


# ---------------------------------------------------------------- emitting

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValidationError("non-finite number cannot be serialized", field="value")
    s = format(float(x), ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _emit(obj, out: list, indent: int):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.append(f'{pad}  {json.dumps(key)}: ')
            _emit(val, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if not obj:
            out.append("[]")
        elif flat:
            out.append("[" + ", ".join(_scalar(v) for v in obj) + "]")
        else:
            out.append("[\n")
            for i, val in enumerate(obj):
                out.append(pad + "  ")
                _emit(val, out, indent + 1)
                out.append(",\n" if i < len(obj) - 1 else "\n")
            out.append(pad + "]")
    else:
        out.append(_scalar(obj))


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    raise ValidationError(f"cannot serialize {type(v).__name__}", field="value")


def dumps(obj: dict) -> str:
    out: list[str] = []
    _emit(obj, out, 0)
    out.append("\n")
    return "".join(out)


def atomic_write_text(path, text: str):
    """Write via a sibling temp file and rename, so readers never see a
    partial document."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- parsing

def _load_document(src, kind: str) -> dict:
    if isinstance(src, (bytes, bytearray)):
        text = src.decode("utf-8")
    else:
        with open(src, encoding="utf-8") as f:
            text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", context=f"line {e.lineno} column {e.colno}")
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", context="$")
    got = doc.get("kind")
    if got != kind:
        raise ParseError(f"expected a {kind} document, found {got!r}", context="$.kind")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}", context="$.format_version")
    return doc


def _get(doc: dict, key: str, types, where: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}", context=where)
    val = doc[key]
    if types is float and isinstance(val, int) and not isinstance(val, bool):
        return float(val)
    if not isinstance(val, types) or isinstance(val, bool) and types is not bool:
        raise ParseError(f"field {key!r} has the wrong type", context=where)
    return val


def _get_points(doc: dict, key: str, where: str) -> np.ndarray:
    raw = _get(doc, key, list, where)
    pts = []
    for i, entry in enumerate(raw):
        if (not isinstance(entry, list) or len(entry) != 2
                or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in entry)):
            raise ParseError("points must be [x, y] number pairs", context=f"{where}[{i}]")
        pts.append((float(entry[0]), float(entry[1])))
    return np.array(pts, dtype=float).reshape(len(pts), 2)


# ---------------------------------------------------------------- scenarios

def _grid_to_obj(grid: OccupancyGrid) -> dict:
    return {
        "resolution": grid.resolution,
        "origin": [grid.origin[0], grid.origin[1]],
        "width": grid.width,
        "height": grid.height,
        "occupied": [[int(r), int(c)] for r, c in np.argwhere(grid.occupied)],
    }


def _grid_from_obj(obj, where: str) -> OccupancyGrid:
    if not isinstance(obj, dict):
        raise ParseError("grid must be an object", context=where)
    origin = _get(obj, "origin", list, where)
    if len(origin) != 2:
        raise ParseError("origin must be [x, y]", context=f"{where}.origin")
    cells = _get(obj, "occupied", list, where)
    pairs = []
    for i, entry in enumerate(cells):
        if (not isinstance(entry, list) or len(entry) != 2
                or any(isinstance(c, bool) or not isinstance(c, int) for c in entry)):
            raise ParseError("occupied entries must be [row, col] integer pairs",
                             context=f"{where}.occupied[{i}]")
        pairs.append((entry[0], entry[1]))
    return OccupancyGrid.from_cells(
        resolution=_get(obj, "resolution", float, where),
        origin=(float(origin[0]), float(origin[1])),
        width=_get(obj, "width", int, where),
        height=_get(obj, "height", int, where),
        cells=pairs,
    )


def _generator_to_obj(config: GeneratorConfig) -> dict:
    weights = {k: config.path_kind_weights[k]
               for k in _PATH_KIND_ORDER if k in config.path_kind_weights}
    return {
        "grid_width": config.grid_width,
        "grid_height": config.grid_height,
        "resolution": config.resolution,
        "object_count_range": list(config.object_count_range),
        "object_kinds": list(config.object_kinds),
        "object_size_range": list(config.object_size_range),
        "path_kind_weights": weights,
        "path_point_count": config.path_point_count,
        "clearance_from_endpoints": config.clearance_from_endpoints,
        "seed": config.seed,
    }


def _generator_from_obj(obj, where: str) -> GeneratorConfig:
    if not isinstance(obj, dict):
        raise ParseError("generator config must be an object", context=where)
    count_range = _get(obj, "object_count_range", list, where)
    size_range = _get(obj, "object_size_range", list, where)
    kinds = _get(obj, "object_kinds", list, where)
    weights = _get(obj, "path_kind_weights", dict, where)
    return GeneratorConfig(
        grid_width=_get(obj, "grid_width", int, where),
        grid_height=_get(obj, "grid_height", int, where),
        resolution=_get(obj, "resolution", float, where),
        object_count_range=tuple(count_range),
        object_kinds=tuple(kinds),
        object_size_range=tuple(float(s) for s in size_range),
        path_kind_weights={str(k): float(v) for k, v in weights.items()},
        path_point_count=_get(obj, "path_point_count", int, where),
        clearance_from_endpoints=_get(obj, "clearance_from_endpoints", float, where),
        seed=_get(obj, "seed", int, where),
    )


def save_scenario(scenario: Scenario, dest=None):
    """Serialize a scenario; write to ``dest`` if given, else return the text."""
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "scenario",
        "seed": scenario.seed,
        "grid": _grid_to_obj(scenario.grid),
        "global_path": [[x, y] for x, y in scenario.global_path.pts],
        "metadata": _generator_to_obj(scenario.metadata),
    }
    text = dumps(doc)
    if dest is None:
        return text
    atomic_write_text(dest, text)
    return None


def load_scenario(src) -> Scenario:
    """Parse a scenario from a file path or raw bytes."""
    doc = _load_document(src, "scenario")
    return Scenario(
        seed=_get(doc, "seed", int, "$"),
        grid=_grid_from_obj(doc.get("grid"), "$.grid"),
        global_path=Path(_get_points(doc, "global_path", "$.global_path")),
        metadata=_generator_from_obj(doc.get("metadata"), "$.metadata"),
    )


# ---------------------------------------------------------------- params

@dataclass(frozen=True)
class ParamsBundle:
    """Every tunable in one place; the params file mirrors this."""

    spring: SpringParams
    obstacle: ObstacleForceParams
    sim: SimConfig
    iterative: IterativeConfig
    generator: GeneratorConfig


def default_params() -> ParamsBundle:
    return ParamsBundle(
        spring=SpringParams(),
        obstacle=ObstacleForceParams(),
        sim=SimConfig(),
        iterative=IterativeConfig(),
        generator=GeneratorConfig(),
    )


def _params_to_obj(params: ParamsBundle) -> dict:
    sp, op, sc, ic = params.spring, params.obstacle, params.sim, params.iterative
    return {
        "spring": {"m": sp.m, "omega": sp.omega, "zeta": sp.zeta,
                   "c_scale": sp.c_scale, "rest_mode": sp.rest_mode},
        "obstacle": {"a1": op.a1, "a2": op.a2, "a3": op.a3, "n_exp": op.n_exp,
                     "r_max": op.r_max, "r_floor": op.r_floor},
        "sim": {"dt": sc.dt, "max_steps": sc.max_steps, "p_min": sc.p_min,
                "a_t": sc.a_t, "v_stag": sc.v_stag, "stag_window": sc.stag_window,
                "perturb_mag": sc.perturb_mag, "rng_seed": sc.rng_seed},
        "iterative": {"lambda_decay": ic.lambda_decay, "d_c": ic.d_c,
                      "max_iters": ic.max_iters, "eval_spacing": ic.eval_spacing},
        "generator": _generator_to_obj(params.generator),
    }


def save_params(params: ParamsBundle, dest=None):
    doc = {"format_version": FORMAT_VERSION, "kind": "params"}
    doc.update(_params_to_obj(params))
    text = dumps(doc)
    if dest is None:
        return text
    atomic_write_text(dest, text)
    return None


def load_params(src) -> ParamsBundle:
    doc = _load_document(src, "params")
    sp = _get(doc, "spring", dict, "$")
    op = _get(doc, "obstacle", dict, "$")
    sc = _get(doc, "sim", dict, "$")
    ic = _get(doc, "iterative", dict, "$")
    return ParamsBundle(
        spring=SpringParams(
            m=_get(sp, "m", float, "$.spring"),
            omega=_get(sp, "omega", float, "$.spring"),
            zeta=_get(sp, "zeta", float, "$.spring"),
            c_scale=_get(sp, "c_scale", float, "$.spring"),
            rest_mode=_get(sp, "rest_mode", str, "$.spring"),
        ),
        obstacle=ObstacleForceParams(
            a1=_get(op, "a1", float, "$.obstacle"),
            a2=_get(op, "a2", float, "$.obstacle"),
            a3=_get(op, "a3", float, "$.obstacle"),
            n_exp=_get(op, "n_exp", float, "$.obstacle"),
            r_max=_get(op, "r_max", float, "$.obstacle"),
            r_floor=_get(op, "r_floor", float, "$.obstacle"),
        ),
        sim=SimConfig(
            dt=_get(sc, "dt", float, "$.sim"),
            max_steps=_get(sc, "max_steps", int, "$.sim"),
            p_min=_get(sc, "p_min", float, "$.sim"),
            a_t=_get(sc, "a_t", float, "$.sim"),
            v_stag=_get(sc, "v_stag", float, "$.sim"),
            stag_window=_get(sc, "stag_window", int, "$.sim"),
            perturb_mag=_get(sc, "perturb_mag", float, "$.sim"),
            rng_seed=_get(sc, "rng_seed", int, "$.sim"),
        ),
        iterative=IterativeConfig(
            lambda_decay=_get(ic, "lambda_decay", float, "$.iterative"),
            d_c=_get(ic, "d_c", float, "$.iterative"),
            max_iters=_get(ic, "max_iters", int, "$.iterative"),
            eval_spacing=_get(ic, "eval_spacing", float, "$.iterative"),
        ),
        generator=_generator_from_obj(doc.get("generator"), "$.generator"),
    )


# ---------------------------------------------------------------- results

def save_result(result: IterativeResult, path_deviation: float, dest=None):
    """Serialize a planning result together with its deviation measure."""
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "result",
        "local_path": [[x, y] for x, y in result.path.pts],
        "safe": bool(result.safe),
        "iterations_used": result.iterations_used,
        "path_deviation": path_deviation,
        "diagnostics": [
            {"steps_taken": d.steps_taken, "steady_exit": d.steady_exit,
             "perturbations": d.perturbations, "final_max_accel": d.final_max_accel}
            for d in result.per_iteration
        ],
    }
    text = dumps(doc)
    if dest is None:
        return text
    atomic_write_text(dest, text)
    return None


def load_result(src) -> tuple[IterativeResult, float]:
    doc = _load_document(src, "result")
    diags = []
    raw = _get(doc, "diagnostics", list, "$")
    for i, entry in enumerate(raw):
        where = f"$.diagnostics[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("diagnostics entries must be objects", context=where)
        diags.append(PlanDiagnostics(
            steps_taken=_get(entry, "steps_taken", int, where),
            steady_exit=_get(entry, "steady_exit", bool, where),
            perturbations=_get(entry, "perturbations", int, where),
            final_max_accel=_get(entry, "final_max_accel", float, where),
        ))
    result = IterativeResult(
        path=Path(_get_points(doc, "local_path", "$.local_path")),
        safe=_get(doc, "safe", bool, "$"),
        iterations_used=_get(doc, "iterations_used", int, "$"),
        per_iteration=tuple(diags),
    )
    return result, _get(doc, "path_deviation", float, "$")


# ---------------------------------------------------------------- reports

def save_report(report: EvalReport, dest=None):
    """Serialize a batch report. Timing statistics stay out of the file (the
    report must be byte-identical across runs); callers print them instead."""
    params = report.params_echo
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "report",
        "total": report.total,
        "successes": report.successes,
        "success_rate": report.success_rate,
        "reference_success_rate": REFERENCE_SUCCESS_RATE,
        "deviation_stats": report.deviation_stats,
        "params": _params_to_obj(ParamsBundle(
            spring=params["spring"], obstacle=params["obstacle"],
            sim=params["sim"], iterative=params["iterative"],
            generator=params.get("generator") or GeneratorConfig(),
        )) if params else {},
    }
    text = dumps(doc)
    if dest is None:
        return text
    atomic_write_text(dest, text)
    return None


def load_report(src) -> dict:
    """Reports are consumed as plain dictionaries."""
    return _load_document(src, "report")
