"""Local path planning by viscoelastic relaxation.

A global path is modeled as a chain of point masses joined by springs and
dampers, tethered to anchor points, and pushed away from occupied grid cells
by virtual repulsive forces. Relaxing this chain reshapes the path around
obstacles; an outer loop re-plans with densified points and decayed forces
until the result clears a safety margin.
"""

from ._kernels import BACKEND
from .dynamics import (
    PlanDiagnostics,
    SimConfig,
    SimState,
    initial_state,
    is_steady,
    path_stagnated,
    perturb_path,
    rvp_plan,
    step_dynamics,
)
from .errors import (
    GenerationError,
    NumericError,
    ParseError,
    ValidationError,
    ViscopathError,
)
from .fileio import (
    ParamsBundle,
    default_params,
    load_params,
    load_report,
    load_result,
    load_scenario,
    save_params,
    save_report,
    save_result,
    save_scenario,
)
from .forces import (
    REST_INITIAL,
    REST_ZERO,
    AnchorSet,
    ObstacleForceParams,
    SpringParams,
    compute_anchor_points,
    default_obstacle_params,
    derive_constants,
    obstacle_force_magnitude,
    path_force,
    rest_lengths_for,
    spring_force,
    total_obstacle_force,
)
from .geometry import (
    Path,
    arc_length_profile,
    cross_track_error,
    curvature_profile,
    path_deviation,
    resample_spline,
)
from .grid import (
    OccupancyGrid,
    collision_check,
    evaluation_points,
    nearest_obstacle_distance,
    occupancy_query,
    occupied_cells_within,
)
from .harness import (
    REFERENCE_SUCCESS_RATE,
    EvalReport,
    ScenarioRecord,
    evaluate_scenario,
    run_batch,
)
from .iterative import (
    IterativeConfig,
    IterativeResult,
    decay_schedule,
    densify_path,
    iterative_rvp,
)
from .render import render_svg
from .rng import Rng, derive_seed
from .scenarios import (
    GeneratorConfig,
    Scenario,
    generate_dataset,
    generate_environment,
    generate_global_path,
    generate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "REFERENCE_SUCCESS_RATE",
    "REST_INITIAL",
    "REST_ZERO",
    "AnchorSet",
    "EvalReport",
    "GenerationError",
    "GeneratorConfig",
    "IterativeConfig",
    "IterativeResult",
    "NumericError",
    "ObstacleForceParams",
    "OccupancyGrid",
    "ParamsBundle",
    "ParseError",
    "Path",
    "PlanDiagnostics",
    "Rng",
    "Scenario",
    "ScenarioRecord",
    "SimConfig",
    "SimState",
    "SpringParams",
    "ValidationError",
    "ViscopathError",
    "arc_length_profile",
    "collision_check",
    "compute_anchor_points",
    "cross_track_error",
    "curvature_profile",
    "decay_schedule",
    "default_obstacle_params",
    "default_params",
    "densify_path",
    "derive_constants",
    "derive_seed",
    "evaluate_scenario",
    "evaluation_points",
    "generate_dataset",
    "generate_environment",
    "generate_global_path",
    "generate_scenario",
    "initial_state",
    "is_steady",
    "iterative_rvp",
    "load_params",
    "load_report",
    "load_result",
    "load_scenario",
    "nearest_obstacle_distance",
    "obstacle_force_magnitude",
    "occupancy_query",
    "occupied_cells_within",
    "path_deviation",
    "path_force",
    "path_stagnated",
    "perturb_path",
    "render_svg",
    "resample_spline",
    "rest_lengths_for",
    "rvp_plan",
    "run_batch",
    "save_params",
    "save_report",
    "save_result",
    "save_scenario",
    "spring_force",
    "step_dynamics",
    "total_obstacle_force",
    "__version__",
]
