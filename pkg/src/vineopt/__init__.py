"""Design optimization for planar growing manipulators.

A solution couples one steering-angle row per target with a link-length row
shared by all targets; evaluation completes each row against its target's
approach segment, scores five prioritized objectives, and reduces them to a
single rank via binned lexicographic sorting. A genetic algorithm with
obstacle-aware operators searches that space; the best solution's truncated
length row is the manufacturable design.
"""

from importlib import resources

from .avoid import AngleIntervalSet, allowed_angle_ranges, interval_subtract, sample_uniform
from .fitness import (
    DEFAULT_PENALTY,
    EvaluationResult,
    ObjectiveVector,
    ViolationVector,
    complete_configuration,
    completed_chain,
    component_objectives,
    constraint_violations,
    evaluate,
    kinematic_fitness,
    penalized_fitness,
)
from .ga import GaParams, GaResult, GenerationStats, RankedPopulation, run
from .geometry import (
    CircleObstacle,
    Point2,
    Pose2,
    SegmentGeom,
    circle_circle_intersection,
    forward_kinematics,
    make_pose,
    point_segment_distance,
    rotate_point,
    rotation_to_x,
    segment_circle_intersects,
    wrap_angle,
)
from .model import (
    Bounds,
    CompletionRecord,
    Solution,
    Task,
    chain_of,
    design_of,
    generate_angle_row,
    orientation_segment,
    random_solution,
    validate_task,
)
from .ranking import BinSizes, FitnessRecord, bin_value, rank_partition

__version__ = "0.1.0"

BUNDLED_TASKS = (
    "task1_scatter",
    "task2_brick",
    "task3_wall",
    "task4_maze",
    "task_multi6",
)


def bundled_task_path(name: str):
    """Filesystem path of a bundled task fixture (name without .json)."""
    if name not in BUNDLED_TASKS:
        raise KeyError(f"unknown bundled task {name!r}; have {BUNDLED_TASKS}")
    return resources.files(__name__) / "tasks" / f"{name}.json"
