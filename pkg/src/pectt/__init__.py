"""Post-enrolment course timetabling: simulated-annealing solver, independent
validator and seeded benchmark harness."""

from .annealer import (
    PRESETS,
    FamilyPreset,
    RunResult,
    SAParams,
    SolverVariant,
    accept,
    run,
    samples_per_level,
    temperature_levels,
)
from .evaluation import (
    CostBreakdown,
    EvalPhase,
    delta_cost,
    full_breakdown,
    reported_score,
    scalar_cost,
)
from .instance_io import (
    InstanceFormat,
    ParseError,
    load_instance,
    parse_instance,
    parse_solution,
    write_instance,
    write_solution,
)
from .model import (
    DUMMY_PAIR,
    DUMMY_ROOM,
    DUMMY_TIMESLOT,
    Formulation,
    Instance,
    day_of,
    enrolment_count,
)
from .preprocess import PreprocessedInstance, preprocess
from .search import (
    MoveEvent,
    SearchStall,
    SearchState,
    SplitMix,
    SwapEvents,
    admissible_me,
    admissible_se,
    apply_move,
    init_i0,
    init_i1,
    postprocess_all_rooms,
    random_move,
)
from .validator import ValidationError, Violation, ViolationReport, validate, validate_file

__version__ = "0.1.0"

__all__ = [
    "PRESETS",
    "FamilyPreset",
    "RunResult",
    "SAParams",
    "SolverVariant",
    "accept",
    "run",
    "samples_per_level",
    "temperature_levels",
    "CostBreakdown",
    "EvalPhase",
    "delta_cost",
    "full_breakdown",
    "reported_score",
    "scalar_cost",
    "InstanceFormat",
    "ParseError",
    "load_instance",
    "parse_instance",
    "parse_solution",
    "write_instance",
    "write_solution",
    "DUMMY_PAIR",
    "DUMMY_ROOM",
    "DUMMY_TIMESLOT",
    "Formulation",
    "Instance",
    "day_of",
    "enrolment_count",
    "PreprocessedInstance",
    "preprocess",
    "MoveEvent",
    "SearchStall",
    "SearchState",
    "SplitMix",
    "SwapEvents",
    "admissible_me",
    "admissible_se",
    "apply_move",
    "init_i0",
    "init_i1",
    "postprocess_all_rooms",
    "random_move",
    "ValidationError",
    "Violation",
    "ViolationReport",
    "validate",
    "validate_file",
]
