"""Core package for collecting particle swarms under global control."""

from .bench import (
    AlgorithmSpec,
    CorpusWorld,
    ExperimentResult,
    RunLimits,
    build_preset_corpus,
    format_experiment_summary,
    load_corpus,
    run_experiment,
    run_single,
    write_corpus,
)
from .corpus import (
    BundledWorld,
    WorldNotFoundError,
    get_bundled_world,
    list_bundled_worlds,
    load_bundled_world,
)
from .dynamics import (
    CommandSequence,
    Configuration,
    Move,
    MoveMode,
    ParticleKind,
    apply_discrete,
    apply_maximal,
    apply_move,
    apply_sequence,
    format_commands,
    is_collected,
    parse_commands,
    resolve_large_step,
)
from .errors import (
    BudgetExceededError,
    CollectBudgetExceededError,
    DisconnectedWorkspaceError,
    GridSwarmError,
    InfeasibleError,
    InvalidConfigurationError,
    SearchBudgetExceededError,
    StickyBudgetExceededError,
    WorldFormatError,
)
from .frames import DEFAULT_PALETTE, HIGH_CONTRAST_PALETTE, FramePalette, emit_frames
from .generators import GeneratorKind, GeneratorSpec, generate_world
from .greedy import (
    GreedyCollection,
    GreedyStep,
    GreedyTrace,
    PairCollection,
    Strategy,
    StrategyKind,
    collect_ab,
    greedy_collect,
    select_pair,
    shortest_control_sequence,
)
from .optimal import (
    OptimalCollection,
    SearchNode,
    SearchStats,
    localizing_sequence,
    optimal_collect,
    oracle_optimal_length,
)
from .reports import ReportStore, RunReport, RunStatus, verify_report
from .rng import SeededRandom
from .settings import GridSwarmSettings
from .sticky import StickyCollection, StickyState, square_fill_instance, sticky_collect, sticky_step
from .workspace import (
    Cell,
    CollectabilityReport,
    ComponentLabels,
    Workspace,
    check_collectable,
    connected_components,
    diameter,
    distance_field,
    shortest_distance,
)
from .worldmap import load_world, parse_world, save_world, serialize_world

__all__ = [
    "AlgorithmSpec",
    "BudgetExceededError",
    "BundledWorld",
    "Cell",
    "CollectBudgetExceededError",
    "CollectabilityReport",
    "CommandSequence",
    "ComponentLabels",
    "Configuration",
    "CorpusWorld",
    "DEFAULT_PALETTE",
    "DisconnectedWorkspaceError",
    "ExperimentResult",
    "FramePalette",
    "GeneratorKind",
    "GeneratorSpec",
    "GreedyCollection",
    "GreedyStep",
    "GreedyTrace",
    "GridSwarmError",
    "GridSwarmSettings",
    "HIGH_CONTRAST_PALETTE",
    "InfeasibleError",
    "InvalidConfigurationError",
    "Move",
    "MoveMode",
    "OptimalCollection",
    "PairCollection",
    "ParticleKind",
    "ReportStore",
    "RunLimits",
    "RunReport",
    "RunStatus",
    "SearchBudgetExceededError",
    "SearchNode",
    "SearchStats",
    "SeededRandom",
    "StickyBudgetExceededError",
    "StickyCollection",
    "StickyState",
    "Strategy",
    "StrategyKind",
    "Workspace",
    "WorldFormatError",
    "WorldNotFoundError",
    "apply_discrete",
    "apply_maximal",
    "apply_move",
    "apply_sequence",
    "build_preset_corpus",
    "check_collectable",
    "collect_ab",
    "connected_components",
    "diameter",
    "distance_field",
    "emit_frames",
    "format_commands",
    "format_experiment_summary",
    "generate_world",
    "get_bundled_world",
    "greedy_collect",
    "is_collected",
    "list_bundled_worlds",
    "load_bundled_world",
    "load_corpus",
    "load_world",
    "localizing_sequence",
    "optimal_collect",
    "oracle_optimal_length",
    "parse_commands",
    "parse_world",
    "resolve_large_step",
    "run_experiment",
    "run_single",
    "save_world",
    "select_pair",
    "serialize_world",
    "shortest_control_sequence",
    "shortest_distance",
    "square_fill_instance",
    "sticky_collect",
    "sticky_step",
    "verify_report",
    "write_corpus",
]
