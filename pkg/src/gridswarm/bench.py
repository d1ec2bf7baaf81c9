"""Experiment runner: corpora of worlds × collectors → CSV rows and JSON reports."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .dynamics import Configuration, MoveMode, ParticleKind, format_commands
from .errors import BudgetExceededError, GridSwarmError, InfeasibleError
from .generators import GeneratorKind, GeneratorSpec, generate_world
from .greedy import DEFAULT_BOUND_FACTOR, BENCH_STRATEGIES, Strategy, StrategyKind, greedy_collect
from .optimal import DEFAULT_NODE_BUDGET, optimal_collect
from .reports import (
    AlgorithmName,
    ReportStore,
    RunReport,
    RunStatus,
    reports_by_world,
    verify_report,
    write_csv,
)
from .rng import SeededRandom
from .sticky import DEFAULT_STICKY_FACTOR, square_fill_instance, sticky_collect
from .testing_toolkit import step_through
from .workspace import Cell, Workspace
from .worldmap import load_world, save_world

logger = logging.getLogger(__name__)

# Mean greedy/optimal move ratio expected over the 17-world comparison.
REFERENCE_MEAN_RATIO = 1.95
# Expected search size on a fully seeded 30-cell world.
REFERENCE_NODES_30_CELLS = 1_600_000

PRESETS: tuple[str, ...] = (
    "node-growth",
    "optimal-vs-greedy",
    "vascular",
    "sticky-bound",
    "sticky-scaling",
)


@dataclass(frozen=True)
class AlgorithmSpec:
    """One collector configuration, e.g. ``greedy:first`` or ``optimal:maximal``."""

    algorithm: AlgorithmName
    strategy: Strategy | None = None
    mode: MoveMode = MoveMode.DISCRETE

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", AlgorithmName(self.algorithm))
        object.__setattr__(self, "mode", MoveMode(self.mode))
        if self.algorithm is AlgorithmName.GREEDY:
            if self.strategy is None:
                raise ValueError("greedy runs need a strategy")
            if self.mode is not MoveMode.DISCRETE:
                raise ValueError("greedy collection uses discrete moves only")
        elif self.strategy is not None:
            raise ValueError(f"{self.algorithm.value} runs take no strategy")
        if self.algorithm is AlgorithmName.STICKY and self.mode is not MoveMode.DISCRETE:
            raise ValueError("sticky delivery uses discrete moves only")

    @classmethod
    def parse(cls, token: str) -> "AlgorithmSpec":
        name, _, rest = token.strip().partition(":")
        try:
            algorithm = AlgorithmName(name)
        except ValueError as exc:
            raise ValueError(f"unknown algorithm {token!r}") from exc
        if algorithm is AlgorithmName.GREEDY:
            return cls(algorithm, strategy=Strategy.parse(rest or "first"))
        if rest:
            return cls(algorithm, mode=MoveMode(rest))
        return cls(algorithm)

    @property
    def token(self) -> str:
        if self.strategy is not None:
            return f"{self.algorithm.value}:{self.strategy.token}"
        if self.mode is not MoveMode.DISCRETE:
            return f"{self.algorithm.value}:{self.mode.value}"
        return self.algorithm.value

    @property
    def kind(self) -> ParticleKind:
        return ParticleKind.LARGE if self.algorithm is AlgorithmName.STICKY else ParticleKind.SMALL


DEFAULT_ALGORITHMS: tuple[AlgorithmSpec, ...] = (
    AlgorithmSpec(AlgorithmName.OPTIMAL),
    *(AlgorithmSpec(AlgorithmName.GREEDY, strategy=strategy) for strategy in BENCH_STRATEGIES),
)


@dataclass(frozen=True)
class CorpusWorld:
    """A named world with its initial particle cells."""

    world_id: str
    workspace: Workspace
    configuration: Configuration

    def configuration_for(self, kind: ParticleKind) -> Configuration:
        return Configuration(kind, self.configuration.positions)


@dataclass(frozen=True)
class RunLimits:
    node_budget: int = DEFAULT_NODE_BUDGET
    bound_factor: float = DEFAULT_BOUND_FACTOR
    sticky_factor: float = DEFAULT_STICKY_FACTOR
    record_timing: bool = False


@dataclass(frozen=True)
class ExperimentResult:
    reports: tuple[RunReport, ...]
    ratios: tuple[float | None, ...]
    csv_path: Path

    def mean_ratio(self, strategy: str = "first") -> float | None:
        """Mean greedy/optimal ratio for one strategy token over the worlds where both ran."""

        values = [
            ratio
            for report, ratio in zip(self.reports, self.ratios)
            if ratio is not None and report.strategy == strategy
        ]
        if not values:
            return None
        return sum(values) / len(values)


def load_corpus(directory: Path) -> list[CorpusWorld]:
    """Read every ``*.map`` file of ``directory`` in file-name order."""

    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory {directory} does not exist")
    worlds = []
    for path in sorted(directory.glob("*.map")):
        workspace, configuration = load_world(path)
        worlds.append(CorpusWorld(path.stem, workspace, configuration))
    return worlds


def write_corpus(worlds: Iterable[CorpusWorld], directory: Path) -> list[Path]:
    directory = Path(directory)
    return [
        save_world(directory / f"{world.world_id}.map", world.workspace, world.configuration)
        for world in worlds
    ]


def run_single(world: CorpusWorld, spec: AlgorithmSpec, limits: RunLimits = RunLimits()) -> RunReport:
    """Run one collector on one world; failures become the report's status."""

    configuration = world.configuration_for(spec.kind)
    base: dict[str, Any] = {
        "world_id": world.world_id,
        "algorithm": spec.algorithm,
        "strategy": None if spec.strategy is None else spec.strategy.token,
        "mode": spec.mode,
        "kind": spec.kind,
        "free_cells": world.workspace.free_count,
        "particles": len(configuration),
        "seed": None if spec.strategy is None else spec.strategy.seed,
    }
    started = time.perf_counter()
    try:
        if spec.algorithm is AlgorithmName.OPTIMAL:
            found = optimal_collect(
                world.workspace, configuration, spec.mode, node_budget=limits.node_budget
            )
            commands = found.commands
            nodes: int | None = found.stats.nodes_expanded
            trace = [
                len(step.configuration)
                for step in step_through(world.workspace, configuration, commands, spec.mode)[1:]
            ]
        elif spec.algorithm is AlgorithmName.GREEDY:
            assert spec.strategy is not None
            collected = greedy_collect(
                world.workspace, configuration, spec.strategy, bound_factor=limits.bound_factor
            )
            commands, nodes, trace = collected.commands, None, list(collected.distinct_position_trace)
        else:
            delivered = sticky_collect(
                world.workspace, configuration, budget_factor=limits.sticky_factor
            )
            commands, nodes, trace = delivered.commands, None, list(delivered.active_trace)
    except InfeasibleError as exc:
        return RunReport(**base, status=RunStatus.INFEASIBLE, message=str(exc))
    except BudgetExceededError as exc:
        return RunReport(**base, status=RunStatus.BUDGET_EXCEEDED, message=str(exc))
    except (GridSwarmError, ValueError) as exc:
        return RunReport(**base, status=RunStatus.ERROR, message=str(exc))
    elapsed = (time.perf_counter() - started) * 1000.0

    report = RunReport(
        **base,
        commands=format_commands(commands),
        move_count=len(commands),
        nodes_expanded=nodes,
        distinct_position_trace=trace,
        wall_time_ms=elapsed if limits.record_timing else None,
    )
    verify_report(report, world.workspace, configuration)
    return report


def _run_job(job: tuple[CorpusWorld, AlgorithmSpec, RunLimits]) -> RunReport:
    return run_single(*job)


def compute_ratios(reports: Sequence[RunReport]) -> tuple[float | None, ...]:
    """Greedy move count over optimal move count, per greedy row with a solved optimum."""

    optimum: dict[str, int] = {}
    for report in reports:
        if report.algorithm is AlgorithmName.OPTIMAL and report.status is RunStatus.OK:
            optimum.setdefault(report.world_id, report.move_count)
    ratios: list[float | None] = []
    for report in reports:
        best = optimum.get(report.world_id)
        if (
            report.algorithm is AlgorithmName.GREEDY
            and report.status is RunStatus.OK
            and best is not None
            and best > 0
        ):
            ratios.append(report.move_count / best)
        else:
            ratios.append(None)
    return tuple(ratios)


def run_experiment(
    corpus: Sequence[CorpusWorld],
    algorithms: Sequence[AlgorithmSpec],
    out: Path,
    *,
    reports_dir: Path | None = None,
    limits: RunLimits = RunLimits(),
    workers: int = 1,
) -> ExperimentResult:
    """Run every algorithm on every world and write the CSV (and JSON reports).

    Rows follow corpus order, then algorithm order, whatever the worker count.
    """

    if workers < 1:
        raise ValueError("workers must be at least 1")
    jobs = [(world, spec, limits) for world in corpus for spec in algorithms]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(_run_job, jobs))
    else:
        reports = [_run_job(job) for job in jobs]

    ratios = compute_ratios(reports)
    csv_path = write_csv(Path(out), reports, ratios)
    if reports_dir is not None:
        store = ReportStore(Path(reports_dir))
        for report in reports:
            store.save(report)
    failures = sum(report.status is not RunStatus.OK for report in reports)
    logger.info(
        "experiment finished: %d runs over %d worlds, %d not ok",
        len(reports),
        len(corpus),
        failures,
    )
    _log_soft_expectations(reports)
    return ExperimentResult(reports=tuple(reports), ratios=ratios, csv_path=csv_path)


def best_strategy_by_world(reports: Iterable[RunReport]) -> dict[str, str]:
    """Greedy strategy with the fewest moves on each world (first listed wins ties)."""

    winners: dict[str, str] = {}
    for world_id, rows in reports_by_world(reports).items():
        greedy = [
            row
            for row in rows
            if row.algorithm is AlgorithmName.GREEDY and row.status is RunStatus.OK and row.strategy
        ]
        if greedy:
            winner = min(greedy, key=lambda row: row.move_count)
            winners[world_id] = str(winner.strategy)
    return winners


def _log_soft_expectations(reports: Sequence[RunReport]) -> None:
    first = Strategy(StrategyKind.FIRST).token
    for world_id, winner in best_strategy_by_world(reports).items():
        rows = [row for row in reports if row.world_id == world_id and row.strategy == first]
        if rows and winner != first:
            logger.warning(
                "%s: connect-to-first was not the best strategy (best: %s)", world_id, winner
            )


def format_experiment_summary(result: ExperimentResult) -> str:
    """Human-readable digest of an experiment's CSV."""

    lines = ["Experiment Summary", "=================="]
    grouped: dict[str, list[tuple[RunReport, float | None]]] = {}
    for report, ratio in zip(result.reports, result.ratios):
        grouped.setdefault(report.world_id, []).append((report, ratio))
    winners = best_strategy_by_world(result.reports)
    for world_id, rows in grouped.items():
        parts = []
        for row, ratio in rows:
            label = row.algorithm.value if row.strategy is None else f"{row.algorithm.value}:{row.strategy}"
            if row.status is not RunStatus.OK:
                parts.append(f"{label}={row.status.value}")
                continue
            text = f"{label}={row.move_count}"
            if ratio is not None:
                text += f" (x{ratio:.2f})"
            if row.nodes_expanded is not None:
                text += f" [{row.nodes_expanded} nodes]"
            if row.algorithm is AlgorithmName.STICKY and row.particles:
                text += f" [{row.move_count / row.particles ** 1.5:.3f} per m^1.5"
                text += f", {row.move_count / row.free_cells ** 3:.5f} per n^3]"
            parts.append(text)
        best = winners.get(world_id)
        suffix = f" best={best}" if best else ""
        lines.append(f"{world_id}: " + ", ".join(parts) + suffix)

    tokens = sorted({report.strategy for report in result.reports if report.strategy})
    for token in tokens:
        mean = result.mean_ratio(token)
        if mean is not None:
            lines.append(
                f"Mean greedy:{token}/optimal ratio: {mean:.2f} (reference {REFERENCE_MEAN_RATIO})"
            )

    searched = [
        report
        for report in result.reports
        if report.algorithm is AlgorithmName.OPTIMAL and report.nodes_expanded
    ]
    if len(searched) >= 2:
        smallest = min(searched, key=lambda row: (row.free_cells, row.nodes_expanded or 0))
        largest = max(searched, key=lambda row: (row.free_cells, row.nodes_expanded or 0))
        assert smallest.nodes_expanded and largest.nodes_expanded
        growth = largest.nodes_expanded / smallest.nodes_expanded
        lines.append(
            f"Node growth {smallest.free_cells}->{largest.free_cells} cells: x{growth:.1f} "
            f"({smallest.nodes_expanded} -> {largest.nodes_expanded} nodes; "
            f"reference {REFERENCE_NODES_30_CELLS} nodes at 30 cells)"
        )
    return "\n".join(lines)


def _polyomino_side(budget: int) -> int:
    return max(3, math.ceil(math.sqrt(budget)) + 2)


def _node_growth() -> list[CorpusWorld]:
    worlds = []
    for width, height in ((3, 2), (4, 3), (5, 4), (6, 5)):
        workspace = Workspace.rectangle(width, height)
        corners = Configuration.small([Cell(0, 0), Cell(width - 1, height - 1)])
        worlds.append(CorpusWorld(f"node-growth-{width * height:02d}", workspace, corners))
    return worlds


def _optimal_vs_greedy(seed: int) -> list[CorpusWorld]:
    rng = SeededRandom(seed)
    worlds = []
    for index in range(17):
        budget = 5 + math.floor(index * 25 / 16 + 0.5)
        side = _polyomino_side(budget)
        spec = GeneratorSpec(
            GeneratorKind.RANDOM_POLYOMINO, side, side, budget=budget, seed=rng.next_u64()
        )
        workspace, configuration = generate_world(spec)
        worlds.append(CorpusWorld(f"ovg-{index:02d}-{budget:02d}", workspace, configuration))
    return worlds


_VASCULAR_DEPTHS = {500: 5, 1000: 6, 2000: 7, 4000: 8, 8000: 9}


def _vascular(seed: int) -> list[CorpusWorld]:
    rng = SeededRandom(seed)
    worlds = []
    for budget, depth in _VASCULAR_DEPTHS.items():
        side = math.ceil(math.sqrt(budget * 2.5))
        spec = GeneratorSpec(
            GeneratorKind.VASCULAR_TREE,
            side,
            side,
            budget=budget,
            seed=rng.next_u64(),
            depth=depth,
        )
        workspace, configuration = generate_world(spec)
        worlds.append(CorpusWorld(f"vascular-{budget:04d}", workspace, configuration))
    return worlds


def _sticky_bound(seed: int) -> list[CorpusWorld]:
    rng = SeededRandom(seed)
    worlds = []
    for index in range(50):
        width, height = 4 + rng.below(9), 4 + rng.below(9)
        area = width * height
        budget = area // 2 + rng.below(area - area // 2 + 1)
        targets = 1 + rng.below(4)
        particles = 1 + rng.below(min(20, budget - targets))
        spec = GeneratorSpec(
            GeneratorKind.RANDOM_POLYOMINO,
            width,
            height,
            budget=budget,
            seed=rng.next_u64(),
            particles=particles,
            targets=targets,
            particle_kind=ParticleKind.LARGE,
        )
        workspace, configuration = generate_world(spec)
        worlds.append(CorpusWorld(f"sticky-{index:02d}", workspace, configuration))
    return worlds


def _sticky_scaling() -> list[CorpusWorld]:
    worlds = []
    for k in (3, 5, 7, 9):
        workspace, configuration = square_fill_instance(k)
        worlds.append(CorpusWorld(f"square-fill-{k * k:02d}", workspace, configuration))
    return worlds


def build_preset_corpus(name: str, seed: int = 0) -> list[CorpusWorld]:
    """Return the worlds of a named experiment preset (see :data:`PRESETS`)."""

    if name == "node-growth":
        return _node_growth()
    if name == "optimal-vs-greedy":
        return _optimal_vs_greedy(seed)
    if name == "vascular":
        return _vascular(seed)
    if name == "sticky-bound":
        return _sticky_bound(seed)
    if name == "sticky-scaling":
        return _sticky_scaling()
    raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")


__all__ = [
    "AlgorithmSpec",
    "CorpusWorld",
    "DEFAULT_ALGORITHMS",
    "ExperimentResult",
    "PRESETS",
    "REFERENCE_MEAN_RATIO",
    "REFERENCE_NODES_30_CELLS",
    "RunLimits",
    "best_strategy_by_world",
    "build_preset_corpus",
    "compute_ratios",
    "format_experiment_summary",
    "load_corpus",
    "run_experiment",
    "run_single",
    "write_corpus",
]
