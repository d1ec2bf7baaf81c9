"""Breadth-first search for a shortest collecting command sequence.

The search tree is kept as three parallel lists (configuration, move,
parent) indexed by node number. Children are generated in the order u, d, r,
l and appended only when their configuration has not been seen before, so the
first collected node taken from the queue is a minimum-depth one and the
result is the first optimum in that expansion order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .dynamics import (
    SEARCH_ORDER,
    CommandSequence,
    Configuration,
    Move,
    MoveMode,
    ParticleKind,
    step_function,
)
from .errors import InfeasibleError, SearchBudgetExceededError
from .workspace import Cell, Workspace

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class SearchNode:
    """One entry of the search list; the root is its own parent with no move."""

    config: frozenset[Cell]
    move: Move | None
    parent: int
    depth: int


@dataclass(frozen=True)
class SearchStats:
    """Counters of one optimal search run."""

    nodes_expanded: int
    frontier_peak: int
    duplicates_pruned: int
    nodes_generated: int


@dataclass(frozen=True)
class OptimalCollection:
    """Result of :func:`optimal_collect`.

    ``tree`` holds every admitted node when the caller asked to keep it.
    """

    commands: CommandSequence
    stats: SearchStats
    configuration: Configuration
    tree: tuple[SearchNode, ...] | None = None

    @property
    def move_count(self) -> int:
        return len(self.commands)


def _validate_small(configuration: Configuration) -> None:
    if configuration.kind is not ParticleKind.SMALL:
        raise ValueError("optimal collection is defined for small particles only")
    if not configuration.positions:
        raise ValueError("configuration must hold at least one particle")


def _validate_budget(node_budget: int) -> None:
    if isinstance(node_budget, bool) or not isinstance(node_budget, int):
        raise TypeError("node_budget must be an integer")
    if node_budget < 1:
        raise ValueError("node_budget must be positive")


def optimal_collect(
    workspace: Workspace,
    c0: Configuration,
    mode: MoveMode = MoveMode.DISCRETE,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
    keep_tree: bool = False,
) -> OptimalCollection:
    """Return a minimum-length sequence collecting ``c0`` into one cell.

    Raises :class:`InfeasibleError` when every reachable configuration has
    been seen without collecting, :class:`DisconnectedWorkspaceError` when
    free space is split, and :class:`SearchBudgetExceededError` once more
    than ``node_budget`` configurations have been admitted.
    """

    _validate_small(c0)
    _validate_budget(node_budget)
    c0.validate(workspace)
    workspace.require_connected()
    mode = MoveMode(mode)
    step = step_function(ParticleKind.SMALL, mode)

    configs: list[frozenset[Cell]] = [c0.positions]
    moves: list[Move | None] = [None]
    parents: list[int] = [0]
    depths: list[int] = [0]
    seen: dict[frozenset[Cell], int] = {c0.positions: 0}

    generated = 0
    pruned = 0
    frontier_peak = 1
    layer = 0
    p = 0
    while len(configs[p]) > 1:
        if depths[p] != layer:
            layer = depths[p]
            logger.debug(
                "depth %d reached with %d nodes admitted", layer, len(configs)
            )
        current = configs[p]
        for move in SEARCH_ORDER:
            child = step(workspace, current, move)
            generated += 1
            if child in seen:
                pruned += 1
                continue
            if len(configs) >= node_budget:
                raise SearchBudgetExceededError(
                    budget=node_budget,
                    used=len(configs),
                    factor=node_budget / DEFAULT_NODE_BUDGET,
                    default_factor=1.0,
                    what="search node",
                )
            seen[child] = len(configs)
            configs.append(child)
            moves.append(move)
            parents.append(p)
            depths.append(depths[p] + 1)
        p += 1
        if p == len(configs):
            raise InfeasibleError(
                f"exhausted {len(configs)} reachable configurations without collecting"
            )
        frontier_peak = max(frontier_peak, len(configs) - p)

    path: list[Move] = []
    node = p
    while moves[node] is not None:
        path.append(moves[node])  # type: ignore[arg-type]
        node = parents[node]
    path.reverse()

    stats = SearchStats(
        nodes_expanded=len(configs),
        frontier_peak=frontier_peak,
        duplicates_pruned=pruned,
        nodes_generated=generated,
    )
    logger.info(
        "optimal %s collection: %d moves, %d nodes expanded",
        mode.value,
        len(path),
        stats.nodes_expanded,
    )
    tree = None
    if keep_tree:
        tree = tuple(
            SearchNode(config=config, move=move, parent=parent, depth=depth)
            for config, move, parent, depth in zip(configs, moves, parents, depths)
        )
    return OptimalCollection(
        commands=tuple(path),
        stats=stats,
        configuration=c0.with_positions(configs[p]),
        tree=tree,
    )


def oracle_optimal_length(
    workspace: Workspace,
    c0: Configuration,
    mode: MoveMode = MoveMode.DISCRETE,
    max_depth: int = 12,
) -> int | None:
    """Minimum collecting length up to ``max_depth`` by iterative deepening.

    Sequences are enumerated without configuration de-duplication; only
    moves that leave the configuration unchanged are skipped. Meant for tiny
    instances.
    """

    _validate_small(c0)
    step = step_function(ParticleKind.SMALL, MoveMode(mode))

    def collects_within(positions: frozenset[Cell], remaining: int) -> bool:
        if len(positions) == 1:
            return True
        if remaining == 0:
            return False
        for move in SEARCH_ORDER:
            child = step(workspace, positions, move)
            if child == positions:
                continue
            if collects_within(child, remaining - 1):
                return True
        return False

    for depth in range(max_depth + 1):
        if collects_within(c0.positions, depth):
            return depth
    return None


def localizing_sequence(
    workspace: Workspace,
    mode: MoveMode = MoveMode.DISCRETE,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> OptimalCollection:
    """Shortest sequence that drives a robot at any free cell to one known cell.

    Seeding every free cell and collecting them is the same problem as
    localizing a single robot that cannot sense its position.
    """

    seeded = Configuration.small(workspace.free_cells)
    return optimal_collect(workspace, seeded, mode, node_budget=node_budget)


def reconstruct_path(tree: Sequence[SearchNode], index: int) -> CommandSequence:
    """Follow parent pointers from ``index`` back to the root."""

    path: list[Move] = []
    node = tree[index]
    while node.move is not None:
        path.append(node.move)
        node = tree[node.parent]
    path.reverse()
    return tuple(path)


__all__ = [
    "DEFAULT_NODE_BUDGET",
    "OptimalCollection",
    "SearchNode",
    "SearchStats",
    "localizing_sequence",
    "oracle_optimal_length",
    "optimal_collect",
    "reconstruct_path",
]
