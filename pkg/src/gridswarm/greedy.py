"""Greedy pairwise collection of small particles.

:func:`collect_ab` drives one tracked particle onto another by repeatedly
planning the shortest path between their current cells and executing it on
the whole swarm. :func:`greedy_collect` picks pairs with a
:class:`Strategy` until one occupied cell remains.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from math import floor
from typing import Iterable, Sequence

from .dynamics import SEARCH_ORDER, CommandSequence, Configuration, Move, ParticleKind
from .errors import CollectBudgetExceededError, InfeasibleError
from .rng import SeededRandom
from .workspace import Cell, Workspace, distance_field

logger = logging.getLogger(__name__)

DEFAULT_BOUND_FACTOR = 1.0


class StrategyKind(str, Enum):
    CLOSEST = "closest"
    FURTHEST = "furthest"
    FIRST = "first"
    RANDOM = "random"
    FIRST_TO_LAST = "firstlast"


@dataclass(frozen=True)
class Strategy:
    """Pair-selection rule; ``random`` carries its 64-bit seed."""

    kind: StrategyKind
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        if self.kind is StrategyKind.RANDOM:
            if self.seed is None:
                raise ValueError("the random strategy requires a seed")
            if isinstance(self.seed, bool) or not isinstance(self.seed, int):
                raise TypeError("seed must be an integer")
            if not 0 <= self.seed < 1 << 64:
                raise ValueError("seed must fit in an unsigned 64-bit integer")
        elif self.seed is not None:
            raise ValueError(f"the {self.kind.value} strategy does not take a seed")

    @classmethod
    def parse(cls, token: str) -> "Strategy":
        """Decode ``closest``, ``furthest``, ``first``, ``firstlast`` or ``random:<seed>``."""

        name, _, argument = token.strip().partition(":")
        try:
            kind = StrategyKind(name)
        except ValueError as exc:
            choices = ", ".join(kind.value for kind in StrategyKind)
            raise ValueError(f"unknown strategy {token!r}; expected one of {choices}") from exc
        if kind is StrategyKind.RANDOM:
            if not argument:
                raise ValueError("random strategy needs a seed, e.g. random:7")
            try:
                seed = int(argument)
            except ValueError as exc:
                raise ValueError(f"random seed must be an integer, got {argument!r}") from exc
            return cls(kind, seed)
        if argument:
            raise ValueError(f"strategy {name!r} takes no argument")
        return cls(kind)

    @property
    def token(self) -> str:
        if self.kind is StrategyKind.RANDOM:
            return f"random:{self.seed}"
        return self.kind.value


# Strategies compared in the experiments; the other two are extras.
BENCH_STRATEGIES: tuple[Strategy, ...] = (
    Strategy(StrategyKind.CLOSEST),
    Strategy(StrategyKind.FURTHEST),
    Strategy(StrategyKind.FIRST),
)


@dataclass(frozen=True)
class GreedyStep:
    """One pairwise merge inside :func:`greedy_collect`."""

    pair: tuple[Cell, Cell]
    planned_length: int
    commands_so_far: int
    distinct_positions: int


GreedyTrace = tuple[GreedyStep, ...]


@dataclass(frozen=True)
class PairCollection:
    commands: CommandSequence
    configuration: Configuration
    distance_trace: tuple[int, ...]
    distinct_position_trace: tuple[int, ...]
    meeting_cell: Cell


@dataclass(frozen=True)
class GreedyCollection:
    commands: CommandSequence
    trace: GreedyTrace
    configuration: Configuration
    distinct_position_trace: tuple[int, ...]
    strategy: Strategy

    @property
    def move_count(self) -> int:
        return len(self.commands)


def _validate_factor(bound_factor: float) -> float:
    if isinstance(bound_factor, bool) or not isinstance(bound_factor, (int, float)):
        raise TypeError("bound_factor must be a number")
    if bound_factor <= 0:
        raise ValueError("bound_factor must be positive")
    return float(bound_factor)


def _validate_small(configuration: Configuration) -> None:
    if configuration.kind is not ParticleKind.SMALL:
        raise ValueError("greedy collection is defined for small particles only")


def shortest_control_sequence(workspace: Workspace, start: Cell, goal: Cell) -> CommandSequence:
    """Commands moving a lone particle from ``start`` to ``goal`` along a shortest path.

    Ties between equally short paths are broken by preferring u, d, r, l at
    each relaxation. Raises :class:`InfeasibleError` if ``goal`` is
    unreachable.
    """

    for name, cell in (("start", start), ("goal", goal)):
        if not workspace.is_free(cell):
            raise ValueError(f"{name} {tuple(cell)} is not a free cell of the workspace")
    if start == goal:
        return ()
    came_from: dict[Cell, tuple[Cell, Move]] = {}
    queue = deque([start])
    seen = {start}
    while queue:
        cell = queue.popleft()
        for move in SEARCH_ORDER:
            neighbour = workspace.neighbor(cell, move.delta)
            if neighbour is None or neighbour in seen:
                continue
            seen.add(neighbour)
            came_from[neighbour] = (cell, move)
            if neighbour == goal:
                path: list[Move] = []
                node = goal
                while node != start:
                    node, step = came_from[node]
                    path.append(step)
                path.reverse()
                return tuple(path)
            queue.append(neighbour)
    raise InfeasibleError(f"{tuple(goal)} is unreachable from {tuple(start)}")


def collect_ab(
    workspace: Workspace,
    configuration: Configuration,
    a: Cell,
    b: Cell,
    *,
    bound_factor: float = DEFAULT_BOUND_FACTOR,
    command_limit: int | None = None,
) -> PairCollection:
    """Merge the particle at ``a`` with the particle at ``b``.

    Every executed command advances the whole configuration along with the
    two tracked cells. The run may issue at most ``bound_factor * n**3``
    commands, or ``command_limit`` if that is smaller.
    """

    _validate_small(configuration)
    factor = _validate_factor(bound_factor)
    a, b = Cell(*a), Cell(*b)
    for name, cell in (("a", a), ("b", b)):
        if cell not in configuration.positions:
            raise ValueError(f"{name} {tuple(cell)} is not an occupied cell")

    budget = floor(factor * workspace.n**3)
    if command_limit is not None:
        budget = min(budget, command_limit)
    tables = {move: workspace.step_table(move.delta) for move in SEARCH_ORDER}
    positions = configuration.positions
    commands: list[Move] = []
    distances: list[int] = []
    distinct: list[int] = []
    while True:
        plan = shortest_control_sequence(workspace, a, b)
        distances.append(len(plan))
        if not plan:
            break
        logger.debug("pair %s -> %s at distance %d", a, b, len(plan))
        for move in plan:
            if len(commands) >= budget:
                raise CollectBudgetExceededError(
                    budget=budget,
                    used=len(commands),
                    factor=factor,
                    default_factor=DEFAULT_BOUND_FACTOR,
                    what="pair collection command",
                )
            table = tables[move]
            positions = frozenset(map(table.__getitem__, positions))
            a, b = table[a], table[b]
            commands.append(move)
            distinct.append(len(positions))
    return PairCollection(
        commands=tuple(commands),
        configuration=configuration.with_positions(positions),
        distance_trace=tuple(distances),
        distinct_position_trace=tuple(distinct),
        meeting_cell=a,
    )


def _closest_pair(workspace: Workspace, ordered: Sequence[Cell]) -> tuple[Cell, Cell]:
    rank = {cell: index for index, cell in enumerate(ordered)}
    best: tuple[int, int, int] | None = None
    for index, a in enumerate(ordered[:-1]):
        limit = None if best is None else best[0]
        field = distance_field(workspace, [a], limit=limit)
        for b in ordered[index + 1 :]:
            distance = field.get(b)
            if distance is None:
                continue
            candidate = (distance, index, rank[b])
            if best is None or candidate < best:
                best = candidate
    if best is None:
        raise InfeasibleError("no two particles share a free-space component")
    return ordered[best[1]], ordered[best[2]]


def _furthest_pair(workspace: Workspace, ordered: Sequence[Cell]) -> tuple[Cell, Cell]:
    # Eccentricity bounds from two sweep pivots let most sources be skipped.
    first_field = distance_field(workspace, [ordered[0]])
    pivot = max(ordered, key=lambda cell: first_field.get(cell, -1))
    pivot_field = distance_field(workspace, [pivot])
    reach = {
        "first": max(first_field.get(cell, 0) for cell in ordered),
        "pivot": max(pivot_field.get(cell, 0) for cell in ordered),
    }

    best: tuple[int, int, int] | None = None
    for index, a in enumerate(ordered[:-1]):
        if best is not None:
            upper = min(
                first_field.get(a, 0) + reach["first"],
                pivot_field.get(a, 0) + reach["pivot"],
            )
            if upper <= best[0]:
                continue
        field = first_field if index == 0 else distance_field(workspace, [a])
        for offset, b in enumerate(ordered[index + 1 :], start=index + 1):
            distance = field.get(b)
            if distance is None:
                continue
            # Larger distance wins; ties keep the earlier row-major pair.
            if best is None or distance > best[0]:
                best = (distance, index, offset)
    if best is None:
        raise InfeasibleError("no two particles share a free-space component")
    return ordered[best[1]], ordered[best[2]]


def _strategy_rng(strategy: Strategy) -> SeededRandom:
    if strategy.seed is None:
        raise ValueError(f"strategy {strategy.token!r} has no seed")
    return SeededRandom(strategy.seed)


def select_pair(
    configuration: Configuration,
    strategy: Strategy,
    workspace: Workspace,
    *,
    rng: SeededRandom | None = None,
) -> tuple[Cell, Cell]:
    """Choose the next two occupied cells to merge.

    Pairs are returned in row-major order. The random strategy draws from
    ``rng`` when given, otherwise from a fresh stream seeded by the strategy.
    """

    ordered = configuration.sorted_positions()
    if len(ordered) < 2:
        raise ValueError("select_pair needs at least two distinct positions")
    kind = strategy.kind
    if kind is StrategyKind.FIRST:
        return ordered[0], ordered[1]
    if kind is StrategyKind.FIRST_TO_LAST:
        return ordered[0], ordered[-1]
    if kind is StrategyKind.RANDOM:
        if rng is None:
            rng = _strategy_rng(strategy)
        first, second = rng.pair_indices(len(ordered))
        return ordered[first], ordered[second]
    if kind is StrategyKind.CLOSEST:
        return _closest_pair(workspace, ordered)
    return _furthest_pair(workspace, ordered)


def greedy_collect(
    workspace: Workspace,
    c0: Configuration,
    strategy: Strategy,
    *,
    bound_factor: float = DEFAULT_BOUND_FACTOR,
) -> GreedyCollection:
    """Merge pairs chosen by ``strategy`` until a single occupied cell remains.

    The whole run may issue at most ``bound_factor * m * n**3`` commands,
    where ``m`` is the initial number of distinct positions.
    """

    _validate_small(c0)
    factor = _validate_factor(bound_factor)
    c0.validate(workspace)
    workspace.require_connected()

    m = len(c0.positions)
    budget = floor(factor * m * workspace.n**3)
    pair_budget = floor(factor * workspace.n**3)
    rng = _strategy_rng(strategy) if strategy.kind is StrategyKind.RANDOM else None

    configuration = c0
    commands: list[Move] = []
    distinct: list[int] = []
    trace: list[GreedyStep] = []
    while len(configuration.positions) > 1:
        a, b = select_pair(configuration, strategy, workspace, rng=rng)
        remaining = budget - len(commands)
        try:
            merged = collect_ab(
                workspace,
                configuration,
                a,
                b,
                bound_factor=factor,
                command_limit=remaining,
            )
        except CollectBudgetExceededError as exc:
            if remaining >= pair_budget:
                raise
            raise CollectBudgetExceededError(
                budget=budget,
                used=len(commands) + exc.used,
                factor=factor,
                default_factor=DEFAULT_BOUND_FACTOR,
                what="greedy collection command",
            ) from exc
        commands.extend(merged.commands)
        distinct.extend(merged.distinct_position_trace)
        configuration = merged.configuration
        trace.append(
            GreedyStep(
                pair=(a, b),
                planned_length=merged.distance_trace[0],
                commands_so_far=len(commands),
                distinct_positions=len(configuration.positions),
            )
        )
        logger.debug(
            "merged %s and %s; %d distinct positions left after %d commands",
            a,
            b,
            len(configuration.positions),
            len(commands),
        )

    logger.info(
        "greedy %s collection: %d commands for %d positions",
        strategy.token,
        len(commands),
        m,
    )
    return GreedyCollection(
        commands=tuple(commands),
        trace=tuple(trace),
        configuration=configuration,
        distinct_position_trace=tuple(distinct),
        strategy=strategy,
    )


def strategies_from_tokens(tokens: Iterable[str]) -> tuple[Strategy, ...]:
    return tuple(Strategy.parse(token) for token in tokens)


__all__ = [
    "DEFAULT_BOUND_FACTOR",
    "GreedyCollection",
    "GreedyStep",
    "GreedyTrace",
    "BENCH_STRATEGIES",
    "PairCollection",
    "Strategy",
    "StrategyKind",
    "collect_ab",
    "greedy_collect",
    "select_pair",
    "shortest_control_sequence",
    "strategies_from_tokens",
]
