"""Delivery of large particles to an absorbing ("sticky") target region.

A particle that steps onto a target cell is removed from play at once, so it
never blocks anyone afterwards. :func:`sticky_collect` routes one particle at
a time, nearest to the target first, and replans whenever the tracked
particle is held back by another active particle.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from math import floor
from typing import Iterable

import numpy as np

from .dynamics import (
    SEARCH_ORDER,
    CommandSequence,
    Configuration,
    Move,
    ParticleKind,
    resolve_large_step,
)
from .errors import InvalidConfigurationError, StickyBudgetExceededError
from .workspace import Cell, Workspace, distance_field, row_major

logger = logging.getLogger(__name__)

DEFAULT_STICKY_FACTOR = 2.0


@dataclass(frozen=True)
class StickyState:
    """Active large particles plus the number already absorbed."""

    active: frozenset[Cell]
    absorbed_count: int
    target: frozenset[Cell]

    def __post_init__(self) -> None:
        if self.absorbed_count < 0:
            raise ValueError("absorbed_count must not be negative")
        overlap = self.active & self.target
        if overlap:
            raise InvalidConfigurationError(
                f"active particle on target cell {tuple(min(overlap, key=row_major))}"
            )

    @classmethod
    def initial(
        cls, configuration: Configuration, target: Iterable[Cell]
    ) -> "StickyState":
        """Start state; particles already on the target count as absorbed."""

        target_cells = frozenset(target)
        on_target = configuration.positions & target_cells
        return cls(
            active=configuration.positions - on_target,
            absorbed_count=len(on_target),
            target=target_cells,
        )

    @property
    def total(self) -> int:
        return self.absorbed_count + len(self.active)

    @property
    def done(self) -> bool:
        return not self.active

    def as_configuration(self) -> Configuration:
        return Configuration(ParticleKind.LARGE, self.active)


@dataclass(frozen=True)
class StickyCollection:
    commands: CommandSequence
    state: StickyState
    replans: int
    active_trace: tuple[int, ...]

    @property
    def move_count(self) -> int:
        return len(self.commands)


def _advance(
    workspace: Workspace, state: StickyState, move: Move
) -> tuple[StickyState, dict[Cell, Cell | None]]:
    resolved = resolve_large_step(workspace, state.active, move, absorbing=state.target)
    survivors = frozenset(cell for cell in resolved.values() if cell is not None)
    absorbed = len(state.active) - len(survivors)
    following = StickyState(
        active=survivors,
        absorbed_count=state.absorbed_count + absorbed,
        target=state.target,
    )
    return following, resolved


def sticky_step(workspace: Workspace, state: StickyState, move: Move) -> StickyState:
    """Apply one discrete large-particle move with absorbing target cells."""

    if not state.active:
        return state
    return _advance(workspace, state, move)[0]


def _route_to_target(
    workspace: Workspace,
    start: Cell,
    target: frozenset[Cell],
    blocked: frozenset[Cell],
) -> tuple[Cell, ...] | None:
    """Cells of a shortest path from ``start`` into ``target`` avoiding ``blocked``."""

    came_from: dict[Cell, Cell] = {start: start}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        for move in SEARCH_ORDER:
            neighbour = workspace.neighbor(cell, move.delta)
            if neighbour is None or neighbour in came_from or neighbour in blocked:
                continue
            came_from[neighbour] = cell
            if neighbour in target:
                path = [neighbour]
                while path[-1] != start:
                    path.append(came_from[path[-1]])
                path.reverse()
                return tuple(path)
            queue.append(neighbour)
    return None


def _moves_along(path: tuple[Cell, ...]) -> list[Move]:
    moves: list[Move] = []
    for here, there in zip(path, path[1:]):
        delta = (there.x - here.x, there.y - here.y)
        moves.append(next(move for move in SEARCH_ORDER if move.delta == delta))
    return moves


def _plan(
    workspace: Workspace, particle: Cell, state: StickyState
) -> tuple[Cell, list[Move]]:
    """Pick the particle to route and its moves.

    Other active particles are treated as obstacles. When they wall the
    particle in, routing switches to the first particle sitting on its
    unobstructed shortest path.
    """

    current = particle
    for _ in range(len(state.active)):
        others = state.active - {current}
        path = _route_to_target(workspace, current, state.target, others)
        if path is not None:
            return current, _moves_along(path)
        static = _route_to_target(workspace, current, state.target, frozenset())
        if static is None:
            break
        blocker = next((cell for cell in static[1:] if cell in others), None)
        if blocker is None:
            return current, _moves_along(static)
        logger.debug("route of %s blocked by %s; retargeting", current, blocker)
        current = blocker
    static = _route_to_target(workspace, current, state.target, frozenset())
    return current, [] if static is None else _moves_along(static)


def sticky_collect(
    workspace: Workspace,
    c0: Configuration,
    target: Iterable[Cell] | None = None,
    *,
    budget_factor: float = DEFAULT_STICKY_FACTOR,
) -> StickyCollection:
    """Deliver every large particle of ``c0`` into the target region.

    ``target`` defaults to the workspace's own target cells. At most
    ``budget_factor * m * D`` commands are issued, ``D`` being the diameter.
    """

    if c0.kind is not ParticleKind.LARGE:
        raise ValueError("sticky collection is defined for large particles only")
    if isinstance(budget_factor, bool) or not isinstance(budget_factor, (int, float)):
        raise TypeError("budget_factor must be a number")
    if budget_factor <= 0:
        raise ValueError("budget_factor must be positive")
    target_cells = frozenset(workspace.target if target is None else target)
    if not target_cells:
        raise ValueError("sticky collection needs a non-empty target region")
    for cell in target_cells:
        if not workspace.is_free(cell):
            raise InvalidConfigurationError(f"target cell {tuple(cell)} is not free")
    c0.validate(workspace)
    workspace.require_connected()

    m = len(c0.positions)
    budget = floor(budget_factor * m * workspace.diameter)
    to_target = distance_field(workspace, target_cells)

    state = StickyState.initial(c0, target_cells)
    commands: list[Move] = []
    trace: list[int] = []
    replans = 0
    while state.active:
        nearest = min(state.active, key=lambda cell: (to_target[cell], row_major(cell)))
        particle, plan = _plan(workspace, nearest, state)
        if not plan:
            raise StickyBudgetExceededError(
                budget=budget,
                used=len(commands),
                factor=float(budget_factor),
                default_factor=DEFAULT_STICKY_FACTOR,
                what="sticky delivery command",
            )
        for move in plan:
            if len(commands) >= budget:
                raise StickyBudgetExceededError(
                    budget=budget,
                    used=len(commands),
                    factor=float(budget_factor),
                    default_factor=DEFAULT_STICKY_FACTOR,
                    what="sticky delivery command",
                )
            state, resolved = _advance(workspace, state, move)
            commands.append(move)
            trace.append(len(state.active))
            landed = resolved[particle]
            if landed is None:
                break
            if landed == particle:
                replans += 1
                logger.debug("%s held back after %d commands; replanning", particle, len(commands))
                break
            particle = landed

    logger.info(
        "sticky delivery: %d commands for %d particles (%d replans)",
        len(commands),
        m,
        replans,
    )
    return StickyCollection(
        commands=tuple(commands),
        state=state,
        replans=replans,
        active_trace=tuple(trace),
    )


def square_fill_instance(k: int) -> tuple[Workspace, Configuration]:
    """A ``k`` × ``k`` open square, every cell seeded, target at the centre."""

    if k < 3 or k % 2 == 0:
        raise ValueError("k must be an odd integer of at least 3")
    centre = Cell(k // 2, k // 2)
    workspace = Workspace(np.ones((k, k), dtype=bool), target=[centre])
    return workspace, Configuration.large(workspace.free_cells)


__all__ = [
    "DEFAULT_STICKY_FACTOR",
    "StickyCollection",
    "StickyState",
    "square_fill_instance",
    "sticky_collect",
    "sticky_step",
]
