"""Global-control dynamics: one command moves every particle the same way.

Small particles never block each other and merge when they meet, so a
configuration of small particles is a set of occupied cells. Large particles
occupy a cell exclusively; moves are resolved leading-particle first, which
makes the resolution independent of any particle ordering.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidConfigurationError
from .workspace import Cell, Workspace, row_major

logger = logging.getLogger(__name__)


class Move(str, Enum):
    """A unit command; ``UP`` decreases ``y`` because the origin is top-left."""

    UP = "u"
    RIGHT = "r"
    DOWN = "d"
    LEFT = "l"

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]

    @property
    def opposite(self) -> "Move":
        return _OPPOSITES[self]


_DELTAS: dict[Move, tuple[int, int]] = {
    Move.UP: (0, -1),
    Move.RIGHT: (1, 0),
    Move.DOWN: (0, 1),
    Move.LEFT: (-1, 0),
}

_OPPOSITES: dict[Move, Move] = {
    Move.UP: Move.DOWN,
    Move.DOWN: Move.UP,
    Move.RIGHT: Move.LEFT,
    Move.LEFT: Move.RIGHT,
}

# Expansion order of every breadth-first search in the package.
SEARCH_ORDER: tuple[Move, ...] = (Move.UP, Move.DOWN, Move.RIGHT, Move.LEFT)

CommandSequence = tuple[Move, ...]


class MoveMode(str, Enum):
    """How far a command carries each particle."""

    DISCRETE = "discrete"
    MAXIMAL = "maximal"


class ParticleKind(str, Enum):
    """Whether particles may share a cell (small) or block each other (large)."""

    SMALL = "small"
    LARGE = "large"


def parse_commands(text: str) -> CommandSequence:
    """Decode a string such as ``"uurr"`` into a command sequence."""

    moves: list[Move] = []
    for index, symbol in enumerate(text.strip()):
        try:
            moves.append(Move(symbol))
        except ValueError as exc:
            raise ValueError(
                f"unknown command {symbol!r} at position {index}; expected one of u, r, d, l"
            ) from exc
    return tuple(moves)


def format_commands(commands: Iterable[Move]) -> str:
    return "".join(move.value for move in commands)


@dataclass(frozen=True)
class Configuration:
    """Particle positions at one instant, tagged with their particle kind."""

    kind: ParticleKind
    positions: frozenset[Cell] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ParticleKind(self.kind))
        object.__setattr__(
            self, "positions", frozenset(Cell(*cell) for cell in self.positions)
        )

    @classmethod
    def small(cls, cells: Iterable[Cell]) -> "Configuration":
        """Build a small-particle configuration; duplicate cells merge."""

        return cls(ParticleKind.SMALL, frozenset(cells))

    @classmethod
    def large(cls, cells: Iterable[Cell]) -> "Configuration":
        """Build a large-particle configuration; duplicates are rejected."""

        listed = [Cell(*cell) for cell in cells]
        unique = frozenset(listed)
        if len(unique) != len(listed):
            raise InvalidConfigurationError(
                "large particles cannot share a cell"
            )
        return cls(ParticleKind.LARGE, unique)

    def with_positions(self, positions: Iterable[Cell]) -> "Configuration":
        return Configuration(self.kind, frozenset(positions))

    def sorted_positions(self) -> tuple[Cell, ...]:
        return tuple(sorted(self.positions, key=row_major))

    def validate(self, workspace: Workspace) -> None:
        """Raise :class:`InvalidConfigurationError` if any particle sits off free space."""

        for cell in self.sorted_positions():
            if not workspace.is_free(cell):
                raise InvalidConfigurationError(
                    f"particle at {tuple(cell)} is not on a free cell"
                )

    def __len__(self) -> int:
        return len(self.positions)


def _leading_key(move: Move) -> Callable[[Cell], tuple[int, int, int]]:
    dx, dy = move.delta

    def key(cell: Cell) -> tuple[int, int, int]:
        # Particles furthest along the move direction resolve first.
        return (-(cell.x * dx + cell.y * dy), cell.y, cell.x)

    return key


def resolve_large_step(
    workspace: Workspace,
    positions: Iterable[Cell],
    move: Move,
    *,
    absorbing: frozenset[Cell] = frozenset(),
) -> dict[Cell, Cell | None]:
    """Resolve one discrete large-particle step and track particle identity.

    Returns a mapping from each particle's old cell to its new cell. A
    particle that enters a cell of ``absorbing`` is removed and maps to
    ``None``; the cell it left is freed for the particles behind it.
    """

    table = workspace.step_table(move.delta)
    ordered = sorted(positions, key=_leading_key(move))
    occupied = set(ordered)
    resolved: dict[Cell, Cell | None] = {}
    for cell in ordered:
        destination = table[cell]
        if destination == cell:
            resolved[cell] = cell
        elif destination in absorbing:
            occupied.discard(cell)
            resolved[cell] = None
        elif destination in occupied:
            resolved[cell] = cell
        else:
            occupied.discard(cell)
            occupied.add(destination)
            resolved[cell] = destination
    return resolved


def _small_discrete(workspace: Workspace, positions: frozenset[Cell], move: Move) -> frozenset[Cell]:
    table = workspace.step_table(move.delta)
    return frozenset(map(table.__getitem__, positions))


def _small_maximal(workspace: Workspace, positions: frozenset[Cell], move: Move) -> frozenset[Cell]:
    table = workspace.slide_table(move.delta)
    return frozenset(map(table.__getitem__, positions))


def _large_discrete(workspace: Workspace, positions: frozenset[Cell], move: Move) -> frozenset[Cell]:
    resolved = resolve_large_step(workspace, positions, move)
    return frozenset(cell for cell in resolved.values() if cell is not None)


def _large_maximal(workspace: Workspace, positions: frozenset[Cell], move: Move) -> frozenset[Cell]:
    current = positions
    # A train of particles settles after at most one pass per grid cell.
    for _ in range(workspace.n + 1):
        following = _large_discrete(workspace, current, move)
        if following == current:
            return current
        current = following
    raise RuntimeError("large-particle slide failed to settle")  # pragma: no cover


StepFunction = Callable[[Workspace, frozenset[Cell], Move], frozenset[Cell]]

_STEP_FUNCTIONS: Mapping[tuple[ParticleKind, MoveMode], StepFunction] = {
    (ParticleKind.SMALL, MoveMode.DISCRETE): _small_discrete,
    (ParticleKind.SMALL, MoveMode.MAXIMAL): _small_maximal,
    (ParticleKind.LARGE, MoveMode.DISCRETE): _large_discrete,
    (ParticleKind.LARGE, MoveMode.MAXIMAL): _large_maximal,
}


def step_function(kind: ParticleKind, mode: MoveMode) -> StepFunction:
    """Return the raw positions transformer for a particle kind and move mode."""

    return _STEP_FUNCTIONS[(ParticleKind(kind), MoveMode(mode))]


def apply_discrete(workspace: Workspace, configuration: Configuration, move: Move) -> Configuration:
    """Advance every particle by at most one cell in ``move``'s direction."""

    step = step_function(configuration.kind, MoveMode.DISCRETE)
    return configuration.with_positions(step(workspace, configuration.positions, move))


def apply_maximal(workspace: Workspace, configuration: Configuration, move: Move) -> Configuration:
    """Repeat the discrete step until no particle can advance."""

    step = step_function(configuration.kind, MoveMode.MAXIMAL)
    return configuration.with_positions(step(workspace, configuration.positions, move))


def apply_move(
    workspace: Workspace,
    configuration: Configuration,
    move: Move,
    mode: MoveMode = MoveMode.DISCRETE,
) -> Configuration:
    step = step_function(configuration.kind, mode)
    return configuration.with_positions(step(workspace, configuration.positions, move))


def apply_sequence(
    workspace: Workspace,
    configuration: Configuration,
    commands: Sequence[Move],
    mode: MoveMode = MoveMode.DISCRETE,
) -> Configuration:
    """Left fold of :func:`apply_move` over ``commands``."""

    step = step_function(configuration.kind, mode)
    positions = configuration.positions
    for move in commands:
        positions = step(workspace, positions, move)
    return configuration.with_positions(positions)


def is_connected_set(cells: frozenset[Cell]) -> bool:
    """Whether ``cells`` form a single 4-connected group (empty counts as not)."""

    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        for dx, dy in _DELTAS.values():
            neighbour = Cell(cell.x + dx, cell.y + dy)
            if neighbour in cells and neighbour not in seen:
                seen.add(neighbour)
                queue.append(neighbour)
    return len(seen) == len(cells)


def is_collected(configuration: Configuration) -> bool:
    """Small particles: one occupied cell. Large: one 4-connected cluster."""

    if configuration.kind is ParticleKind.SMALL:
        return len(configuration.positions) == 1
    return is_connected_set(configuration.positions)


__all__ = [
    "CommandSequence",
    "Configuration",
    "Move",
    "MoveMode",
    "ParticleKind",
    "SEARCH_ORDER",
    "apply_discrete",
    "apply_maximal",
    "apply_move",
    "apply_sequence",
    "format_commands",
    "is_collected",
    "is_connected_set",
    "parse_commands",
    "resolve_large_step",
    "step_function",
]
