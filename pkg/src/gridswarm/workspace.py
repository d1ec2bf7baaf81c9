"""Bounded grid workspaces and their structural metrics.

A :class:`Workspace` is an immutable rectangle of free and obstacle cells.
The origin is the top-left cell and ``y`` grows downward, so the map file is
read in the same order as the row-major scan used by the pair strategies.
Distances are shortest-path lengths in the 4-neighbour graph of free cells.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DisconnectedWorkspaceError, InvalidConfigurationError

logger = logging.getLogger(__name__)


class Cell(NamedTuple):
    """Grid coordinate; ``x`` is the column and ``y`` the row (downward)."""

    x: int
    y: int


def row_major(cell: Cell) -> tuple[int, int]:
    """Sort key scanning from the top-left to the bottom-right."""

    return (cell.y, cell.x)


# Neighbour order used by every search: up, down, right, left.
DIRECTION_DELTAS: tuple[tuple[int, int], ...] = ((0, -1), (0, 1), (1, 0), (-1, 0))


class Workspace:
    """Immutable bounded grid of free and obstacle cells.

    ``free_mask`` is indexed ``[y, x]``. An optional ``target`` region (the
    sticky target) must consist of free cells. Moves off the grid are always
    blocked, so every workspace is bounded by construction.
    """

    def __init__(self, free_mask: ArrayLike, target: Iterable[Cell] = ()) -> None:
        mask = np.array(free_mask, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] == 0 or mask.shape[1] == 0:
            raise ValueError("free_mask must be a non-empty two-dimensional grid")
        mask.setflags(write=False)
        self._mask: NDArray[np.bool_] = mask
        self.height, self.width = (int(size) for size in mask.shape)

        ys, xs = np.nonzero(mask)
        # np.nonzero walks rows first, which is exactly the row-major order.
        self.free_cells: tuple[Cell, ...] = tuple(
            Cell(int(x), int(y)) for y, x in zip(ys, xs)
        )
        self._free_set = frozenset(self.free_cells)

        target_cells = frozenset(Cell(*cell) for cell in target)
        outside = sorted(target_cells - self._free_set, key=row_major)
        if outside:
            raise InvalidConfigurationError(
                f"target cells must be free; {outside[0]} is not"
            )
        self.target: frozenset[Cell] = target_cells

        self._step_tables: dict[tuple[int, int], Mapping[Cell, Cell]] = {}
        self._slide_tables: dict[tuple[int, int], Mapping[Cell, Cell]] = {}

    @classmethod
    def rectangle(cls, width: int, height: int, target: Iterable[Cell] = ()) -> "Workspace":
        """Return an obstacle-free ``width`` × ``height`` workspace."""

        if width < 1 or height < 1:
            raise ValueError("width and height must be positive")
        return cls(np.ones((height, width), dtype=bool), target=target)

    @property
    def free_mask(self) -> NDArray[np.bool_]:
        """Read-only ``[y, x]`` boolean view of the free cells."""

        return self._mask

    @property
    def n(self) -> int:
        """Grid size measure: height times width, obstacles included."""

        return self.height * self.width

    @property
    def free_count(self) -> int:
        return len(self.free_cells)

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell.x < self.width and 0 <= cell.y < self.height

    def is_free(self, cell: Cell) -> bool:
        return cell in self._free_set

    def neighbor(self, cell: Cell, delta: tuple[int, int]) -> Cell | None:
        """Return the free cell one step along ``delta`` or ``None`` if blocked."""

        candidate = Cell(cell.x + delta[0], cell.y + delta[1])
        return candidate if candidate in self._free_set else None

    @cached_property
    def _adjacency(self) -> Mapping[Cell, tuple[Cell, ...]]:
        adjacency: dict[Cell, tuple[Cell, ...]] = {}
        for cell in self.free_cells:
            adjacency[cell] = tuple(
                neighbour
                for neighbour in (self.neighbor(cell, delta) for delta in DIRECTION_DELTAS)
                if neighbour is not None
            )
        return adjacency

    def neighbors(self, cell: Cell) -> tuple[Cell, ...]:
        """Free 4-neighbours of ``cell`` in up, down, right, left order."""

        return self._adjacency[cell]

    def step_table(self, delta: tuple[int, int]) -> Mapping[Cell, Cell]:
        """Map each free cell to where a lone particle lands after one step."""

        table = self._step_tables.get(delta)
        if table is None:
            built: dict[Cell, Cell] = {}
            for cell in self.free_cells:
                neighbour = self.neighbor(cell, delta)
                built[cell] = cell if neighbour is None else neighbour
            self._step_tables[delta] = table = built
        return table

    def slide_table(self, delta: tuple[int, int]) -> Mapping[Cell, Cell]:
        """Map each free cell to where a lone particle stops when sliding."""

        table = self._slide_tables.get(delta)
        if table is None:
            step = self.step_table(delta)
            built: dict[Cell, Cell] = {}
            # Walk from the far wall backward so each cell reuses its successor.
            ordered = sorted(
                self.free_cells,
                key=lambda cell: -(cell.x * delta[0] + cell.y * delta[1]),
            )
            for cell in ordered:
                nxt = step[cell]
                built[cell] = cell if nxt == cell else built[nxt]
            self._slide_tables[delta] = table = built
        return table

    @cached_property
    def components(self) -> "ComponentLabels":
        return _label_components(self)

    @property
    def is_connected(self) -> bool:
        return self.components.count == 1

    def require_connected(self) -> None:
        """Raise :class:`DisconnectedWorkspaceError` unless free space is one piece."""

        count = self.components.count
        if count != 1:
            raise DisconnectedWorkspaceError(count)

    @cached_property
    def diameter(self) -> int:
        """Maximum shortest-path distance over all pairs of free cells."""

        self.require_connected()
        return _bitset_diameter(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self._mask, other._mask))
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash((self.width, self.height, self._mask.tobytes(), self.target))

    def __repr__(self) -> str:
        return (
            f"Workspace(width={self.width}, height={self.height}, "
            f"free={self.free_count}, target={len(self.target)})"
        )


@dataclass(frozen=True)
class ComponentLabels:
    """Connected-component labelling of the free cells."""

    count: int
    labels: Mapping[Cell, int]

    def label_of(self, cell: Cell) -> int:
        return self.labels[cell]

    def cells_by_component(self) -> tuple[tuple[Cell, ...], ...]:
        groups: list[list[Cell]] = [[] for _ in range(self.count)]
        for cell, label in self.labels.items():
            groups[label].append(cell)
        return tuple(tuple(sorted(group, key=row_major)) for group in groups)


@dataclass(frozen=True)
class CollectabilityReport:
    """Connectivity facts that decide whether collection can start at all."""

    component_count: int
    occupied_components: tuple[int, ...]
    bounded: bool = True

    @property
    def particles_share_component(self) -> bool:
        return len(self.occupied_components) <= 1

    @property
    def collectable(self) -> bool:
        """``False`` when particles sit in unconnected free-space components."""

        return self.bounded and self.particles_share_component


def _label_components(workspace: Workspace) -> ComponentLabels:
    labels: dict[Cell, int] = {}
    count = 0
    for start in workspace.free_cells:
        if start in labels:
            continue
        labels[start] = count
        queue = deque([start])
        while queue:
            cell = queue.popleft()
            for neighbour in workspace.neighbors(cell):
                if neighbour not in labels:
                    labels[neighbour] = count
                    queue.append(neighbour)
        count += 1
    return ComponentLabels(count=count, labels=labels)


def connected_components(workspace: Workspace) -> ComponentLabels:
    """Label the free cells by 4-neighbour flood fill."""

    return workspace.components


def check_collectable(workspace: Workspace, positions: Iterable[Cell]) -> CollectabilityReport:
    """Report whether the particles occupy a single free-space component.

    Trap detection for maximal moves and large-particle blocking topologies
    are not attempted; a ``collectable`` result only rules out the
    disconnected case.
    """

    labels = workspace.components
    occupied = sorted({labels.label_of(cell) for cell in positions})
    return CollectabilityReport(
        component_count=labels.count,
        occupied_components=tuple(occupied),
    )


def _require_free(workspace: Workspace, cell: Cell, name: str) -> None:
    if not workspace.is_free(cell):
        raise ValueError(f"{name} {tuple(cell)} is not a free cell of the workspace")


def distance_field(
    workspace: Workspace,
    sources: Iterable[Cell],
    *,
    blocked: frozenset[Cell] = frozenset(),
    limit: int | None = None,
) -> dict[Cell, int]:
    """Multi-source BFS distances to every reachable free cell.

    Cells in ``blocked`` are never entered. When ``limit`` is given the search
    stops expanding beyond that distance.
    """

    distances: dict[Cell, int] = {}
    queue: deque[Cell] = deque()
    for source in sources:
        _require_free(workspace, source, "source")
        if source not in distances:
            distances[source] = 0
            queue.append(source)
    while queue:
        cell = queue.popleft()
        current = distances[cell]
        if limit is not None and current >= limit:
            continue
        for neighbour in workspace.neighbors(cell):
            if neighbour in distances or neighbour in blocked:
                continue
            distances[neighbour] = current + 1
            queue.append(neighbour)
    return distances


def shortest_distance(workspace: Workspace, a: Cell, b: Cell) -> int | None:
    """Length of the shortest free-space path from ``a`` to ``b``.

    Returns ``None`` when ``b`` lies in another component.
    """

    _require_free(workspace, a, "cell")
    _require_free(workspace, b, "cell")
    if a == b:
        return 0
    distances = {a: 0}
    queue = deque([a])
    while queue:
        cell = queue.popleft()
        for neighbour in workspace.neighbors(cell):
            if neighbour in distances:
                continue
            if neighbour == b:
                return distances[cell] + 1
            distances[neighbour] = distances[cell] + 1
            queue.append(neighbour)
    return None


def diameter(workspace: Workspace) -> int:
    """Largest shortest-path distance between two free cells (cached)."""

    return workspace.diameter


def _bitset_diameter(workspace: Workspace) -> int:
    """All-sources BFS, 64 sources per pass packed into ``uint64`` bitsets."""

    cells = workspace.free_cells
    size = len(cells)
    index = {cell: position for position, cell in enumerate(cells)}
    # Row ``size`` is a permanently empty sentinel standing in for walls.
    adjacency = np.full((len(DIRECTION_DELTAS), size), size, dtype=np.int64)
    for position, cell in enumerate(cells):
        for slot, delta in enumerate(DIRECTION_DELTAS):
            neighbour = workspace.neighbor(cell, delta)
            if neighbour is not None:
                adjacency[slot, position] = index[neighbour]

    best = 0
    for start in range(0, size, 64):
        batch = np.arange(start, min(start + 64, size))
        frontier = np.zeros(size + 1, dtype=np.uint64)
        frontier[batch] = np.left_shift(
            np.uint64(1), np.arange(batch.size, dtype=np.uint64)
        )
        visited = frontier.copy()
        level = 0
        while True:
            reached = frontier[adjacency[0]]
            for slot in range(1, len(DIRECTION_DELTAS)):
                reached = reached | frontier[adjacency[slot]]
            fresh = np.zeros(size + 1, dtype=np.uint64)
            fresh[:size] = reached & ~visited[:size]
            if not fresh.any():
                break
            level += 1
            visited |= fresh
            frontier = fresh
        best = max(best, level)
    logger.debug("diameter of %r is %d", workspace, best)
    return best


def iter_bfs_order(workspace: Workspace, start: Cell) -> Iterator[Cell]:
    """Yield the free cells reachable from ``start`` in BFS discovery order."""

    _require_free(workspace, start, "start")
    seen = {start}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        yield cell
        for neighbour in workspace.neighbors(cell):
            if neighbour not in seen:
                seen.add(neighbour)
                queue.append(neighbour)


__all__ = [
    "Cell",
    "CollectabilityReport",
    "ComponentLabels",
    "DIRECTION_DELTAS",
    "Workspace",
    "check_collectable",
    "connected_components",
    "diameter",
    "distance_field",
    "iter_bfs_order",
    "row_major",
    "shortest_distance",
]
