"""Procedural world generators.

Every generator is driven by a :class:`GeneratorSpec` and a seed, carves a
connected free region of exactly ``budget`` cells and then places particles
and target cells. The same spec always produces the same world.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Any

import numpy as np

from .dynamics import Configuration, ParticleKind
from .rng import SeededRandom
from .workspace import DIRECTION_DELTAS, Cell, Workspace, iter_bfs_order

logger = logging.getLogger(__name__)


class GeneratorKind(str, Enum):
    RECTANGLE = "rectangle"
    RANDOM_POLYOMINO = "random-polyomino"
    VASCULAR_TREE = "vascular-tree"


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one generated world.

    ``budget`` is the free-cell count (``None`` means the whole grid for
    rectangles). ``particles`` of ``None`` seeds every free cell outside the
    target region. ``depth``, ``trunk_width``, ``branch_angle`` and
    ``length_ratio`` shape vascular trees only.
    """

    kind: GeneratorKind
    width: int
    height: int
    budget: int | None = None
    seed: int = 0
    particles: int | None = None
    targets: int = 0
    particle_kind: ParticleKind = ParticleKind.SMALL
    depth: int = 6
    trunk_width: int = 3
    branch_angle: float = 28.0
    length_ratio: float = 0.78

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        object.__setattr__(self, "particle_kind", ParticleKind(self.particle_kind))
        for name in ("width", "height"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer")
        area = self.width * self.height
        if self.budget is not None:
            if self.budget < 1:
                raise ValueError("budget must be positive")
            if self.budget > area:
                raise ValueError(
                    f"budget {self.budget} exceeds the {self.width}x{self.height} grid"
                )
        if self.kind is GeneratorKind.RECTANGLE and self.budget not in (None, area):
            raise ValueError("a rectangle's budget must equal width x height")
        if self.kind is not GeneratorKind.RECTANGLE and self.budget is None:
            raise ValueError(f"{self.kind.value} worlds need a free-cell budget")
        if self.targets < 0:
            raise ValueError("targets must not be negative")
        if self.targets > self.free_cells:
            raise ValueError("more target cells than free cells")
        if self.particles is not None:
            if self.particles < 0:
                raise ValueError("particles must not be negative")
            if self.particles > self.free_cells - self.targets:
                raise ValueError("more particles than free non-target cells")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.depth < 0 or self.trunk_width < 1:
            raise ValueError("depth must be >= 0 and trunk_width >= 1")
        if not 0 < self.length_ratio <= 1:
            raise ValueError("length_ratio must be in (0, 1]")

    @property
    def free_cells(self) -> int:
        return self.width * self.height if self.budget is None else self.budget

    @classmethod
    def parse(cls, text: str, *, seed: int | None = None) -> "GeneratorSpec":
        """Decode ``kind:key=value,...``, e.g. ``random-polyomino:width=8,height=8,budget=30``."""

        kind_text, _, options = text.strip().partition(":")
        try:
            kind = GeneratorKind(kind_text)
        except ValueError as exc:
            choices = ", ".join(kind.value for kind in GeneratorKind)
            raise ValueError(f"unknown generator {kind_text!r}; expected one of {choices}") from exc
        known = {field.name: field for field in fields(cls)}
        values: dict[str, Any] = {}
        for item in filter(None, (part.strip() for part in options.split(","))):
            key, sep, raw = item.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in known or key == "kind":
                raise ValueError(f"unknown generator option {item!r}")
            values[key] = _coerce_option(key, raw.strip())
        if "width" not in values or "height" not in values:
            raise ValueError("generator spec needs width and height")
        if seed is not None:
            values["seed"] = seed
        return cls(kind=kind, **values)

    def to_token(self) -> str:
        defaults = GeneratorSpec(GeneratorKind.RECTANGLE, 1, 1)
        options = [f"width={self.width}", f"height={self.height}"]
        for name in ("budget", "seed", "particles", "targets", "particle_kind", "depth",
                     "trunk_width", "branch_angle", "length_ratio"):
            value = getattr(self, name)
            if value != getattr(defaults, name):
                rendered = value.value if isinstance(value, Enum) else value
                options.append(f"{name}={rendered}")
        return f"{self.kind.value}:" + ",".join(options)

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return replace(self, seed=seed)


def _coerce_option(key: str, raw: str) -> Any:
    if key in ("branch_angle", "length_ratio"):
        return float(raw)
    if key == "particle_kind":
        return ParticleKind(raw)
    if key in ("budget", "particles") and raw.lower() in ("", "none", "all"):
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"generator option {key} expects an integer, got {raw!r}") from exc


def _carve_randomly(
    mask: np.ndarray, budget: int, rng: SeededRandom, seeds: list[Cell]
) -> None:
    """Grow the carved region one random frontier cell at a time."""

    height, width = mask.shape
    carved = int(mask.sum())
    frontier: list[Cell] = []
    queued: set[Cell] = set()

    def offer(cell: Cell) -> None:
        for dx, dy in DIRECTION_DELTAS:
            x, y = cell.x + dx, cell.y + dy
            if 0 <= x < width and 0 <= y < height and not mask[y, x]:
                candidate = Cell(x, y)
                if candidate not in queued:
                    queued.add(candidate)
                    frontier.append(candidate)

    for cell in seeds:
        offer(cell)
    while carved < budget and frontier:
        index = rng.below(len(frontier))
        frontier[index], frontier[-1] = frontier[-1], frontier[index]
        cell = frontier.pop()
        mask[cell.y, cell.x] = True
        carved += 1
        offer(cell)


def _random_polyomino(spec: GeneratorSpec, rng: SeededRandom) -> np.ndarray:
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    start = Cell(spec.width // 2, spec.height // 2)
    mask[start.y, start.x] = True
    _carve_randomly(mask, spec.free_cells, rng, [start])
    return mask


def _brush(mask: np.ndarray, centre: Cell, size: int) -> None:
    height, width = mask.shape
    low = (size - 1) // 2
    y0, y1 = max(0, centre.y - low), min(height, centre.y - low + size)
    x0, x1 = max(0, centre.x - low), min(width, centre.x - low + size)
    mask[y0:y1, x0:x1] = True


def _vascular_tree(spec: GeneratorSpec, rng: SeededRandom) -> tuple[np.ndarray, Cell]:
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    root = Cell(spec.width // 2, spec.height - 1)
    _brush(mask, root, spec.trunk_width)

    def clamp(value: float, upper: int) -> int:
        return min(max(math.floor(value + 0.5), 0), upper - 1)

    def segment(start: Cell, angle: float, length: int, size: int, depth: int) -> None:
        radians = math.radians(angle)
        here = start
        for step in range(1, length + 1):
            x = clamp(start.x + step * math.cos(radians), spec.width)
            y = clamp(start.y - step * math.sin(radians), spec.height)
            if x != here.x and y != here.y:
                # Diagonal step: paint the elbow so the vessel stays 4-connected.
                _brush(mask, Cell(x, here.y), size)
            here = Cell(x, y)
            _brush(mask, here, size)
        if depth == 0:
            return
        child_length = max(2, math.floor(length * spec.length_ratio))
        child_size = max(1, size - 1) if depth % 2 == 0 else size
        for side in (1.0, -1.0):
            jitter = (rng.uniform() - 0.5) * spec.branch_angle * 0.5
            segment(here, angle + side * spec.branch_angle + jitter, child_length, child_size, depth - 1)

    trunk = max(3, math.floor(spec.height * 0.3))
    segment(root, 90.0, trunk, spec.trunk_width, spec.depth)

    budget = spec.free_cells
    if int(mask.sum()) < budget:
        grown = [Cell(int(x), int(y)) for y, x in zip(*np.nonzero(mask))]
        _carve_randomly(mask, budget, rng, grown)
    return mask, root


def _bfs_prefix(mask: np.ndarray, start: Cell, budget: int) -> np.ndarray:
    """Keep the first ``budget`` cells reached from ``start``."""

    workspace = Workspace(mask)
    kept = np.zeros_like(mask)
    for count, cell in enumerate(iter_bfs_order(workspace, start)):
        if count == budget:
            break
        kept[cell.y, cell.x] = True
    return kept


def generate_world(spec: GeneratorSpec) -> tuple[Workspace, Configuration]:
    """Build the world described by ``spec``.

    Raises :class:`ValueError` when the grid cannot hold a connected region of
    the requested size.
    """

    rng = SeededRandom(spec.seed)
    budget = spec.free_cells
    if spec.kind is GeneratorKind.RECTANGLE:
        mask = np.ones((spec.height, spec.width), dtype=bool)
        anchor = Cell(0, 0)
    elif spec.kind is GeneratorKind.RANDOM_POLYOMINO:
        mask = _random_polyomino(spec, rng)
        anchor = Cell(spec.width // 2, spec.height // 2)
    else:
        mask, anchor = _vascular_tree(spec, rng)
    if int(mask.sum()) > budget:
        mask = _bfs_prefix(mask, anchor, budget)
    carved = int(mask.sum())
    if carved != budget:
        raise ValueError(
            f"could only carve {carved} of {budget} free cells in a "
            f"{spec.width}x{spec.height} grid"
        )

    free_cells = Workspace(mask).free_cells
    target: list[Cell] = []
    if spec.targets:
        start = rng.choice(free_cells)
        for cell in iter_bfs_order(Workspace(mask), start):
            if len(target) == spec.targets:
                break
            target.append(cell)
    workspace = Workspace(mask, target=target)

    candidates = [cell for cell in workspace.free_cells if cell not in workspace.target]
    if spec.particles is None:
        placed = candidates
    else:
        placed = rng.sample(candidates, spec.particles)
    if spec.particle_kind is ParticleKind.LARGE:
        configuration = Configuration.large(placed)
    else:
        configuration = Configuration.small(placed)
    logger.debug(
        "generated %s: %d free cells, %d particles, %d target cells",
        spec.kind.value,
        workspace.free_count,
        len(configuration),
        len(workspace.target),
    )
    return workspace, configuration


__all__ = ["GeneratorKind", "GeneratorSpec", "generate_world"]
