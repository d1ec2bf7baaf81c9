"""Plain-text map codec.

One character per cell, rows top to bottom:

``#`` obstacle, ``.`` free, ``o`` free with a particle, ``T`` free target
cell, ``+`` target cell holding a particle.

All rows must have the same width. A single trailing newline is accepted;
carriage returns are rejected so files round-trip byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .dynamics import Configuration, ParticleKind
from .errors import InvalidConfigurationError, WorldFormatError
from .workspace import Cell, Workspace

OBSTACLE = "#"
FREE = "."
PARTICLE = "o"
TARGET = "T"
PARTICLE_ON_TARGET = "+"

_LEGAL = frozenset({OBSTACLE, FREE, PARTICLE, TARGET, PARTICLE_ON_TARGET})


def parse_world(
    text: str, kind: ParticleKind = ParticleKind.SMALL
) -> tuple[Workspace, Configuration]:
    """Decode map ``text`` into a workspace and the initial configuration."""

    if "\r" in text:
        raise WorldFormatError("carriage returns are not allowed in map files")
    body = text[:-1] if text.endswith("\n") else text
    if not body:
        raise WorldFormatError("map is empty")
    rows = body.split("\n")
    width = len(rows[0])
    if width == 0:
        raise WorldFormatError("map rows must not be empty", line=1)

    free = np.zeros((len(rows), width), dtype=bool)
    particles: list[Cell] = []
    target: list[Cell] = []
    for y, row in enumerate(rows):
        if len(row) != width:
            raise WorldFormatError(
                f"row has width {len(row)}; expected {width}", line=y + 1
            )
        for x, symbol in enumerate(row):
            if symbol not in _LEGAL:
                raise WorldFormatError(
                    f"illegal character {symbol!r}", line=y + 1, column=x + 1
                )
            if symbol == OBSTACLE:
                continue
            free[y, x] = True
            cell = Cell(x, y)
            if symbol in (PARTICLE, PARTICLE_ON_TARGET):
                particles.append(cell)
            if symbol in (TARGET, PARTICLE_ON_TARGET):
                target.append(cell)
    if not free.any():
        raise WorldFormatError("map has no free cells")

    workspace = Workspace(free, target=target)
    kind = ParticleKind(kind)
    if kind is ParticleKind.LARGE:
        configuration = Configuration.large(particles)
    else:
        configuration = Configuration.small(particles)
    return workspace, configuration


def serialize_world(workspace: Workspace, configuration: Configuration) -> str:
    """Encode ``workspace`` and particle positions; inverse of :func:`parse_world`."""

    configuration.validate(workspace)
    mask = workspace.free_mask
    lines: list[str] = []
    for y in range(workspace.height):
        symbols: list[str] = []
        for x in range(workspace.width):
            cell = Cell(x, y)
            if not mask[y, x]:
                symbols.append(OBSTACLE)
                continue
            occupied = cell in configuration.positions
            targeted = cell in workspace.target
            if occupied and targeted:
                symbols.append(PARTICLE_ON_TARGET)
            elif occupied:
                symbols.append(PARTICLE)
            elif targeted:
                symbols.append(TARGET)
            else:
                symbols.append(FREE)
        lines.append("".join(symbols))
    return "\n".join(lines) + "\n"


def load_world(
    path: Path | str, kind: ParticleKind = ParticleKind.SMALL
) -> tuple[Workspace, Configuration]:
    """Read a map file from disk."""

    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_world(text, kind=kind)
    except WorldFormatError as exc:
        raise WorldFormatError(f"{path}: {exc}") from exc
    except InvalidConfigurationError as exc:
        raise InvalidConfigurationError(f"{path}: {exc}") from exc


def save_world(
    path: Path | str, workspace: Workspace, configuration: Configuration
) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(
        serialize_world(workspace, configuration), encoding="utf-8", newline="\n"
    )
    return target


__all__ = [
    "FREE",
    "OBSTACLE",
    "PARTICLE",
    "PARTICLE_ON_TARGET",
    "TARGET",
    "load_world",
    "parse_world",
    "save_world",
    "serialize_world",
]
