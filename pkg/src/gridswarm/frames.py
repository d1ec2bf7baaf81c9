"""SVG frames of a command sequence, one file per step."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .dynamics import Configuration, Move, MoveMode, format_commands
from .testing_toolkit import StepResult, step_through, step_through_sticky
from .workspace import Workspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FramePalette:
    """Fill colours used when drawing a frame."""

    obstacle: str = "#37474f"
    free: str = "#eceff1"
    target: str = "#a5d6a7"
    particle: str = "#e65100"
    grid_line: str = "#b0bec5"
    text: str = "#263238"


DEFAULT_PALETTE = FramePalette()
"""Muted palette for documentation figures."""

HIGH_CONTRAST_PALETTE = FramePalette(
    obstacle="#000000",
    free="#ffffff",
    target="#00c853",
    particle="#d50000",
    grid_line="#000000",
    text="#000000",
)
"""Palette with maximal contrast between cell states."""


def render_frame(
    workspace: Workspace,
    step: StepResult,
    *,
    palette: FramePalette = DEFAULT_PALETTE,
    cell_size: int = 16,
) -> str:
    """Return the SVG document for one step."""

    width = workspace.width * cell_size
    height = workspace.height * cell_size
    caption = 14
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height + caption}" viewBox="0 0 {width} {height + caption}">'
    ]
    mask = workspace.free_mask
    for y in range(workspace.height):
        for x in range(workspace.width):
            if not mask[y, x]:
                fill = palette.obstacle
            elif (x, y) in workspace.target:
                fill = palette.target
            else:
                fill = palette.free
            lines.append(
                f'<rect x="{x * cell_size}" y="{y * cell_size}" width="{cell_size}" '
                f'height="{cell_size}" fill="{fill}" stroke="{palette.grid_line}" '
                'stroke-width="0.5"/>'
            )
    radius = cell_size * 0.35
    for cell in step.configuration.sorted_positions():
        cx = (cell.x + 0.5) * cell_size
        cy = (cell.y + 0.5) * cell_size
        lines.append(
            f'<circle cx="{cx:g}" cy="{cy:g}" r="{radius:g}" fill="{palette.particle}"/>'
        )
    label = f"step {step.index}"
    if step.command is not None:
        label += f" ({step.command.value})"
    label += f" | {len(step.configuration)} positions"
    if step.absorbed_count:
        label += f" | {step.absorbed_count} absorbed"
    lines.append(
        f'<text x="2" y="{height + caption - 3}" font-family="monospace" '
        f'font-size="11" fill="{palette.text}">{label}</text>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_frames(
    workspace: Workspace,
    c0: Configuration,
    commands: Sequence[Move],
    directory: Path,
    *,
    mode: MoveMode = MoveMode.DISCRETE,
    sticky: bool = False,
    palette: FramePalette = DEFAULT_PALETTE,
    cell_size: int = 16,
) -> list[Path]:
    """Write ``frame_0000.svg`` for the start and one frame per command.

    Raises :class:`OSError` when ``directory`` cannot be created or written.
    """

    if cell_size < 1:
        raise ValueError("cell_size must be positive")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if sticky:
        steps = step_through_sticky(workspace, c0, commands)
    else:
        steps = step_through(workspace, c0, commands, mode)
    digits = max(4, len(str(len(commands))))
    written: list[Path] = []
    for step in steps:
        path = directory / f"frame_{step.index:0{digits}d}.svg"
        path.write_text(
            render_frame(workspace, step, palette=palette, cell_size=cell_size),
            encoding="utf-8",
            newline="\n",
        )
        written.append(path)
    logger.info(
        "wrote %d frames for %r to %s", len(written), format_commands(commands), directory
    )
    return written


__all__ = [
    "DEFAULT_PALETTE",
    "FramePalette",
    "HIGH_CONTRAST_PALETTE",
    "emit_frames",
    "render_frame",
]
