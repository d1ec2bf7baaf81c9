"""Helpers for stepping through command sequences during tests and rendering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dynamics import Configuration, Move, MoveMode, apply_move
from .sticky import StickyState, sticky_step
from .workspace import Workspace, row_major
from .worldmap import serialize_world


@dataclass(frozen=True)
class StepResult:
    """Configuration after ``index`` commands; ``command`` is ``None`` at the start."""

    index: int
    command: Move | None
    configuration: Configuration
    absorbed_count: int = 0


@dataclass(frozen=True)
class ConfigurationSnapshot:
    """Deterministic summary of a configuration for assertions."""

    kind: str
    positions: tuple[tuple[int, int], ...]
    distinct: int


__all__ = [
    "ConfigurationSnapshot",
    "StepResult",
    "debug_snapshot",
    "render_configuration",
    "step_through",
    "step_through_sticky",
]


def step_through(
    workspace: Workspace,
    c0: Configuration,
    commands: Sequence[Move],
    mode: MoveMode = MoveMode.DISCRETE,
) -> tuple[StepResult, ...]:
    """Return the initial configuration followed by one entry per command."""

    results = [StepResult(index=0, command=None, configuration=c0)]
    current = c0
    for index, move in enumerate(commands, start=1):
        current = apply_move(workspace, current, move, mode)
        results.append(StepResult(index=index, command=move, configuration=current))
    return tuple(results)


def step_through_sticky(
    workspace: Workspace,
    c0: Configuration,
    commands: Sequence[Move],
) -> tuple[StepResult, ...]:
    """Like :func:`step_through` with the workspace's target cells absorbing."""

    state = StickyState.initial(c0, workspace.target)
    results = [
        StepResult(
            index=0,
            command=None,
            configuration=state.as_configuration(),
            absorbed_count=state.absorbed_count,
        )
    ]
    for index, move in enumerate(commands, start=1):
        state = sticky_step(workspace, state, move)
        results.append(
            StepResult(
                index=index,
                command=move,
                configuration=state.as_configuration(),
                absorbed_count=state.absorbed_count,
            )
        )
    return tuple(results)


def debug_snapshot(configuration: Configuration) -> ConfigurationSnapshot:
    return ConfigurationSnapshot(
        kind=configuration.kind.value,
        positions=tuple(
            (cell.x, cell.y) for cell in sorted(configuration.positions, key=row_major)
        ),
        distinct=len(configuration.positions),
    )


def render_configuration(workspace: Workspace, configuration: Configuration) -> str:
    """Map text of ``workspace`` with ``configuration`` drawn in."""

    return serialize_world(workspace, configuration)
