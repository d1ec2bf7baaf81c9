"""Test configuration for the gridswarm project."""

from __future__ import annotations

from collections.abc import Callable
from textwrap import dedent

import pytest
from hypothesis import strategies as st

from gridswarm.dynamics import Configuration, ParticleKind
from gridswarm.workspace import Cell, Workspace
from gridswarm.worldmap import parse_world


def make_world(
    text: str, kind: ParticleKind = ParticleKind.SMALL
) -> tuple[Workspace, Configuration]:
    """Parse an indented triple-quoted map."""

    return parse_world(dedent(text).strip("\n") + "\n", kind=kind)


@pytest.fixture
def world_factory() -> Callable[..., tuple[Workspace, Configuration]]:
    return make_world


@pytest.fixture
def open_3x3() -> Workspace:
    return Workspace.rectangle(3, 3)


@pytest.fixture
def pillar_3x3() -> Workspace:
    """3×3 grid with a single obstacle in the centre."""

    workspace, _ = make_world(
        """
        ...
        .#.
        ...
        """
    )
    return workspace


@st.composite
def connected_worlds(
    draw: st.DrawFn, max_width: int = 6, max_height: int = 6, min_free: int = 1
) -> Workspace:
    """Random connected workspaces grown from one cell."""

    width = draw(st.integers(min_value=1, max_value=max_width))
    height = draw(st.integers(min_value=1, max_value=max_height))
    area = width * height
    budget = draw(st.integers(min_value=min(min_free, area), max_value=area))
    start = Cell(draw(st.integers(0, width - 1)), draw(st.integers(0, height - 1)))
    carved = {start}
    frontier = [start]
    while len(carved) < budget:
        options = sorted(
            {
                Cell(cell.x + dx, cell.y + dy)
                for cell in frontier
                for dx, dy in ((0, -1), (0, 1), (1, 0), (-1, 0))
                if 0 <= cell.x + dx < width and 0 <= cell.y + dy < height
            }
            - carved
        )
        if not options:
            break
        chosen = draw(st.sampled_from(options))
        carved.add(chosen)
        frontier.append(chosen)
    mask = [[Cell(x, y) in carved for x in range(width)] for y in range(height)]
    return Workspace(mask)


@st.composite
def random_masks(draw: st.DrawFn, max_width: int = 8, max_height: int = 8) -> Workspace:
    """Random workspaces, connected or not, with at least one free cell."""

    width = draw(st.integers(min_value=1, max_value=max_width))
    height = draw(st.integers(min_value=1, max_value=max_height))
    flags = draw(st.lists(st.booleans(), min_size=width * height, max_size=width * height))
    if not any(flags):
        flags[0] = True
    mask = [flags[row * width : (row + 1) * width] for row in range(height)]
    return Workspace(mask)


@st.composite
def worlds_with_particles(
    draw: st.DrawFn,
    *,
    kind: ParticleKind = ParticleKind.SMALL,
    max_side: int = 6,
    max_particles: int = 6,
    min_particles: int = 1,
) -> tuple[Workspace, Configuration]:
    workspace = draw(
        connected_worlds(max_width=max_side, max_height=max_side, min_free=min_particles)
    )
    count = draw(
        st.integers(
            min_value=min(min_particles, workspace.free_count),
            max_value=min(max_particles, workspace.free_count),
        )
    )
    cells = draw(
        st.lists(
            st.sampled_from(workspace.free_cells),
            min_size=count,
            max_size=count,
            unique=True,
        )
    )
    return workspace, Configuration(kind, frozenset(cells))
