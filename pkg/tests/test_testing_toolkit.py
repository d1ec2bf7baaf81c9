from gridswarm.dynamics import Configuration, Move, MoveMode, ParticleKind, parse_commands
from gridswarm.testing_toolkit import (
    ConfigurationSnapshot,
    StepResult,
    debug_snapshot,
    render_configuration,
    step_through,
    step_through_sticky,
)
from gridswarm.workspace import Cell, Workspace


def test_step_through_records_each_command(open_3x3: Workspace) -> None:
    start = Configuration.small([Cell(0, 0), Cell(2, 2)])

    steps = step_through(open_3x3, start, parse_commands("rr"))

    assert steps[0] == StepResult(index=0, command=None, configuration=start)
    assert [step.command for step in steps[1:]] == [Move.RIGHT, Move.RIGHT]
    assert steps[-1].configuration.positions == {Cell(2, 0), Cell(2, 2)}


def test_step_through_supports_maximal_moves(open_3x3: Workspace) -> None:
    start = Configuration.small([Cell(0, 0), Cell(0, 2)])

    steps = step_through(open_3x3, start, parse_commands("u"), MoveMode.MAXIMAL)

    assert steps[1].configuration.positions == {Cell(0, 0)}


def test_step_through_sticky_tracks_absorption() -> None:
    workspace = Workspace.rectangle(3, 1, target=[Cell(0, 0)])
    start = Configuration(ParticleKind.LARGE, frozenset({Cell(1, 0), Cell(2, 0)}))

    steps = step_through_sticky(workspace, start, parse_commands("ll"))

    assert [step.absorbed_count for step in steps] == [0, 1, 2]
    assert [len(step.configuration) for step in steps] == [2, 1, 0]


def test_debug_snapshot_is_row_major() -> None:
    configuration = Configuration.small([Cell(2, 0), Cell(0, 1), Cell(1, 0)])

    assert debug_snapshot(configuration) == ConfigurationSnapshot(
        kind="small",
        positions=((1, 0), (2, 0), (0, 1)),
        distinct=3,
    )


def test_render_configuration_draws_particles(pillar_3x3: Workspace) -> None:
    configuration = Configuration.small([Cell(0, 0), Cell(2, 2)])

    assert render_configuration(pillar_3x3, configuration) == "o..\n.#.\n..o\n"
