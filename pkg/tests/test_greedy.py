"""Tests for pairwise greedy collection and the pair strategies."""

from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import make_world, worlds_with_particles
from gridswarm.dynamics import (
    Configuration,
    apply_sequence,
    format_commands,
    is_collected,
)
from gridswarm.errors import CollectBudgetExceededError, InfeasibleError
from gridswarm.greedy import (
    BENCH_STRATEGIES,
    Strategy,
    StrategyKind,
    collect_ab,
    greedy_collect,
    select_pair,
    shortest_control_sequence,
    strategies_from_tokens,
)
from gridswarm.optimal import optimal_collect
from gridswarm.rng import SeededRandom
from gridswarm.workspace import Cell, Workspace

ALL_STRATEGIES = [
    Strategy(StrategyKind.CLOSEST),
    Strategy(StrategyKind.FURTHEST),
    Strategy(StrategyKind.FIRST),
    Strategy(StrategyKind.RANDOM, seed=7),
    Strategy(StrategyKind.FIRST_TO_LAST),
]

strategies = st.sampled_from(ALL_STRATEGIES)


def _small(*pairs: tuple[int, int]) -> Configuration:
    return Configuration.small(Cell(*pair) for pair in pairs)


def test_shortest_control_sequence_examples(open_3x3: Workspace) -> None:
    assert shortest_control_sequence(open_3x3, Cell(1, 1), Cell(1, 1)) == ()
    assert format_commands(shortest_control_sequence(open_3x3, Cell(0, 0), Cell(2, 0))) == "rr"


def test_shortest_control_sequence_detours_around_obstacles() -> None:
    workspace, _ = make_world(
        """
        .#.
        ...
        ...
        """
    )

    commands = shortest_control_sequence(workspace, Cell(0, 0), Cell(2, 0))

    assert format_commands(commands) == "drru"


def test_shortest_control_sequence_unreachable_goal() -> None:
    workspace, _ = make_world(".#.\n")

    with pytest.raises(InfeasibleError):
        shortest_control_sequence(workspace, Cell(0, 0), Cell(2, 0))


def test_collect_ab_same_cell_is_a_no_op(open_3x3: Workspace) -> None:
    configuration = _small((0, 0), (2, 2))

    result = collect_ab(open_3x3, configuration, Cell(0, 0), Cell(0, 0))

    assert result.commands == ()
    assert result.configuration == configuration


def test_collect_ab_opposite_corners(open_3x3: Workspace) -> None:
    result = collect_ab(open_3x3, _small((0, 0), (2, 2)), Cell(0, 0), Cell(2, 2))

    assert len(result.commands) == 4
    assert result.distance_trace == (4, 0)
    assert result.meeting_cell == Cell(2, 2)
    assert result.configuration.positions == {Cell(2, 2)}


def test_collect_ab_pins_partner_against_wall() -> None:
    corridor = Workspace.rectangle(4, 1)

    result = collect_ab(corridor, _small((0, 0), (3, 0)), Cell(0, 0), Cell(3, 0))

    assert format_commands(result.commands) == "rrr"
    assert result.distance_trace == (3, 0)


def test_collect_ab_requires_occupied_cells(open_3x3: Workspace) -> None:
    with pytest.raises(ValueError):
        collect_ab(open_3x3, _small((0, 0)), Cell(0, 0), Cell(2, 2))


def test_collect_ab_respects_command_limit(open_3x3: Workspace) -> None:
    with pytest.raises(CollectBudgetExceededError) as excinfo:
        collect_ab(open_3x3, _small((0, 0), (2, 2)), Cell(0, 0), Cell(2, 2), command_limit=2)

    assert excinfo.value.budget == 2
    assert excinfo.value.used == 2
    assert excinfo.value.factor_is_default


def test_greedy_collect_single_position_needs_nothing(open_3x3: Workspace) -> None:
    result = greedy_collect(open_3x3, _small((1, 1)), Strategy(StrategyKind.FIRST))

    assert result.commands == ()
    assert result.trace == ()


def test_connect_to_first_picks_row_major_pair(open_3x3: Workspace) -> None:
    result = greedy_collect(open_3x3, _small((0, 0), (2, 0), (2, 2)), Strategy(StrategyKind.FIRST))

    assert result.trace[0].pair == (Cell(0, 0), Cell(2, 0))


def test_closest_pair_is_merged_first(open_3x3: Workspace) -> None:
    result = greedy_collect(
        open_3x3, _small((0, 0), (0, 1), (2, 2)), Strategy(StrategyKind.CLOSEST)
    )

    assert result.trace[0].pair == (Cell(0, 0), Cell(0, 1))
    assert result.trace[0].planned_length == 1


@pytest.mark.parametrize("strategy", ALL_STRATEGIES, ids=lambda strategy: strategy.token)
def test_single_pair_is_always_selected(strategy: Strategy) -> None:
    workspace = Workspace.rectangle(6, 6)

    pair = select_pair(_small((0, 0), (5, 5)), strategy, workspace)

    assert pair == (Cell(0, 0), Cell(5, 5))


def test_furthest_pair_example() -> None:
    workspace = Workspace.rectangle(10, 10)

    pair = select_pair(_small((0, 0), (0, 1), (9, 9)), Strategy(StrategyKind.FURTHEST), workspace)

    assert pair == (Cell(0, 0), Cell(9, 9))


def test_furthest_pair_ties_keep_row_major_order() -> None:
    workspace = Workspace.rectangle(3, 3)

    pair = select_pair(
        _small((0, 0), (2, 0), (0, 2), (2, 2)), Strategy(StrategyKind.FURTHEST), workspace
    )

    assert pair == (Cell(0, 0), Cell(2, 2))


def test_first_to_last_uses_row_major_extremes() -> None:
    workspace = Workspace.rectangle(4, 3)

    pair = select_pair(
        _small((3, 0), (0, 1), (2, 2)), Strategy(StrategyKind.FIRST_TO_LAST), workspace
    )

    assert pair == (Cell(3, 0), Cell(2, 2))


def test_closest_pair_ties_keep_row_major_order() -> None:
    workspace = Workspace.rectangle(5, 1)

    pair = select_pair(_small((0, 0), (2, 0), (4, 0)), Strategy(StrategyKind.CLOSEST), workspace)

    assert pair == (Cell(0, 0), Cell(2, 0))


def test_random_pair_follows_its_stream() -> None:
    workspace = Workspace.rectangle(4, 4)
    configuration = _small((0, 0), (1, 1), (2, 2), (3, 3))
    ordered = configuration.sorted_positions()
    strategy = Strategy(StrategyKind.RANDOM, seed=11)

    first, second = SeededRandom(11).pair_indices(len(ordered))

    assert select_pair(configuration, strategy, workspace) == (ordered[first], ordered[second])


def test_select_pair_needs_two_positions(open_3x3: Workspace) -> None:
    with pytest.raises(ValueError):
        select_pair(_small((0, 0)), Strategy(StrategyKind.FIRST), open_3x3)


@pytest.mark.parametrize(
    ("token", "expected"),
    [
        ("closest", Strategy(StrategyKind.CLOSEST)),
        ("furthest", Strategy(StrategyKind.FURTHEST)),
        ("first", Strategy(StrategyKind.FIRST)),
        ("firstlast", Strategy(StrategyKind.FIRST_TO_LAST)),
        ("random:42", Strategy(StrategyKind.RANDOM, seed=42)),
    ],
)
def test_strategy_tokens_round_trip(token: str, expected: Strategy) -> None:
    assert Strategy.parse(token) == expected
    assert expected.token == token


@pytest.mark.parametrize("token", ["random", "random:x", "first:3", "nearest", "random:-1"])
def test_bad_strategy_tokens_are_rejected(token: str) -> None:
    with pytest.raises(ValueError):
        Strategy.parse(token)


def test_random_strategy_requires_seed() -> None:
    with pytest.raises(ValueError):
        Strategy(StrategyKind.RANDOM)
    with pytest.raises(ValueError):
        Strategy(StrategyKind.FIRST, seed=3)
    with pytest.raises(ValueError):
        Strategy(StrategyKind.RANDOM, seed=1 << 64)


def test_benchmark_strategies() -> None:
    assert [strategy.token for strategy in BENCH_STRATEGIES] == ["closest", "furthest", "first"]
    assert strategies_from_tokens(["first", "random:1"])[1].seed == 1


def test_tiny_bound_factor_raises_budget_error(open_3x3: Workspace) -> None:
    with pytest.raises(CollectBudgetExceededError) as excinfo:
        greedy_collect(
            open_3x3, _small((0, 0), (2, 2)), Strategy(StrategyKind.FIRST), bound_factor=0.001
        )

    assert not excinfo.value.factor_is_default


def test_disconnected_workspace_is_infeasible() -> None:
    workspace, configuration = make_world("o#o\n")

    with pytest.raises(InfeasibleError):
        greedy_collect(workspace, configuration, Strategy(StrategyKind.FIRST))


@settings(max_examples=200, deadline=None)
@given(worlds_with_particles(max_side=8, max_particles=10, min_particles=2), strategies)
def test_greedy_collects_within_bounds(
    world: tuple[Workspace, Configuration], strategy: Strategy
) -> None:
    workspace, configuration = world
    assume(len(configuration) >= 2)

    result = greedy_collect(workspace, configuration, strategy)

    replayed = apply_sequence(workspace, configuration, result.commands)
    assert is_collected(replayed)
    assert replayed == result.configuration
    assert result.move_count <= len(configuration) * workspace.n**3
    counts = [len(configuration)] + [step.distinct_positions for step in result.trace]
    assert all(later < earlier for earlier, later in zip(counts, counts[1:]))
    if result.trace:
        assert result.trace[-1].commands_so_far == result.move_count


@settings(max_examples=120, deadline=None)
@given(worlds_with_particles(min_particles=2), st.data())
def test_pair_distance_never_increases(
    world: tuple[Workspace, Configuration], data: st.DataObject
) -> None:
    workspace, configuration = world
    assume(len(configuration) >= 2)
    ordered = configuration.sorted_positions()
    a, b = data.draw(st.permutations(ordered))[:2]

    result = collect_ab(workspace, configuration, a, b)

    trace = result.distance_trace
    assert trace[-1] == 0
    assert all(later <= earlier for earlier, later in zip(trace, trace[1:]))
    assert len(result.commands) <= workspace.n**3
    assert len(result.configuration) < len(configuration)


@settings(max_examples=60, deadline=None)
@given(worlds_with_particles(max_side=4, max_particles=4), strategies)
def test_greedy_is_never_shorter_than_optimal(
    world: tuple[Workspace, Configuration], strategy: Strategy
) -> None:
    workspace, configuration = world

    greedy = greedy_collect(workspace, configuration, strategy)
    optimal = optimal_collect(workspace, configuration)

    assert greedy.move_count >= optimal.move_count


@settings(max_examples=60, deadline=None)
@given(worlds_with_particles(max_particles=8), strategies)
def test_greedy_is_deterministic(
    world: tuple[Workspace, Configuration], strategy: Strategy
) -> None:
    workspace, configuration = world

    first = greedy_collect(workspace, configuration, strategy)
    second = greedy_collect(workspace, configuration, strategy)

    assert format_commands(first.commands) == format_commands(second.commands)
    assert first.trace == second.trace
