"""Tests for the experiment runner and the preset corpora."""

from __future__ import annotations

from pathlib import Path

import pytest

from gridswarm.bench import (
    DEFAULT_ALGORITHMS,
    PRESETS,
    AlgorithmSpec,
    CorpusWorld,
    RunLimits,
    build_preset_corpus,
    compute_ratios,
    format_experiment_summary,
    load_corpus,
    run_experiment,
    run_single,
    write_corpus,
)
from gridswarm.corpus import load_bundled_world
from gridswarm.dynamics import Configuration, MoveMode, ParticleKind
from gridswarm.greedy import Strategy, StrategyKind
from gridswarm.reports import CSV_COLUMNS, AlgorithmName, ReportStore, RunStatus, read_csv
from gridswarm.workspace import Cell, Workspace


@pytest.fixture
def small_corpus() -> list[CorpusWorld]:
    return [
        CorpusWorld("corners", Workspace.rectangle(3, 3), Configuration.small([Cell(0, 0), Cell(2, 2)])),
        CorpusWorld(
            "corridor",
            Workspace.rectangle(4, 1),
            Configuration.small([Cell(0, 0), Cell(2, 0), Cell(3, 0)]),
        ),
    ]


@pytest.mark.parametrize(
    ("token", "expected"),
    [
        ("optimal", AlgorithmSpec(AlgorithmName.OPTIMAL)),
        ("optimal:maximal", AlgorithmSpec(AlgorithmName.OPTIMAL, mode=MoveMode.MAXIMAL)),
        ("greedy:first", AlgorithmSpec(AlgorithmName.GREEDY, Strategy(StrategyKind.FIRST))),
        (
            "greedy:random:5",
            AlgorithmSpec(AlgorithmName.GREEDY, Strategy(StrategyKind.RANDOM, seed=5)),
        ),
        ("sticky", AlgorithmSpec(AlgorithmName.STICKY)),
    ],
)
def test_algorithm_tokens(token: str, expected: AlgorithmSpec) -> None:
    assert AlgorithmSpec.parse(token) == expected
    assert expected.token == token


@pytest.mark.parametrize("token", ["astar", "greedy:nearest", "sticky:maximal", "optimal:fast"])
def test_bad_algorithm_tokens(token: str) -> None:
    with pytest.raises(ValueError):
        AlgorithmSpec.parse(token)


def test_default_algorithms_are_optimal_and_three_greedy_strategies() -> None:
    assert [spec.token for spec in DEFAULT_ALGORITHMS] == [
        "optimal",
        "greedy:closest",
        "greedy:furthest",
        "greedy:first",
    ]


def test_run_single_reports_success(small_corpus: list[CorpusWorld]) -> None:
    report = run_single(small_corpus[0], AlgorithmSpec.parse("optimal"))

    assert report.status is RunStatus.OK
    assert report.commands == "uurr"
    assert report.move_count == 4
    assert report.nodes_expanded is not None
    assert report.distinct_position_trace[-1] == 1
    assert report.wall_time_ms is None


def test_run_single_records_timing_on_request(small_corpus: list[CorpusWorld]) -> None:
    report = run_single(small_corpus[0], AlgorithmSpec.parse("greedy:first"), RunLimits(record_timing=True))

    assert report.wall_time_ms is not None


def test_run_single_maps_failures_to_status() -> None:
    workspace, configuration = load_bundled_world("split-components")
    world = CorpusWorld("split", workspace, configuration)

    infeasible = run_single(world, AlgorithmSpec.parse("optimal"))
    budget = run_single(
        CorpusWorld("lattice", *load_bundled_world("grid-27")),
        AlgorithmSpec.parse("optimal"),
        RunLimits(node_budget=10),
    )

    assert infeasible.status is RunStatus.INFEASIBLE
    assert budget.status is RunStatus.BUDGET_EXCEEDED
    assert budget.commands == ""


def test_run_single_sticky_uses_large_particles() -> None:
    world = CorpusWorld("corridor-sticky", *load_bundled_world("corridor-sticky"))

    report = run_single(world, AlgorithmSpec.parse("sticky"))

    assert report.kind is ParticleKind.LARGE
    assert report.move_count == 6
    assert report.distinct_position_trace[-1] == 0


def test_empty_corpus_writes_header_only(tmp_path: Path) -> None:
    result = run_experiment([], DEFAULT_ALGORITHMS, tmp_path / "empty.csv")

    assert result.reports == ()
    assert result.csv_path.read_text(encoding="utf-8") == ",".join(CSV_COLUMNS) + "\n"


def test_experiment_writes_rows_and_reports(
    tmp_path: Path, small_corpus: list[CorpusWorld]
) -> None:
    algorithms = [AlgorithmSpec.parse("optimal"), AlgorithmSpec.parse("greedy:first")]

    result = run_experiment(
        small_corpus, algorithms, tmp_path / "runs.csv", reports_dir=tmp_path / "reports"
    )

    rows = read_csv(result.csv_path)
    assert [(row["world_id"], row["algorithm"]) for row in rows] == [
        ("corners", "optimal"),
        ("corners", "greedy"),
        ("corridor", "optimal"),
        ("corridor", "greedy"),
    ]
    assert all(row["status"] == "ok" for row in rows)
    assert rows[0]["ratio_to_optimal"] == ""
    assert float(rows[1]["ratio_to_optimal"]) >= 1.0
    store = ReportStore(tmp_path / "reports")
    assert len(store.list_runs()) == 4
    assert store.load(result.reports[1].run_id) == result.reports[1]


def test_experiment_output_is_byte_reproducible(
    tmp_path: Path, small_corpus: list[CorpusWorld]
) -> None:
    first = run_experiment(small_corpus, DEFAULT_ALGORITHMS, tmp_path / "a.csv")
    second = run_experiment(small_corpus, DEFAULT_ALGORITHMS, tmp_path / "b.csv", workers=2)

    assert first.csv_path.read_bytes() == second.csv_path.read_bytes()


def test_workers_must_be_positive(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        run_experiment([], DEFAULT_ALGORITHMS, tmp_path / "x.csv", workers=0)


def test_compute_ratios_needs_solved_optimum(small_corpus: list[CorpusWorld]) -> None:
    optimal = run_single(small_corpus[0], AlgorithmSpec.parse("optimal"))
    greedy = run_single(small_corpus[0], AlgorithmSpec.parse("greedy:first"))
    orphan = run_single(small_corpus[1], AlgorithmSpec.parse("greedy:first"))

    ratios = compute_ratios([optimal, greedy, orphan])

    assert ratios[0] is None
    assert ratios[1] == greedy.move_count / optimal.move_count
    assert ratios[2] is None


def test_summary_mentions_reference_ratio(tmp_path: Path, small_corpus: list[CorpusWorld]) -> None:
    result = run_experiment(small_corpus, DEFAULT_ALGORITHMS, tmp_path / "runs.csv")

    summary = format_experiment_summary(result)

    assert summary.splitlines()[0] == "Experiment Summary"
    assert "corners: optimal=4" in summary
    assert "Mean greedy:first/optimal ratio:" in summary
    assert "(reference 1.95)" in summary


def test_corpus_round_trip(tmp_path: Path, small_corpus: list[CorpusWorld]) -> None:
    paths = write_corpus(small_corpus, tmp_path / "corpus")

    loaded = load_corpus(tmp_path / "corpus")

    assert [path.name for path in paths] == ["corners.map", "corridor.map"]
    assert loaded == small_corpus


def test_missing_corpus_directory(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "nowhere")


def test_unknown_preset() -> None:
    with pytest.raises(ValueError):
        build_preset_corpus("leaf")


def test_presets_are_reproducible() -> None:
    for name in ("optimal-vs-greedy", "sticky-bound"):
        first = build_preset_corpus(name, seed=3)
        second = build_preset_corpus(name, seed=3)
        assert first == second
    assert set(PRESETS) >= {"node-growth", "vascular", "sticky-scaling"}


def test_optimal_vs_greedy_preset_has_seventeen_connected_worlds() -> None:
    worlds = build_preset_corpus("optimal-vs-greedy")

    assert len(worlds) == 17
    assert all(world.workspace.is_connected for world in worlds)
    budgets = [world.workspace.free_count for world in worlds]
    assert budgets[0] == 5 and budgets[-1] == 30
    assert budgets == sorted(budgets)


def test_node_growth_increases_with_free_cells(tmp_path: Path) -> None:
    corpus = build_preset_corpus("node-growth")

    result = run_experiment(corpus, [AlgorithmSpec.parse("optimal")], tmp_path / "growth.csv")

    pairs = [(report.free_cells, report.nodes_expanded) for report in result.reports]
    assert [free for free, _ in pairs] == sorted(free for free, _ in pairs)
    nodes = [count for _, count in pairs]
    assert all(count is not None for count in nodes)
    assert all(later > earlier for earlier, later in zip(nodes, nodes[1:]))  # type: ignore[operator]
    summary = format_experiment_summary(result)
    growth = nodes[-1] / nodes[0]  # type: ignore[operator]
    assert f"Node growth 6->30 cells: x{growth:.1f}" in summary
    assert "reference 1600000 nodes at 30 cells" in summary


def test_greedy_to_optimal_ratio_on_small_worlds(tmp_path: Path) -> None:
    corpus = [world for world in build_preset_corpus("optimal-vs-greedy") if world.workspace.free_count <= 10]
    algorithms = [AlgorithmSpec.parse("optimal"), AlgorithmSpec.parse("greedy:first")]

    result = run_experiment(corpus, algorithms, tmp_path / "ovg.csv")

    ratios = [ratio for ratio in result.ratios if ratio is not None]
    assert ratios
    assert all(ratio >= 1.0 for ratio in ratios)


@pytest.mark.slow
def test_greedy_to_optimal_ratio_on_full_preset(tmp_path: Path) -> None:
    corpus = build_preset_corpus("optimal-vs-greedy")

    result = run_experiment(corpus, DEFAULT_ALGORITHMS, tmp_path / "ovg.csv", workers=2)

    mean = result.mean_ratio("first")
    assert mean is not None
    assert 1.0 <= mean <= 4.0
    first_ratios = [
        ratio
        for report, ratio in zip(result.reports, result.ratios)
        if report.strategy == "first"
    ]
    assert len(first_ratios) == 17
    assert all(ratio is not None and 1.0 <= ratio <= 4.0 for ratio in first_ratios)
    assert all(ratio >= 1.0 for ratio in result.ratios if ratio is not None)


@pytest.mark.slow
def test_vascular_preset_matches_budgets() -> None:
    worlds = build_preset_corpus("vascular")

    assert [world.workspace.free_count for world in worlds] == [500, 1000, 2000, 4000, 8000]
    assert all(world.workspace.is_connected for world in worlds)


@pytest.mark.slow
def test_greedy_strategies_converge_on_vascular_worlds(tmp_path: Path) -> None:
    corpus = build_preset_corpus("vascular")
    algorithms = [AlgorithmSpec.parse(token) for token in ("greedy:closest", "greedy:furthest", "greedy:first")]

    result = run_experiment(corpus, algorithms, tmp_path / "vascular.csv", workers=3)

    rows = read_csv(result.csv_path)
    assert len(rows) == 15
    assert all(row["status"] == "ok" for row in rows)
    assert all(report.distinct_position_trace[-1] == 1 for report in result.reports)
    summary = format_experiment_summary(result)
    for world in corpus:
        first = next(
            report
            for report in result.reports
            if report.world_id == world.world_id and report.strategy == "first"
        )
        line = next(line for line in summary.splitlines() if line.startswith(f"{world.world_id}: "))
        assert f"greedy:first={first.move_count}" in line


def test_sticky_scaling_summary_reports_normalised_counts(tmp_path: Path) -> None:
    corpus = build_preset_corpus("sticky-scaling")[:2]

    result = run_experiment(corpus, [AlgorithmSpec.parse("sticky")], tmp_path / "sticky.csv")

    assert [report.world_id for report in result.reports] == ["square-fill-09", "square-fill-25"]
    assert all(report.status is RunStatus.OK for report in result.reports)
    summary = format_experiment_summary(result)
    assert "per m^1.5" in summary
    assert "per n^3" in summary
