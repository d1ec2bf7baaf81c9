"""Command-line front end: ``gridswarm collect|generate|bench|corpus|worlds``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import NoReturn, Sequence

from dotenv import load_dotenv

from .bench import (
    DEFAULT_ALGORITHMS,
    PRESETS,
    AlgorithmSpec,
    CorpusWorld,
    RunLimits,
    build_preset_corpus,
    format_experiment_summary,
    load_corpus,
    run_experiment,
    run_single,
    write_corpus,
)
from .corpus import WorldNotFoundError, list_bundled_worlds, load_bundled_world
from .dynamics import Configuration, MoveMode, ParticleKind, parse_commands
from .errors import BudgetExceededError, InfeasibleError
from .frames import DEFAULT_PALETTE, HIGH_CONTRAST_PALETTE, emit_frames
from .generators import GeneratorSpec, generate_world
from .greedy import Strategy, StrategyKind
from .reports import AlgorithmName, RunStatus
from .settings import GridSwarmSettings
from .workspace import Workspace
from .worldmap import load_world, save_world

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3

_BUNDLED_PREFIX = "bundled:"


class _UsageErrorParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit status."""

    load_dotenv(override=False)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = GridSwarmSettings.from_env()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=args.log_level or settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return int(args.handler(args, settings))
    except InfeasibleError as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _limits(args: argparse.Namespace, settings: GridSwarmSettings) -> RunLimits:
    return RunLimits(
        node_budget=args.node_budget or settings.node_budget,
        bound_factor=args.bound_factor or settings.bound_factor,
        sticky_factor=args.sticky_factor or settings.sticky_factor,
        record_timing=args.record_timing or settings.record_timing,
    )


def _load_world_argument(value: str, kind: ParticleKind) -> tuple[str, Workspace, Configuration]:
    if value.startswith(_BUNDLED_PREFIX):
        world_id = value[len(_BUNDLED_PREFIX) :]
        try:
            workspace, configuration = load_bundled_world(world_id, kind)
        except WorldNotFoundError as exc:
            raise ValueError(f"unknown bundled world {world_id!r}") from exc
        return world_id, workspace, configuration
    path = Path(value)
    workspace, configuration = load_world(path, kind=kind)
    return path.stem, workspace, configuration


def _algorithm_from_args(args: argparse.Namespace) -> AlgorithmSpec:
    algorithm = AlgorithmName(args.algorithm)
    mode = MoveMode(args.mode)
    if algorithm is AlgorithmName.GREEDY:
        token = args.strategy or "first"
        if token == StrategyKind.RANDOM.value:
            token = f"random:{args.seed}"
        return AlgorithmSpec(algorithm, strategy=Strategy.parse(token), mode=mode)
    if args.strategy:
        raise ValueError(f"--strategy applies to greedy runs only, not {algorithm.value}")
    return AlgorithmSpec(algorithm, mode=mode)


def _run_collect(args: argparse.Namespace, settings: GridSwarmSettings) -> int:
    spec = _algorithm_from_args(args)
    kind = ParticleKind(args.kind) if args.kind else spec.kind
    if kind is not spec.kind:
        raise ValueError(f"{spec.algorithm.value} collection needs {spec.kind.value} particles")
    world_id, workspace, configuration = _load_world_argument(args.world, kind)

    report = run_single(CorpusWorld(world_id, workspace, configuration), spec, _limits(args, settings))
    if args.json:
        path = Path(args.json)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json(), encoding="utf-8", newline="\n")
    if report.status is RunStatus.INFEASIBLE:
        raise InfeasibleError(report.message or "no collecting sequence exists")
    if report.status is RunStatus.BUDGET_EXCEEDED:
        print(f"error: budget exceeded: {report.message}", file=sys.stderr)
        return EXIT_BUDGET
    if report.status is not RunStatus.OK:
        raise ValueError(report.message or "run failed")

    if args.frames:
        palette = HIGH_CONTRAST_PALETTE if args.high_contrast else DEFAULT_PALETTE
        emit_frames(
            workspace,
            configuration,
            parse_commands(report.commands),
            Path(args.frames),
            mode=spec.mode,
            sticky=spec.algorithm is AlgorithmName.STICKY,
            palette=palette,
        )
    details = f", {report.nodes_expanded} nodes expanded" if report.nodes_expanded else ""
    print(f"{spec.token}: {report.move_count} moves ({report.commands or '-'}){details}")
    return EXIT_OK


def _run_generate(args: argparse.Namespace, settings: GridSwarmSettings) -> int:
    spec = GeneratorSpec.parse(args.spec, seed=args.seed)
    workspace, configuration = generate_world(spec)
    path = save_world(Path(args.out), workspace, configuration)
    print(f"Wrote {workspace.free_count}-cell {spec.kind.value} world to {path}")
    return EXIT_OK


def _run_bench(args: argparse.Namespace, settings: GridSwarmSettings) -> int:
    corpus = load_corpus(Path(args.corpus))
    if args.algorithms:
        algorithms = tuple(AlgorithmSpec.parse(token) for token in args.algorithms)
    else:
        algorithms = DEFAULT_ALGORITHMS
    result = run_experiment(
        corpus,
        algorithms,
        Path(args.out),
        reports_dir=Path(args.reports) if args.reports else None,
        limits=_limits(args, settings),
        workers=args.workers or settings.workers,
    )
    if args.summary:
        print(format_experiment_summary(result))
    print(f"Wrote {len(result.reports)} rows to {result.csv_path}")
    return EXIT_OK


def _run_corpus(args: argparse.Namespace, settings: GridSwarmSettings) -> int:
    worlds = build_preset_corpus(args.preset, seed=args.seed)
    paths = write_corpus(worlds, Path(args.out))
    print(f"Wrote {len(paths)} {args.preset} worlds to {args.out}")
    return EXIT_OK


def _run_worlds(args: argparse.Namespace, settings: GridSwarmSettings) -> int:
    for world in list_bundled_worlds():
        flag = " (best effort)" if world.best_effort else ""
        print(f"{world.world_id}: {world.name} [{world.kind.value}]{flag}")
    return EXIT_OK


def _add_limit_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--node-budget", type=int, help="Maximum search nodes for optimal runs.")
    parser.add_argument(
        "--bound-factor", type=float, help="Multiplier on the n³ and m·n³ greedy command bounds."
    )
    parser.add_argument(
        "--sticky-factor", type=float, help="Multiplier on the m·D sticky command bound."
    )
    parser.add_argument(
        "--record-timing",
        action="store_true",
        help="Write wall-clock timings (outputs are no longer byte-reproducible).",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = _UsageErrorParser(
        prog="gridswarm",
        description="Collect particle swarms under global control on grid worlds.",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="Logging verbosity (defaults to GRIDSWARM_LOG_LEVEL or WARNING).",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_UsageErrorParser)

    collect = commands.add_parser("collect", help="Run one collector on one world.")
    collect.add_argument(
        "--world", required=True, help="Map file, or bundled:<id> for a bundled world."
    )
    collect.add_argument(
        "--algorithm", required=True, choices=[name.value for name in AlgorithmName]
    )
    collect.add_argument(
        "--strategy", help="Greedy pair strategy: closest, furthest, first, random[:seed], firstlast."
    )
    collect.add_argument("--mode", default=MoveMode.DISCRETE.value, choices=[mode.value for mode in MoveMode])
    collect.add_argument("--kind", choices=[kind.value for kind in ParticleKind])
    collect.add_argument("--seed", type=int, default=0, help="Seed for --strategy random.")
    collect.add_argument("--frames", help="Directory receiving one SVG frame per step.")
    collect.add_argument("--json", help="Path of the JSON run report.")
    collect.add_argument("--high-contrast", action="store_true", help="Use the high-contrast frame palette.")
    _add_limit_flags(collect)
    collect.set_defaults(handler=_run_collect)

    generate = commands.add_parser("generate", help="Generate a world from a generator spec.")
    generate.add_argument(
        "--spec",
        required=True,
        help="e.g. random-polyomino:width=8,height=8,budget=30",
    )
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--out", required=True, help="Destination map file.")
    generate.set_defaults(handler=_run_generate)

    bench = commands.add_parser("bench", help="Run collectors over a corpus directory.")
    bench.add_argument("--corpus", required=True, help="Directory of *.map files.")
    bench.add_argument("--out", required=True, help="Destination CSV file.")
    bench.add_argument(
        "--algorithms",
        nargs="+",
        help="Collector tokens such as optimal, optimal:maximal, greedy:first, sticky.",
    )
    bench.add_argument("--reports", help="Directory receiving per-run JSON reports.")
    bench.add_argument("--workers", type=int, help="Worker processes (defaults to GRIDSWARM_WORKERS).")
    bench.add_argument("--summary", action="store_true", help="Print the experiment summary.")
    _add_limit_flags(bench)
    bench.set_defaults(handler=_run_bench)

    corpus = commands.add_parser("corpus", help="Write a preset experiment corpus.")
    corpus.add_argument("--preset", required=True, choices=PRESETS)
    corpus.add_argument("--out", required=True, help="Destination directory.")
    corpus.add_argument("--seed", type=int, default=0)
    corpus.set_defaults(handler=_run_corpus)

    worlds = commands.add_parser("worlds", help="List the bundled worlds.")
    worlds.set_defaults(handler=_run_worlds)
    return parser


if __name__ == "__main__":  # pragma: no cover - module executable
    raise SystemExit(main())
