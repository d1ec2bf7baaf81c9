"""Run reports: the JSON record of one collector run and its CSV row.

Reports are validated by replaying their command sequence on the world they
name before they are written anywhere.
"""

from __future__ import annotations

import csv
import json
import re
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from pydantic import BaseModel, Field, field_validator

from .dynamics import (
    Configuration,
    MoveMode,
    ParticleKind,
    apply_sequence,
    is_collected,
    parse_commands,
)
from .errors import GridSwarmError
from .sticky import StickyState, sticky_step
from .workspace import Workspace


class RunStatus(str, Enum):
    OK = "ok"
    INFEASIBLE = "infeasible"
    BUDGET_EXCEEDED = "budget_exceeded"
    ERROR = "error"


class AlgorithmName(str, Enum):
    OPTIMAL = "optimal"
    GREEDY = "greedy"
    STICKY = "sticky"


CSV_COLUMNS: tuple[str, ...] = (
    "world_id",
    "free_cells",
    "particles",
    "algorithm",
    "strategy",
    "mode",
    "kind",
    "move_count",
    "nodes_expanded",
    "wall_time_ms",
    "status",
    "ratio_to_optimal",
)


class RunReport(BaseModel):
    """Outcome of one (world, algorithm) run."""

    world_id: str
    algorithm: AlgorithmName
    strategy: str | None = None
    mode: MoveMode = MoveMode.DISCRETE
    kind: ParticleKind = ParticleKind.SMALL
    free_cells: int = Field(..., ge=0)
    particles: int = Field(..., ge=0)
    commands: str = ""
    move_count: int = Field(default=0, ge=0)
    nodes_expanded: int | None = Field(default=None, ge=1)
    distinct_position_trace: list[int] = Field(default_factory=list)
    wall_time_ms: float | None = Field(default=None, ge=0)
    seed: int | None = None
    status: RunStatus = RunStatus.OK
    message: str | None = None

    @field_validator("commands")
    @classmethod
    def _commands_use_move_alphabet(cls, value: str) -> str:
        parse_commands(value)
        return value

    @property
    def run_id(self) -> str:
        parts = [self.world_id, self.algorithm.value]
        if self.strategy:
            parts.append(self.strategy)
        if self.mode is not MoveMode.DISCRETE:
            parts.append(self.mode.value)
        return _slug("__".join(parts))

    def to_json(self) -> str:
        payload = self.model_dump(mode="json")
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.model_validate(json.loads(text))

    def csv_row(self, ratio_to_optimal: float | None = None) -> dict[str, str]:
        def blank(value: object) -> str:
            return "" if value is None else str(value)

        return {
            "world_id": self.world_id,
            "free_cells": str(self.free_cells),
            "particles": str(self.particles),
            "algorithm": self.algorithm.value,
            "strategy": blank(self.strategy),
            "mode": self.mode.value,
            "kind": self.kind.value,
            "move_count": str(self.move_count),
            "nodes_expanded": blank(self.nodes_expanded),
            "wall_time_ms": "" if self.wall_time_ms is None else f"{self.wall_time_ms:.3f}",
            "status": self.status.value,
            "ratio_to_optimal": "" if ratio_to_optimal is None else f"{ratio_to_optimal:.4f}",
        }


class ReplayMismatchError(GridSwarmError):
    """Raised when a report's commands do not reproduce its declared outcome."""


def verify_report(
    report: RunReport, workspace: Workspace, configuration: Configuration
) -> None:
    """Replay ``report`` from ``configuration`` and check the claimed outcome.

    Only successful runs claim an outcome; other statuses are accepted as is.
    """

    if report.status is not RunStatus.OK:
        return
    commands = parse_commands(report.commands)
    if len(commands) != report.move_count:
        raise ReplayMismatchError(
            f"{report.run_id}: move_count {report.move_count} != {len(commands)} commands"
        )
    if report.algorithm is AlgorithmName.STICKY:
        state = StickyState.initial(configuration, workspace.target)
        for move in commands:
            state = sticky_step(workspace, state, move)
        if state.active:
            raise ReplayMismatchError(
                f"{report.run_id}: {len(state.active)} particles remain outside the target"
            )
        return
    final = apply_sequence(workspace, configuration, commands, report.mode)
    if not is_collected(final):
        raise ReplayMismatchError(
            f"{report.run_id}: replay ends with {len(final)} distinct positions"
        )


class ReportStore:
    """Write and read per-run JSON reports in one directory."""

    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def save(self, report: RunReport) -> Path:
        path = self._path(report.run_id)
        path.write_text(report.to_json(), encoding="utf-8", newline="\n")
        return path

    def load(self, run_id: str) -> RunReport:
        path = self._path(run_id)
        if not path.exists():
            raise KeyError(f"Run '{run_id}' does not exist")
        return RunReport.from_json(path.read_text(encoding="utf-8"))

    def list_runs(self) -> list[str]:
        return sorted(path.stem for path in self.directory.glob("*.json") if path.is_file())

    def _path(self, run_id: str) -> Path:
        if not isinstance(run_id, str):
            raise TypeError("run_id must be a string")
        stripped = run_id.strip()
        if not stripped:
            raise ValueError("run_id must be a non-empty string")
        return self.directory / f"{stripped}.json"


def write_csv(
    path: Path,
    reports: Sequence[RunReport],
    ratios: Sequence[float | None] | None = None,
) -> Path:
    """Write one CSV row per report; an empty input still gets the header."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ratio_values: Sequence[float | None] = ratios if ratios is not None else [None] * len(reports)
    if len(ratio_values) != len(reports):
        raise ValueError("ratios must align with reports")
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for report, ratio in zip(reports, ratio_values):
            writer.writerow(report.csv_row(ratio))
    return path


def read_csv(path: Path) -> list[dict[str, str]]:
    with Path(path).open(encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", text)


def reports_by_world(reports: Iterable[RunReport]) -> dict[str, list[RunReport]]:
    grouped: dict[str, list[RunReport]] = {}
    for report in reports:
        grouped.setdefault(report.world_id, []).append(report)
    return grouped


__all__ = [
    "AlgorithmName",
    "CSV_COLUMNS",
    "ReplayMismatchError",
    "ReportStore",
    "RunReport",
    "RunStatus",
    "read_csv",
    "reports_by_world",
    "verify_report",
    "write_csv",
]
