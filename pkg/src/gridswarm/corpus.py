"""Helpers for discovering and loading the bundled example worlds."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from .dynamics import Configuration, ParticleKind
from .workspace import Workspace
from .worldmap import parse_world

logger = logging.getLogger(__name__)


class WorldNotFoundError(KeyError):
    """Raised when a requested bundled world identifier does not exist."""


@dataclass(frozen=True)
class BundledWorld:
    """Manifest entry for one bundled world.

    ``best_effort`` marks maps transcribed from figures; their ``reference``
    numbers are context for comparison, not guarantees.
    """

    world_id: str
    name: str
    summary: str
    map_file: str
    kind: ParticleKind
    best_effort: bool = False
    reference: Mapping[str, int] = field(default_factory=dict)

    def load(self, kind: ParticleKind | None = None) -> tuple[Workspace, Configuration]:
        """Parse the map, reading particles as ``kind`` (the manifest's kind by default)."""

        text = resources.files("gridswarm.data").joinpath(self.map_file).read_text(encoding="utf-8")
        return parse_world(text, kind=self.kind if kind is None else kind)

    def compare_with_reference(self, **measured: int | None) -> list[str]:
        """Return one note per measured value that differs from the reference.

        Differences on best-effort worlds are logged as warnings.
        """

        notes = []
        for key, value in sorted(measured.items()):
            expected = self.reference.get(key)
            if expected is None or value is None or value == expected:
                continue
            notes.append(f"{self.world_id}: {key} {value} differs from reference {expected}")
        if self.best_effort:
            for note in notes:
                logger.warning(note)
        return notes


_MANIFEST_RESOURCE = "worlds.json"
_WORLDS_CACHE: tuple[BundledWorld, ...] | None = None


def _load_manifest() -> Iterable[BundledWorld]:
    global _WORLDS_CACHE
    if _WORLDS_CACHE is not None:
        return _WORLDS_CACHE

    manifest_path = resources.files("gridswarm.data").joinpath(_MANIFEST_RESOURCE)
    manifest_data = json.loads(manifest_path.read_text(encoding="utf-8"))
    worlds: list[BundledWorld] = []

    for entry in manifest_data.get("worlds", []):
        worlds.append(
            BundledWorld(
                world_id=entry["id"],
                name=entry["name"],
                summary=entry["summary"],
                map_file=entry["map_file"],
                kind=ParticleKind(entry.get("kind", "small")),
                best_effort=bool(entry.get("best_effort", False)),
                reference={str(key): int(value) for key, value in entry.get("reference", {}).items()},
            )
        )

    _WORLDS_CACHE = tuple(worlds)
    return _WORLDS_CACHE


def list_bundled_worlds() -> list[BundledWorld]:
    """Return metadata for all bundled worlds."""

    return list(_load_manifest())


def get_bundled_world(world_id: str) -> BundledWorld:
    for world in _load_manifest():
        if world.world_id == world_id:
            return world
    raise WorldNotFoundError(world_id)


def load_bundled_world(
    world_id: str, kind: ParticleKind | None = None
) -> tuple[Workspace, Configuration]:
    return get_bundled_world(world_id).load(kind)


__all__ = [
    "BundledWorld",
    "WorldNotFoundError",
    "get_bundled_world",
    "list_bundled_worlds",
    "load_bundled_world",
]
