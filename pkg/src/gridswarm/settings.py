"""Configuration read from ``GRIDSWARM_*`` environment variables."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Mapping

from .greedy import DEFAULT_BOUND_FACTOR
from .optimal import DEFAULT_NODE_BUDGET
from .sticky import DEFAULT_STICKY_FACTOR

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
_TRUE = frozenset({"1", "true", "yes", "on"})
_FALSE = frozenset({"0", "false", "no", "off"})


def _trimmed(value: str | None) -> str | None:
    if value is None:
        return None
    trimmed = value.strip()
    return trimmed or None


def _normalise_int(value: str | None, *, name: str, default: int, minimum: int) -> int:
    trimmed = _trimmed(value)
    if trimmed is None:
        return default
    try:
        parsed = int(trimmed)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer.") from exc
    if parsed < minimum:
        raise ValueError(f"{name} must be at least {minimum}.")
    return parsed


def _normalise_float(value: str | None, *, name: str, default: float, minimum: float) -> float:
    trimmed = _trimmed(value)
    if trimmed is None:
        return default
    try:
        parsed = float(trimmed)
    except ValueError as exc:
        raise ValueError(f"{name} must be a number.") from exc
    if parsed < minimum:
        raise ValueError(f"{name} must be at least {minimum:g}.")
    return parsed


def _normalise_bool(value: str | None, *, name: str, default: bool) -> bool:
    trimmed = _trimmed(value)
    if trimmed is None:
        return default
    lowered = trimmed.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"{name} must be a boolean (true/false).")


def _normalise_level(value: str | None, *, name: str, default: str) -> str:
    trimmed = _trimmed(value)
    if trimmed is None:
        return default
    upper = trimmed.upper()
    if upper not in _LEVELS:
        raise ValueError(f"{name} must be one of {', '.join(_LEVELS)}.")
    return upper


@dataclass(frozen=True)
class GridSwarmSettings:
    """Run budgets and output switches.

    Empty strings are treated as if the variable was unset. Command-line
    flags take precedence over these values.
    """

    node_budget: int = DEFAULT_NODE_BUDGET
    bound_factor: float = DEFAULT_BOUND_FACTOR
    sticky_factor: float = DEFAULT_STICKY_FACTOR
    workers: int = 1
    log_level: str = "WARNING"
    record_timing: bool = False

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "GridSwarmSettings":
        """Return settings populated from ``environ`` (defaults to :data:`os.environ`)."""

        source = environ if environ is not None else os.environ
        return cls(
            node_budget=_normalise_int(
                source.get("GRIDSWARM_NODE_BUDGET"),
                name="GRIDSWARM_NODE_BUDGET",
                default=DEFAULT_NODE_BUDGET,
                minimum=1,
            ),
            bound_factor=_normalise_float(
                source.get("GRIDSWARM_BOUND_FACTOR"),
                name="GRIDSWARM_BOUND_FACTOR",
                default=DEFAULT_BOUND_FACTOR,
                minimum=1.0,
            ),
            sticky_factor=_normalise_float(
                source.get("GRIDSWARM_STICKY_FACTOR"),
                name="GRIDSWARM_STICKY_FACTOR",
                default=DEFAULT_STICKY_FACTOR,
                minimum=1.0,
            ),
            workers=_normalise_int(
                source.get("GRIDSWARM_WORKERS"),
                name="GRIDSWARM_WORKERS",
                default=1,
                minimum=1,
            ),
            log_level=_normalise_level(
                source.get("GRIDSWARM_LOG_LEVEL"),
                name="GRIDSWARM_LOG_LEVEL",
                default="WARNING",
            ),
            record_timing=_normalise_bool(
                source.get("GRIDSWARM_RECORD_TIMING"),
                name="GRIDSWARM_RECORD_TIMING",
                default=False,
            ),
        )

    @property
    def log_level_value(self) -> int:
        return int(logging.getLevelName(self.log_level))


__all__ = ["GridSwarmSettings"]
