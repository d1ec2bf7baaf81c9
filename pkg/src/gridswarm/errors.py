"""Exception hierarchy shared by the grid-world engine and the collectors."""

from __future__ import annotations


class GridSwarmError(RuntimeError):
    """Base class for algorithmic failures raised by the collectors."""


class InfeasibleError(GridSwarmError):
    """Raised when no command sequence can collect the swarm."""


class DisconnectedWorkspaceError(InfeasibleError):
    """Raised when an operation requires a single free-space component."""

    def __init__(self, component_count: int, message: str | None = None) -> None:
        self.component_count = component_count
        super().__init__(
            message
            or f"free space has {component_count} connected components; expected 1"
        )


class BudgetExceededError(GridSwarmError):
    """Raised when a run uses more commands or nodes than it was allotted.

    ``factor`` is the multiplier applied to the theoretical bound and
    ``default_factor`` the multiplier the run would use without overrides, so
    callers can tell a failure at the theorem's constant from one at a raised
    constant.
    """

    def __init__(
        self,
        *,
        budget: int,
        used: int,
        factor: float,
        default_factor: float,
        what: str,
    ) -> None:
        self.budget = budget
        self.used = used
        self.factor = factor
        self.default_factor = default_factor
        qualifier = (
            "at the default factor"
            if self.factor_is_default
            else f"at raised factor {factor:g}"
        )
        super().__init__(
            f"{what} budget of {budget} exceeded after {used} ({qualifier})"
        )

    @property
    def factor_is_default(self) -> bool:
        return self.factor == self.default_factor


class SearchBudgetExceededError(BudgetExceededError):
    """Raised when the breadth-first search admits more nodes than allowed."""


class CollectBudgetExceededError(BudgetExceededError):
    """Raised when pairwise collection issues more commands than n³ allows."""


class StickyBudgetExceededError(BudgetExceededError):
    """Raised when sticky delivery issues more commands than m·D allows."""


class WorldFormatError(ValueError):
    """Raised when a map file cannot be decoded."""

    def __init__(
        self, message: str, *, line: int | None = None, column: int | None = None
    ) -> None:
        self.line = line
        self.column = column
        if line is not None:
            location = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{message} ({location})"
        super().__init__(message)


class InvalidConfigurationError(ValueError):
    """Raised when particle positions are incompatible with a workspace."""


__all__ = [
    "BudgetExceededError",
    "CollectBudgetExceededError",
    "DisconnectedWorkspaceError",
    "GridSwarmError",
    "InfeasibleError",
    "InvalidConfigurationError",
    "SearchBudgetExceededError",
    "StickyBudgetExceededError",
    "WorldFormatError",
]
