"""Exception types shared by all solvers."""

from __future__ import annotations


class BlockSchedError(Exception):
    """Base class for library errors."""


class NotABlockGraph(BlockSchedError, ValueError):
    """Raised when a biconnected component is not a clique."""


class Infeasible(BlockSchedError):
    """No schedule exists (or the requested bound cannot be met)."""


class OutOfBudget(BlockSchedError):
    """A cooperative time or memory budget was exhausted.

    Parameters
    ----------
    kind : {"T", "M"}
        ``"T"`` for time, ``"M"`` for memory.
    """

    def __init__(self, kind: str, message: str = "") -> None:
        if kind not in ("T", "M"):
            raise ValueError(f"unknown budget kind {kind!r}")
        self.kind = kind
        super().__init__(message or ("time budget exceeded" if kind == "T" else "memory budget exceeded"))


class CapExceeded(BlockSchedError):
    """The oracle was asked to solve an instance above its size cap."""


class InvalidAssignment(BlockSchedError, ValueError):
    """A cut-vertex assignment violates adjacency or capacity."""
