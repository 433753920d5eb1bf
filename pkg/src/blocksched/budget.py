"""Cooperative time and memory budgets.

Solvers call :meth:`Budget.tick` inside their main loops and
:meth:`Budget.charge` whenever they store new DP states. Nothing is killed
from the outside; a solver that never checks simply runs to completion.
"""

from __future__ import annotations

import time

from .errors import OutOfBudget

# rough footprint of one stored DP state, used to turn megabytes into a count
BYTES_PER_STATE = 256


class Budget:
    """Deadline plus state-count cap.

    Parameters
    ----------
    timeout_ms : int or None
        Wall-clock limit measured from construction.
    max_states : int or None
        Upper bound on the number of DP states a solver may keep.
    """

    def __init__(self, timeout_ms: int | None = None, max_states: int | None = None) -> None:
        if timeout_ms is not None and timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if max_states is not None and max_states <= 0:
            raise ValueError("max_states must be positive")
        self.timeout_ms = timeout_ms
        self.max_states = max_states
        self._deadline = None if timeout_ms is None else time.monotonic() + timeout_ms / 1000.0
        self.states = 0
        self._ticks = 0

    @classmethod
    def from_mb(cls, timeout_ms: int | None = None, mem_mb: int | None = None) -> "Budget":
        max_states = None if mem_mb is None else max(1, mem_mb * 1_000_000 // BYTES_PER_STATE)
        return cls(timeout_ms=timeout_ms, max_states=max_states)

    def tick(self) -> None:
        """Raise ``OutOfBudget("T")`` once the deadline has passed."""
        if self._deadline is None:
            return
        self._ticks += 1
        # time.monotonic is cheap but not free; sample it every 64 calls
        if self._ticks & 63 == 0 and time.monotonic() > self._deadline:
            raise OutOfBudget("T")

    def check_time(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise OutOfBudget("T")

    def charge(self, count: int = 1) -> None:
        """Account for ``count`` newly stored states."""
        self.states += count
        if self.max_states is not None and self.states > self.max_states:
            raise OutOfBudget("M")
        self.tick()

    def release(self, count: int) -> None:
        self.states = max(0, self.states - count)


def ensure(budget: Budget | None) -> Budget:
    """Return ``budget`` or a fresh unlimited one."""
    return budget if budget is not None else Budget()
