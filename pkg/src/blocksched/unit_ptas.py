"""PTAS for unit jobs on identical machines.

Three stages, reported by a participation tag:

``C``
    the pattern DP finds a schedule with at most ``2/eps`` jobs per
    machine (searched from ``k = 1`` upward, so the result is optimal);
``C+T``
    otherwise, when ``m <= 2/eps + 1``, the treewidth FPTAS with accuracy
    ``1/(n+1)``, which is exact for unit jobs;
``C+G``
    otherwise the greedy schedule, which is already within ``1+eps``.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

from .budget import Budget, ensure
from .errors import Infeasible
from .greedy import greedy_schedule
from .model import Identical, Instance, Schedule
from .patterns import decide_bounded_makespan
from .treewidth import fptas


def ptas_trace(
    inst: Instance,
    eps,
    budget: Budget | None = None,
    early_abort: bool = False,
) -> tuple[Schedule, str]:
    """Run the PTAS and report which stages ran.

    Parameters
    ----------
    inst : Instance
        Unit jobs on identical machines.
    eps : rational
    budget : Budget, optional
    early_abort : bool
        Let the pattern DP stop at the first empty intermediate set.

    Returns
    -------
    (Schedule, str)
        The schedule and one of ``"C"``, ``"C+T"``, ``"C+G"``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not isinstance(inst.env, Identical) or not inst.is_unit:
        raise ValueError("ptas_unit needs unit jobs on identical machines")
    m, n = inst.m, inst.n
    if inst.graph.omega > m:
        raise Infeasible(f"a block of size {inst.graph.omega} does not fit on {m} machines")
    if n == 0:
        return Schedule(()), "C"
    budget = ensure(budget)
    # levels below ceil(n/m) cannot hold n jobs, so they are skipped
    for k in range(max(1, ceil(n / m)), floor(2 / eps) + 1):
        try:
            return decide_bounded_makespan(inst, k, budget, early_abort=early_abort), "C"
        except Infeasible:
            continue
    if m <= 2 / eps + 1:
        return fptas(inst, Fraction(1, n + 1), budget), "C+T"
    return greedy_schedule(inst), "C+G"


def ptas_unit(inst: Instance, eps, budget: Budget | None = None, early_abort: bool = False) -> Schedule:
    """(1+eps)-approximate schedule for unit jobs; see :func:`ptas_trace`."""
    return ptas_trace(inst, eps, budget, early_abort)[0]
