"""Exhaustive branch-and-bound oracle.

Kept deliberately independent of the solver modules: it only uses the
model types and the block list of the graph.
"""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction

from .errors import CapExceeded, Infeasible
from .model import Identical, Instance, Schedule, Uniform

DEFAULT_CAP = 12


def _machine_classes(inst: Instance) -> list[int] | None:
    """Class label per machine for symmetry breaking, or None if none applies."""
    env = inst.env
    if isinstance(env, Identical):
        return [0] * env.m
    if isinstance(env, Uniform):
        return list(env.speeds)
    return None


def _lower_bound(inst: Instance, times: list[list[Fraction]]) -> Fraction:
    """Trivial bound: the longest job anywhere and, for P/Q, total work over total speed."""
    if inst.n == 0:
        return Fraction(0)
    lb = max(min(times[i][j] for i in range(inst.m)) for j in range(inst.n))
    env = inst.env
    if isinstance(env, Identical):
        lb = max(lb, Fraction(sum(inst.proc), env.m))
    elif isinstance(env, Uniform):
        lb = max(lb, Fraction(sum(inst.proc), sum(env.speeds)))
    return lb


def brute_force(
    inst: Instance,
    cap: int = DEFAULT_CAP,
    prune: bool = True,
    fixed: Mapping[int, int] | None = None,
    bound: Fraction | None = None,
) -> tuple[Schedule, Fraction]:
    """Optimal schedule by depth-first search.

    Parameters
    ----------
    inst : Instance
    cap : int
        Largest accepted ``n``.
    prune : bool
        Cut branches whose partial makespan already reaches the incumbent.
        With ``prune=False`` every proper assignment is evaluated.
    fixed : mapping, optional
        Jobs pinned to machines (used to test cut-vertex assignments).
    bound : Fraction, optional
        Only look for schedules with makespan at most ``bound``.

    Returns
    -------
    (Schedule, Fraction)

    Raises
    ------
    CapExceeded
        If ``inst.n > cap``.
    Infeasible
        If no proper schedule exists (within ``bound`` when given).
    """
    n, m = inst.n, inst.m
    if n > cap:
        raise CapExceeded(f"oracle cap is {cap} jobs, instance has {n}")
    fixed = dict(fixed or {})
    times = [[inst.time(i, j) for j in range(n)] for i in range(m)]

    # visit jobs block by block so conflicts show up early
    order: list[int] = []
    seen: set[int] = set()
    for b in inst.graph.block_preorder():
        for v in sorted(inst.graph.blocks[b]):
            if v not in seen:
                seen.add(v)
                order.append(v)
    neighbours = inst.graph.adjacency()

    classes = _machine_classes(inst) if prune and not fixed else None
    # an incumbent at the lower bound is optimal, so the search may stop
    floor_value = _lower_bound(inst, times) if prune and bound is None else None
    loads = [Fraction(0)] * m
    assign = [-1] * n
    used = [False] * m
    best: list = [None, None]

    def better(value: Fraction) -> bool:
        if best[0] is None and bound is not None:
            return value <= bound
        return best[1] is None or value < best[1]

    def rec(pos: int, current: Fraction) -> bool:
        """Search below ``pos``; True once an optimal leaf is known."""
        if pos == n:
            if better(current):
                best[0] = tuple(assign)
                best[1] = current
            return floor_value is not None and current <= floor_value
        j = order[pos]
        choices = [fixed[j]] if j in fixed else range(m)
        tried_classes: set[int] = set()
        for i in choices:
            if any(assign[w] == i for w in neighbours[j]):
                continue
            if classes is not None and not used[i]:
                # all unused machines of one class are interchangeable
                if classes[i] in tried_classes:
                    continue
                tried_classes.add(classes[i])
            new_load = loads[i] + times[i][j]
            peak = max(current, new_load)
            if prune and not better(peak):
                continue
            if bound is not None and peak > bound:
                continue
            was_used = used[i]
            loads[i] = new_load
            assign[j] = i
            used[i] = True
            done = rec(pos + 1, peak)
            loads[i] -= times[i][j]
            assign[j] = -1
            used[i] = was_used
            if done:
                return True
        return False

    rec(0, Fraction(0))
    if best[0] is None:
        raise Infeasible("no proper schedule exists")
    return Schedule(best[0]), best[1]


def exists_within(inst: Instance, bound: Fraction, fixed: Mapping[int, int] | None = None, cap: int = DEFAULT_CAP) -> bool:
    """Is there a proper schedule with makespan at most ``bound``?"""
    try:
        brute_force(inst, cap=cap, fixed=fixed, bound=Fraction(bound))
    except Infeasible:
        return False
    return True


def optimum(inst: Instance, cap: int = DEFAULT_CAP) -> Fraction:
    return brute_force(inst, cap=cap)[1]
