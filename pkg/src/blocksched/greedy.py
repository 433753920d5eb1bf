"""Greedy 2-approximation for identical machines under a block graph."""

from __future__ import annotations

import heapq
from collections.abc import Callable
from math import ceil

from .errors import Infeasible
from .graph import BlockCutTree
from .model import Identical, Instance, Schedule


def greedy_schedule(
    inst: Instance,
    on_block: Callable[[int, list[int]], None] | None = None,
) -> Schedule:
    """Schedule blocks in pre-order onto the least loaded machines.

    Jobs of a block are taken by non-increasing ``p_j`` (ties: lower id) and
    matched to the ``|B|`` least loaded machines (ties: lower machine id).
    The machine already holding the block's parent cut vertex is dropped
    from that list; if it is not in the list, the last machine is dropped
    instead.

    Parameters
    ----------
    inst : Instance
        Identical machines.
    on_block : callable, optional
        Called as ``on_block(block_index, loads)`` after every block.

    Returns
    -------
    Schedule
    """
    if not isinstance(inst.env, Identical):
        raise ValueError("greedy_schedule needs identical machines")
    g, m = inst.graph, inst.m
    if g.omega > m:
        raise Infeasible(f"a block of size {g.omega} does not fit on {m} machines")
    p = inst.proc
    loads = [0] * m
    heap = [(0, i) for i in range(m)]
    assign = [-1] * inst.n
    for b in g.block_preorder():
        block = g.blocks[b]
        jobs = sorted(block, key=lambda j: (-p[j], j))
        picked = [heapq.heappop(heap) for _ in range(len(block))]
        u = g.parent_cut(b)
        if u is not None:
            holder = assign[u]
            idx = next((k for k, (_, i) in enumerate(picked) if i == holder), len(picked) - 1)
            heapq.heappush(heap, picked.pop(idx))
            jobs.remove(u)
        for j, (_, i) in zip(jobs, picked):
            assign[j] = i
            loads[i] += p[j]
            heapq.heappush(heap, (loads[i], i))
        if on_block is not None:
            on_block(b, list(loads))
    return Schedule(tuple(assign))


def unit_slack_holds(counts: list[int], n: int, m: int) -> bool:
    """Check the per-machine job counts of the unit-job load bound."""
    bound = ceil(n / (m - 1))
    if max(counts, default=0) > bound:
        return False
    r = n % (m - 1)
    below = sum(1 for c in counts if c < bound)
    return below >= (1 if r == 0 else m - r)


def greedy_unit_load_bound(inst: Instance) -> tuple[Schedule, int]:
    """Greedy on unit jobs, with the ``ceil(n/(m-1))`` bound verified.

    Returns
    -------
    (Schedule, int)
        The greedy schedule and the bound ``ceil(n/(m-1))``.
    """
    if not inst.is_unit:
        raise ValueError("greedy_unit_load_bound needs unit jobs")
    m = inst.m
    if m < 2:
        raise ValueError("the load bound needs m >= 2")
    sched = greedy_schedule(inst)
    counts = [0] * m
    for i in sched.assign:
        counts[i] += 1
    if not unit_slack_holds(counts, inst.n, m):
        raise RuntimeError(f"unit load bound violated: counts {counts}, n={inst.n}, m={m}")
    return sched, ceil(inst.n / (m - 1))


def hard_instance(m: int, p: int | None = None) -> Instance:
    """The instance on which greedy reaches ``p (2 - 1/m)``.

    ``m`` disjoint cliques of ``m - 1`` unit jobs, followed by a lone job of
    length ``p`` (default ``m``).
    """
    p = m if p is None else p
    blocks = [list(range(c * (m - 1), (c + 1) * (m - 1))) for c in range(m)]
    n = m * (m - 1) + 1
    blocks.append([n - 1])
    graph = BlockCutTree.from_blocks(n, blocks)
    return Instance(graph=graph, env=Identical(m), proc=(1,) * (n - 1) + (p,))
