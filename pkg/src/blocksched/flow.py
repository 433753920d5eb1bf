"""Exact solver for unit jobs on uniform machines with few cut vertices.

Every valid placement of the cut vertices is tried; the simplicial jobs
are then placed by a max-flow computation on a five-layer network.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import islice
from math import floor

from .budget import Budget, ensure
from .errors import Infeasible, InvalidAssignment
from .maxflow import FlowNetwork, max_flow
from .model import Identical, Instance, Schedule, Uniform


def _speeds(inst: Instance) -> tuple[int, ...]:
    if isinstance(inst.env, Uniform):
        return inst.env.speeds
    if isinstance(inst.env, Identical):
        return (1,) * inst.m
    raise ValueError("the flow solver needs identical or uniform machines")


def _check_unit(inst: Instance) -> None:
    if not inst.is_unit:
        raise ValueError("the flow solver needs unit jobs")


def candidate_makespans(inst: Instance) -> list[Fraction]:
    """Sorted distinct values ``j / s_i`` for ``1 <= j <= n``."""
    speeds = _speeds(inst)
    return sorted({Fraction(j, s) for s in set(speeds) for j in range(1, inst.n + 1)})


def machine_capacities(inst: Instance, C: Fraction) -> list[int]:
    """Number of unit jobs each machine finishes by time ``C``."""
    return [floor(Fraction(C) * s) for s in _speeds(inst)]


def _validate_assignment(inst: Instance, f: Mapping[int, int], caps: list[int]) -> None:
    g = inst.graph
    if set(f) != set(g.cut_vertices):
        raise InvalidAssignment("assignment must cover exactly the cut vertices")
    counts = [0] * inst.m
    for v, i in f.items():
        if not 0 <= i < inst.m:
            raise InvalidAssignment(f"machine {i} out of range")
        counts[i] += 1
    adj = g.adjacency()
    for v in f:
        if any(w in f and f[w] == f[v] for w in adj[v]):
            raise InvalidAssignment(f"adjacent cut vertices share machine {f[v]}")
    if any(c > cap for c, cap in zip(counts, caps)):
        raise InvalidAssignment("cut vertices alone exceed a machine's capacity")


def build_flow_network(inst: Instance, C: Fraction, f: Mapping[int, int]) -> FlowNetwork:
    """The network ``F(G, C, f)``.

    Node labels: ``"s"``, ``("J", j)``, ``("BM", b, i)``, ``("M", i)``,
    ``"t"`` with ``b`` the block index and ``i`` the machine id.

    Raises
    ------
    InvalidAssignment
        If ``f`` is not a valid cut-vertex placement for ``C``.
    """
    _check_unit(inst)
    g, m = inst.graph, inst.m
    caps = machine_capacities(inst, C)
    _validate_assignment(inst, f, caps)
    used = [0] * m
    for i in f.values():
        used[i] += 1

    net = FlowNetwork()
    net.add_node("s")
    simplicial = [j for j in range(inst.n) if j not in g.cut_vertices]
    for j in simplicial:
        net.add_edge("s", ("J", j), 1)
    for j in simplicial:
        (b,) = g.vertex_blocks[j]
        blocked = {f[v] for v in g.blocks[b] if v in f}
        for i in range(m):
            if i not in blocked:
                net.add_edge(("J", j), ("BM", b, i), 1)
    for b in range(len(g.blocks)):
        for i in range(m):
            net.add_edge(("BM", b, i), ("M", i), 1)
    for i in range(m):
        net.add_edge(("M", i), "t", caps[i] - used[i])
    return net


def _decode(inst: Instance, net: FlowNetwork, flows: list[int], f: Mapping[int, int]) -> Schedule:
    assign = [-1] * inst.n
    for v, i in f.items():
        assign[v] = i
    for e, (u, v, _) in enumerate(net.edges):
        lu, lv = net.labels[u], net.labels[v]
        if flows[e] and isinstance(lu, tuple) and lu[0] == "J":
            assign[lu[1]] = lv[2]
    return Schedule(tuple(assign))


def cut_assignments(inst: Instance, C: Fraction) -> Iterator[dict[int, int]]:
    """Valid cut-vertex placements in mixed-radix order.

    Cut vertices are the digits, taken in block-cut tree pre-order; a
    prefix that already puts adjacent cut vertices together or overloads a
    machine is not extended.
    """
    g, m = inst.graph, inst.m
    order = g.cut_preorder()
    caps = machine_capacities(inst, C)
    adj = g.adjacency()
    counts = [0] * m
    current: dict[int, int] = {}

    def rec(pos: int) -> Iterator[dict[int, int]]:
        if pos == len(order):
            yield dict(current)
            return
        v = order[pos]
        for i in range(m):
            if counts[i] + 1 > caps[i]:
                continue
            if any(current.get(w) == i for w in adj[v]):
                continue
            current[v] = i
            counts[i] += 1
            yield from rec(pos + 1)
            counts[i] -= 1
            del current[v]

    yield from rec(0)


def _try(inst: Instance, C: Fraction, f: dict[int, int]) -> Schedule | None:
    net = build_flow_network(inst, C, f)
    value, flows = max_flow(net)
    if value == inst.n - len(inst.graph.cut_vertices):
        return _decode(inst, net, flows, f)
    return None


def feasible_at(inst: Instance, C: Fraction, budget: Budget | None = None, n_jobs: int = 1) -> Schedule | None:
    """A schedule with makespan at most ``C``, or None.

    With ``n_jobs > 1`` assignments are tested in parallel batches; the
    accepted assignment is still the first one in enumeration order.
    """
    _check_unit(inst)
    budget = ensure(budget)
    gen = cut_assignments(inst, Fraction(C))
    if n_jobs <= 1:
        for f in gen:
            budget.tick()
            found = _try(inst, C, f)
            if found is not None:
                return found
        return None
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        while True:
            batch = list(islice(gen, 16 * n_jobs))
            if not batch:
                return None
            budget.check_time()
            for found in pool.map(lambda f: _try(inst, C, f), batch):
                if found is not None:
                    return found


def solve_uniform_unit(inst: Instance, budget: Budget | None = None, n_jobs: int = 1) -> Schedule:
    """Optimal schedule by binary search over the candidate makespans.

    Raises
    ------
    Infeasible
        If a block is larger than the number of machines.
    """
    _check_unit(inst)
    if inst.graph.omega > inst.m:
        raise Infeasible(f"a block of size {inst.graph.omega} does not fit on {inst.m} machines")
    if inst.n == 0:
        return Schedule(())
    cands = candidate_makespans(inst)
    lo, hi = 0, len(cands) - 1
    best = feasible_at(inst, cands[hi], budget, n_jobs)
    if best is None:
        raise Infeasible("no schedule found at the largest candidate")
    while lo < hi:
        mid = (lo + hi) // 2
        found = feasible_at(inst, cands[mid], budget, n_jobs)
        if found is None:
            lo = mid + 1
        else:
            hi, best = mid, found
    return best
