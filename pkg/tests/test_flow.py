from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from blocksched.errors import Infeasible, InvalidAssignment
from blocksched.graph import BlockCutTree
from blocksched.maxflow import FlowNetwork, max_flow
from blocksched.model import Identical, Instance, Uniform, is_feasible, makespan
from blocksched.oracle import brute_force, exists_within
from blocksched.flow import (
    _try,
    build_flow_network,
    candidate_makespans,
    cut_assignments,
    feasible_at,
    machine_capacities,
    solve_uniform_unit,
)

from conftest import instances


def _unit(blocks, n, speeds):
    return Instance(BlockCutTree.from_blocks(n, blocks), Uniform(tuple(speeds)), (1,) * n)


def test_candidate_makespans():
    two = _unit([[0, 1]], 2, (2, 1))
    assert candidate_makespans(two) == [Fraction(1, 2), 1, 2]
    three = Instance(BlockCutTree.from_blocks(3, [[0], [1], [2]]), Identical(2), (1, 1, 1))
    assert candidate_makespans(three) == [1, 2, 3]


def test_capacities():
    inst = _unit([[0, 1]], 2, (5, 2, 1))
    assert machine_capacities(inst, Fraction(3, 2)) == [7, 3, 1]


def test_reference_network():
    """Blocks {J1, J2, J4} and {J3, J4}, J4 on M1, C = 2, speeds (2, 1, 1)."""
    inst = _unit([[0, 1, 3], [2, 3]], 4, (2, 1, 1))
    net = build_flow_network(inst, Fraction(2), {3: 1})
    expected = {("s", ("J", j), 1) for j in (0, 1, 2)}
    expected |= {(("J", j), ("BM", 0, i), 1) for j in (0, 1) for i in (0, 2)}
    expected |= {(("J", 2), ("BM", 1, i), 1) for i in (0, 2)}
    expected |= {(("BM", b, i), ("M", i), 1) for b in (0, 1) for i in range(3)}
    expected |= {(("M", 0), "t", 4), (("M", 1), "t", 1), (("M", 2), "t", 2)}
    assert net.edge_set() == expected
    assert max_flow(net)[0] == 3


def test_invalid_cut_placements():
    inst = _unit([[0, 1, 3], [2, 3]], 4, (2, 1, 1))
    with pytest.raises(InvalidAssignment):
        build_flow_network(inst, Fraction(2), {})
    with pytest.raises(InvalidAssignment):
        build_flow_network(inst, Fraction(1, 2), {3: 1})
    star = _unit([[0, 1], [1, 2], [2, 3]], 4, (1, 1))
    with pytest.raises(InvalidAssignment):
        build_flow_network(star, Fraction(4), {1: 0, 2: 0})


def test_star_on_two_speeds():
    star = _unit([[0, 1], [0, 2], [0, 3]], 4, (2, 1))
    sched = solve_uniform_unit(star)
    assert is_feasible(star, sched)
    assert makespan(star, sched) == Fraction(3, 2)


def test_single_block():
    """A block of m jobs puts one job per machine; the slowest sets the makespan."""
    inst = _unit([[0, 1, 2]], 3, (5, 2, 1))
    assert makespan(inst, solve_uniform_unit(inst)) == 1
    with pytest.raises(Infeasible):
        solve_uniform_unit(_unit([[0, 1, 2]], 3, (5, 2)))


def test_rejects_non_unit():
    inst = Instance(BlockCutTree.from_blocks(2, [[0, 1]]), Uniform((2, 1)), (1, 2))
    with pytest.raises(ValueError):
        solve_uniform_unit(inst)


def test_parallel_matches_sequential():
    inst = _unit([[0, 1], [1, 2], [2, 3], [3, 4], [2, 5], [5, 6]], 7, (2, 1, 1))
    for C in candidate_makespans(inst):
        a = feasible_at(inst, C)
        b = feasible_at(inst, C, n_jobs=4)
        assert (a is None) == (b is None)
        if a is not None:
            assert a == b


def test_max_flow_trivial():
    net = FlowNetwork()
    net.add_node("s")
    assert max_flow(net) == (0, [])
    net.add_edge("s", "t", 0)
    assert max_flow(net)[0] == 0
    with pytest.raises(ValueError):
        net.add_edge("s", "t", -1)


def test_max_flow_equals_min_cut():
    """Small random networks: flow value equals the brute-force minimum cut."""
    rng = random.Random(1)
    for _ in range(40):
        nodes = ["s", "a", "b", "c", "t"]
        net = FlowNetwork()
        for u, v in itertools.permutations(nodes, 2):
            if rng.random() < 0.5:
                net.add_edge(u, v, rng.randint(0, 4))
        value, flows = max_flow(net)
        best = None
        for side in itertools.product((0, 1), repeat=3):
            S = {"s"} | {x for x, keep in zip("abc", side) if keep}
            cut = sum(cap for (u, v, cap) in net.edges if net.labels[u] in S and net.labels[v] not in S)
            best = cut if best is None else min(best, cut)
        assert value == (best if "t" in net.index else 0)
        assert all(0 <= fl <= cap for fl, (_, _, cap) in zip(flows, net.edges))


@settings(max_examples=120, deadline=None)
@given(instances(n_max=8, m_max=3, envs=("uniform", "identical"), unit=True))
def test_matches_oracle(inst):
    sched = solve_uniform_unit(inst)
    assert is_feasible(inst, sched)
    assert makespan(inst, sched) == brute_force(inst)[1]


@settings(max_examples=60, deadline=None)
@given(instances(n_max=7, m_max=3, envs=("uniform",), unit=True))
def test_flow_decides_each_cut_placement(inst):
    """Full flow for (C, f) exactly when some schedule at C extends f."""
    for C in candidate_makespans(inst)[: 2 * inst.n : 2]:
        for f in itertools.islice(cut_assignments(inst, C), 6):
            flow_ok = _try(inst, C, f) is not None
            assert flow_ok == exists_within(inst, C, fixed=f)
