from __future__ import annotations

import itertools
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings

from blocksched.generate import b_function, generate_block_graph, random_instance
from blocksched.graph import BlockCutTree
from blocksched.greedy import greedy_schedule, greedy_unit_load_bound, hard_instance, unit_slack_holds
from blocksched.model import Identical, Instance, identical_lower_bound, is_feasible, makespan, unit_instance
from blocksched.oracle import optimum

from conftest import instances


@pytest.mark.parametrize("m, expected", [(3, 5), (4, 7), (8, 15)])
def test_hard_instance(m, expected):
    """Greedy reaches p(2 - 1/m) on the hard instance, the optimum is p."""
    inst = hard_instance(m)
    assert makespan(inst, greedy_schedule(inst)) == expected == m * (2 - Fraction(1, m))


def test_single_block_rank_order():
    inst = Instance(BlockCutTree.from_blocks(3, [[0, 1, 2]]), Identical(3), (2, 7, 4))
    sched = greedy_schedule(inst)
    assert sched.assign == (2, 0, 1)
    assert makespan(inst, sched) == 7


def test_random_within_twice_optimum():
    for seed in range(25):
        inst = random_instance(10, 4, "avg", "p0", rng=seed)
        assert makespan(inst, greedy_schedule(inst)) <= 2 * optimum(inst)


@settings(max_examples=200, deadline=None)
@given(instances(n_max=12, m_max=5, envs=("identical",)))
def test_feasible_and_within_bound(inst):
    sched = greedy_schedule(inst)
    assert is_feasible(inst, sched)
    assert makespan(inst, sched) <= 2 * identical_lower_bound(inst)


@settings(max_examples=200, deadline=None)
@given(instances(n_max=12, m_max=5, envs=("identical",)))
def test_load_invariant_after_every_block(inst):
    """After each block every load stays below C_j + max(C_j, p_max)."""
    pmax = max(inst.proc)
    seen = []

    def check(_, loads):
        avg = Fraction(sum(loads), inst.m)
        seen.append(all(x <= avg + max(avg, pmax) for x in loads))

    greedy_schedule(inst, on_block=check)
    assert seen and all(seen)


def test_unit_bound_n7_m3():
    inst = random_instance(7, 3, "avg", "unit", rng=0)
    sched, bound = greedy_unit_load_bound(inst)
    assert bound == 4
    assert max(sched.assign.count(i) for i in range(3)) <= 4


def test_unit_bound_single_short_block():
    """A block of m-1 unit jobs leaves one machine empty."""
    inst = unit_instance(BlockCutTree.from_blocks(3, [[0, 1, 2]]), 4)
    sched, _ = greedy_unit_load_bound(inst)
    assert sorted(sched.assign.count(i) for i in range(4)) == [0, 1, 1, 1]


def _partitions(total, parts, lo, hi):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for x in range(min(hi, total), lo - 1, -1):
        for rest in _partitions(total - x, parts - 1, lo, x):
            yield (x,) + rest


def test_unit_bound_all_shapes():
    """Every partition shape for n <= 12 and m in {3, 4} satisfies the slack counts."""
    checked = 0
    for m in (3, 4):
        for n in range(m, 13):
            for b in range(b_function(n, m, "min"), n):
                for parts in _partitions(n + b - 1, b, 2, m):
                    for seed in range(2):
                        g = generate_block_graph(parts, seed)
                        greedy_unit_load_bound(unit_instance(g, m))
                        checked += 1
    assert checked > 200


def test_slack_helper():
    assert unit_slack_holds([3, 3, 1], 7, 3)
    assert not unit_slack_holds([5, 1, 1], 7, 3)


def test_scaling_roughly_linear():
    """Doubling n at fixed m at most about doubles the running time."""
    def run(n):
        insts = [random_instance(n, 4, "avg", "p0", rng=s) for s in range(20)]
        best = float("inf")
        for _ in range(5):
            start = time.perf_counter()
            for inst in insts:
                greedy_schedule(inst)
            best = min(best, time.perf_counter() - start)
        return best

    small, large = run(1000), run(2000)
    assert large <= 3 * small


def test_disconnected_components():
    g = BlockCutTree.from_blocks(5, [[0, 1], [2, 3], [4]])
    inst = unit_instance(g, 2)
    sched = greedy_schedule(inst)
    assert is_feasible(inst, sched)
    assert makespan(inst, sched) == 3


def test_edgeless_exhaustive_small():
    for m, n in itertools.product((2, 3), (1, 2, 3, 4)):
        g = BlockCutTree.from_blocks(n, [[v] for v in range(n)])
        inst = unit_instance(g, m)
        assert makespan(inst, greedy_schedule(inst)) == -(-n // m)
