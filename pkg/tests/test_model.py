from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blocksched.graph import BlockCutTree
from blocksched.greedy import greedy_schedule, hard_instance
from blocksched.model import (
    Identical,
    Instance,
    Schedule,
    Uniform,
    Unrelated,
    identical_lower_bound,
    is_feasible,
    makespan,
    sum_lower_bound,
    unit_instance,
    with_env,
)
from blocksched.oracle import optimum

from conftest import instances

TRIANGLE = BlockCutTree.from_blocks(3, [[0, 1, 2]])
EDGELESS4 = BlockCutTree.from_blocks(4, [[0], [1], [2], [3]])


def test_triangle_feasibility():
    inst = unit_instance(TRIANGLE, 3)
    assert is_feasible(inst, Schedule((0, 1, 2)))
    assert not is_feasible(inst, Schedule((0, 0, 1)))


def test_out_of_range_machine_is_infeasible():
    assert not is_feasible(unit_instance(TRIANGLE, 3), Schedule((0, 1, 3)))


def test_worked_coloring_feasible(worked_instance):
    """The left coloring of the worked example is proper."""
    # J1..J9 -> M1 M3 M1 M2 M2 M3 M2 M3 M1, 0-based
    sched = Schedule((0, 2, 0, 1, 1, 2, 1, 2, 0))
    assert is_feasible(worked_instance, sched)
    assert makespan(worked_instance, sched) == 3


def test_makespan_identical():
    inst = Instance(EDGELESS4, Identical(2), (3, 1, 1, 1))
    assert makespan(inst, Schedule((0, 1, 1, 1))) == 3


def test_makespan_uniform_exact():
    inst = Instance(BlockCutTree.from_blocks(2, [[0, 1]]), Uniform((2, 1)), (4, 4))
    assert makespan(inst, Schedule((0, 1))) == 4
    assert makespan(inst, Schedule((1, 0))) == 4
    inst = Instance(BlockCutTree.from_blocks(2, [[0], [1]]), Uniform((2, 1)), (3, 4))
    assert makespan(inst, Schedule((0, 0))) == Fraction(7, 2)


def test_makespan_unrelated():
    inst = Instance(BlockCutTree.from_blocks(2, [[0, 1]]), Unrelated(((1, 5), (2, 3))))
    assert inst.proc == (1, 3)
    assert makespan(inst, Schedule((0, 1))) == 3


def test_hard_instance_greedy_makespan():
    assert makespan(hard_instance(3), greedy_schedule(hard_instance(3))) == 5


def test_lower_bounds():
    assert identical_lower_bound(Instance(EDGELESS4, Identical(2), (3, 1, 1, 1))) == 3
    seven = BlockCutTree.from_blocks(7, [[v] for v in range(7)])
    assert identical_lower_bound(unit_instance(seven, 3)) == 3
    assert identical_lower_bound(hard_instance(3)) == 3
    assert sum_lower_bound(hard_instance(3)) == 3


def test_invalid_envs():
    with pytest.raises(ValueError):
        Uniform((1, 2))
    with pytest.raises(ValueError):
        Identical(0)
    with pytest.raises(ValueError):
        Unrelated(((1, 2), (3,)))
    with pytest.raises(ValueError):
        Instance(TRIANGLE, Identical(3), (1, 0, 1))
    with pytest.raises(ValueError):
        Instance(TRIANGLE, Identical(3), (1, 1))


def test_json_round_trip():
    for env in (Identical(3), Uniform((5, 2, 1)), Unrelated(((1, 2, 3), (4, 5, 6), (7, 8, 9)))):
        inst = Instance(TRIANGLE, env, (2, 3, 4))
        text = inst.dumps()
        again = Instance.from_json(json.loads(text))
        assert again.dumps() == text
    sched = Schedule((2, 0, 1))
    assert Schedule.from_json(json.loads(sched.dumps())) == sched


@settings(max_examples=150, deadline=None)
@given(instances(n_max=7), st.randoms(use_true_random=False))
def test_makespan_ignores_job_order(inst, rnd):
    """Loads are sums, so relabelling jobs consistently keeps the makespan."""
    assign = tuple(rnd.randrange(inst.m) for _ in range(inst.n))
    perm = list(range(inst.n))
    rnd.shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    g = BlockCutTree.from_blocks(inst.n, [[inv[v] for v in b] for b in inst.graph.blocks])
    env = inst.env
    if isinstance(env, Unrelated):
        env = Unrelated(tuple(tuple(row[perm[j]] for j in range(inst.n)) for row in env.times))
    moved = Instance(g, env, tuple(inst.proc[perm[j]] for j in range(inst.n)))
    assert makespan(moved, Schedule(tuple(assign[perm[j]] for j in range(inst.n)))) == makespan(inst, Schedule(assign))


@settings(max_examples=150, deadline=None)
@given(instances(n_max=7, envs=("identical",)), st.integers(1, 5), st.randoms(use_true_random=False))
def test_equal_speeds_scale_makespan(inst, s, rnd):
    assign = Schedule(tuple(rnd.randrange(inst.m) for _ in range(inst.n)))
    q = with_env(inst, Uniform((s,) * inst.m))
    assert makespan(q, assign) == makespan(inst, assign) / s


@settings(max_examples=100, deadline=None)
@given(instances(n_max=7, envs=("identical",)))
def test_lower_bound_below_optimum(inst):
    opt = optimum(inst)
    assert identical_lower_bound(inst) <= opt
    assert sum_lower_bound(inst) <= opt
