from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blocksched.errors import Infeasible
from blocksched.generate import random_instance
from blocksched.graph import BlockCutTree
from blocksched.model import Identical, Instance, Uniform, is_feasible, makespan, unit_instance
from blocksched.oracle import optimum
from blocksched.unit_ptas import ptas_trace, ptas_unit

from conftest import block_graphs


def test_worked_example(worked_instance):
    """At eps = 3/4 phase one stops at k = 2, so the exact FPTAS finishes."""
    sched, tag = ptas_trace(worked_instance, Fraction(3, 4))
    assert tag == "C+T"
    assert makespan(worked_instance, sched) == 3
    sched, tag = ptas_trace(worked_instance, Fraction(2, 3))
    assert tag == "C"
    assert makespan(worked_instance, sched) == 3


@pytest.mark.parametrize(
    "eps, n, m, tag",
    [(Fraction(1, 4), 20, 4, "C"), (Fraction(1, 4), 40, 4, "C+T"), (Fraction(1), 20, 4, "C+G")],
)
def test_stage_tags(eps, n, m, tag):
    """Few jobs per machine stay in phase one; otherwise m decides between T and G."""
    for seed in range(5):
        inst = random_instance(n, m, "min", "unit", rng=seed)
        sched, got = ptas_trace(inst, eps)
        assert got == tag
        assert is_feasible(inst, sched)


def test_clique_of_m_jobs():
    inst = unit_instance(BlockCutTree.from_blocks(4, [[0, 1, 2, 3]]), 4)
    sched, tag = ptas_trace(inst, Fraction(1, 2))
    assert makespan(inst, sched) == 1 and tag == "C"


def test_rejects_wrong_kind():
    g = BlockCutTree.from_blocks(2, [[0, 1]])
    with pytest.raises(ValueError):
        ptas_unit(Instance(g, Identical(2), (1, 2)), 1)
    with pytest.raises(ValueError):
        ptas_unit(Instance(g, Uniform((2, 1)), (1, 1)), 1)
    with pytest.raises(ValueError):
        ptas_unit(unit_instance(g, 2), 0)
    with pytest.raises(Infeasible):
        ptas_unit(unit_instance(BlockCutTree.from_blocks(3, [[0, 1, 2]]), 2), 1)


def test_deterministic():
    inst = random_instance(30, 4, "avg", "unit", rng=7)
    assert ptas_unit(inst, Fraction(1, 3)) == ptas_unit(inst, Fraction(1, 3))


@settings(max_examples=100, deadline=None)
@given(block_graphs(n_max=9, m_max=4), st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2)]))
def test_ratio_and_phase_one_optimal(mg, eps):
    m, g = mg
    inst = unit_instance(g, m)
    sched, tag = ptas_trace(inst, eps)
    opt = optimum(inst)
    c = makespan(inst, sched)
    assert is_feasible(inst, sched)
    assert c <= (1 + eps) * opt
    if tag != "C+G":
        assert c == opt
