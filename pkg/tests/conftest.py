"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from blocksched.generate import b_function, random_graph
from blocksched.graph import BlockCutTree
from blocksched.model import Identical, Instance, Uniform, Unrelated, unit_instance

# the worked example of the pattern DP, jobs J1..J9 renumbered 0..8
WORKED_BLOCKS = [[0, 1], [1, 2, 3], [2, 4, 5], [2, 6], [3, 7], [3, 8]]

# reference graph: triangles v1v2v3 and v1v4v5, edge v5v6, isolated v7 (0-based)
REFERENCE_EDGES = [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (4, 5)]


def reference_adjacency() -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(7)]
    for u, v in REFERENCE_EDGES:
        adj[u].append(v)
        adj[v].append(u)
    return adj


@pytest.fixture
def worked_graph() -> BlockCutTree:
    return BlockCutTree.from_blocks(9, WORKED_BLOCKS)


@pytest.fixture
def worked_instance(worked_graph) -> Instance:
    return unit_instance(worked_graph, 3)


def brute_colorings(g: BlockCutTree, m: int):
    """Every proper coloring with colors 0..m-1, as a tuple per vertex."""
    adj = g.adjacency()
    for col in itertools.product(range(m), repeat=g.n):
        if all(col[v] != col[w] for v in range(g.n) for w in adj[v]):
            yield col


def small_graphs(n_max: int, ms=(2, 3), seeds=range(3)):
    """Generated graphs for every n <= n_max, m and b-function."""
    seen = set()
    for m in ms:
        for n in range(m, n_max + 1):
            for which in ("min", "avg", "max"):
                b = b_function(n, m, which)
                for seed in seeds:
                    g = random_graph(n, m, b, seed)
                    key = (m, g.n, g.blocks)
                    if key not in seen:
                        seen.add(key)
                        yield m, g


@st.composite
def block_graphs(draw, n_max=8, m_max=3, m_min=2):
    m = draw(st.integers(m_min, m_max))
    n = draw(st.integers(m, n_max))
    b = draw(st.integers(b_function(n, m, "min"), n - 1))
    seed = draw(st.integers(0, 2**31 - 1))
    return m, random_graph(n, m, b, seed)


@st.composite
def instances(draw, n_max=7, m_max=3, envs=("identical", "uniform", "unrelated"), unit=False):
    m, g = draw(block_graphs(n_max=n_max, m_max=m_max))
    n = g.n
    kind = draw(st.sampled_from(envs))
    p = tuple([1] * n) if unit else tuple(draw(st.lists(st.integers(1, 5), min_size=n, max_size=n)))
    if kind == "identical":
        env = Identical(m)
    elif kind == "uniform":
        env = Uniform(tuple(sorted(draw(st.lists(st.sampled_from([1, 2, 5]), min_size=m, max_size=m)), reverse=True)))
    else:
        env = Unrelated(tuple(tuple(draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))) for _ in range(m)))
    return Instance(graph=g, env=env, proc=p)
