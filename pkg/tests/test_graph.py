from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings

from blocksched.errors import NotABlockGraph
from blocksched.graph import (
    BlockCutTree,
    descendants,
    descendants_d,
    descendants_of_subset,
    is_valid_decomposition,
    tree_decomposition,
    validate_and_build,
)

from conftest import block_graphs, reference_adjacency


def test_reference_blocks_and_cut_vertices():
    """The reference graph splits into two triangles, an edge and an isolated vertex."""
    g = validate_and_build(reference_adjacency())
    assert set(g.blocks) == {frozenset({0, 1, 2}), frozenset({0, 3, 4}), frozenset({4, 5}), frozenset({6})}
    assert g.cut_vertices == frozenset({0, 4})
    assert len(g.roots) == 2
    assert g.omega == 3


def test_single_edge():
    g = validate_and_build([[1], [0]])
    assert g.blocks == (frozenset({0, 1}),)
    assert g.cut_vertices == frozenset()


def test_four_cycle_rejected():
    """A biconnected component that is not a clique is refused."""
    with pytest.raises(NotABlockGraph):
        validate_and_build([[1, 3], [0, 2], [1, 3], [0, 2]])


def test_diamond_rejected():
    with pytest.raises(NotABlockGraph):
        validate_and_build({0: [1, 2], 1: [0, 2, 3], 2: [0, 1, 3], 3: [1, 2]})


def test_adjacency_mapping_one_sided():
    """Edges listed from one side only are symmetrized."""
    g = validate_and_build({0: [1], 1: [2], 2: []})
    assert g.cut_vertices == frozenset({1})
    assert g.num_blocks == 2


def test_worked_descendants(worked_graph):
    """D(J3) = {J3, J5, J6, J7} and D_1(J4) = {J4, J8} in the worked example."""
    assert descendants(worked_graph, 2) == frozenset({2, 4, 5, 6})
    assert descendants_d(worked_graph, 3, 1) == frozenset({3, 7})
    assert descendants_d(worked_graph, 3, 2) == frozenset({3, 8})
    with pytest.raises(IndexError):
        descendants_d(worked_graph, 3, 3)


def test_subset_descendants(worked_graph):
    """A simplicial member of U contributes only itself."""
    b = worked_graph.blocks.index(frozenset({2, 4, 5}))
    assert descendants_of_subset(worked_graph, b, 2, [4]) == frozenset({4})
    b = worked_graph.blocks.index(frozenset({1, 2, 3}))
    assert descendants_of_subset(worked_graph, b, 1, [2, 3]) == frozenset({2, 3, 4, 5, 6, 7, 8})


def test_plane_order(worked_graph):
    """Children of a cut vertex are ordered by their smallest other vertex."""
    kids = worked_graph.children(("C", 2))
    assert [worked_graph.blocks[b] for _, b in kids] == [frozenset({2, 4, 5}), frozenset({2, 6})]


def test_reference_decomposition():
    g = validate_and_build(reference_adjacency())
    td = tree_decomposition(g)
    nonempty = {b for b in td.bags if b}
    assert nonempty == set(g.blocks)
    assert td.width == 2
    assert is_valid_decomposition(td, g.n, g.edge_list())


def test_clique_decomposition():
    g = BlockCutTree.from_blocks(4, [[0, 1, 2, 3]])
    td = tree_decomposition(g)
    assert td.width == 3
    assert [b for b in td.bags if b] == [frozenset(range(4))]


def test_decomposition_validator_rejects_broken():
    g = BlockCutTree.from_blocks(3, [[0, 1], [1, 2]])
    td = tree_decomposition(g)
    bad = type(td)(bags=tuple(b - {1} for b in td.bags), children=td.children, root=td.root)
    assert not is_valid_decomposition(bad, g.n, g.edge_list())


def test_json_round_trip(worked_graph):
    assert BlockCutTree.from_json(worked_graph.to_json()) == worked_graph


@settings(max_examples=200, deadline=None)
@given(block_graphs(n_max=14, m_max=5))
def test_rebuild_from_adjacency(mg):
    """validate_and_build on the expanded adjacency gives the same forest shape."""
    _, g = mg
    h = validate_and_build(g.adjacency())
    assert Counter(len(b) for b in h.blocks) == Counter(len(b) for b in g.blocks)
    assert len(h.cut_vertices) == len(g.cut_vertices)


@settings(max_examples=200, deadline=None)
@given(block_graphs(n_max=14, m_max=5))
def test_cut_count_bound(mg):
    _, g = mg
    assert len(g.cut_vertices) <= g.num_blocks - 1


@settings(max_examples=200, deadline=None)
@given(block_graphs(n_max=14, m_max=5))
def test_descendant_partition(mg):
    """D(v) is the union of the D_d(v), which overlap only in v."""
    _, g = mg
    for v in g.cut_vertices:
        d = descendants(g, v)
        assert v in d
        parts = [descendants_d(g, v, i) - {v} for i in range(1, len(g.children(("C", v))) + 1)]
        assert set().union(*parts) | {v} == d
        assert sum(len(p) for p in parts) == len(d) - 1


@settings(max_examples=200, deadline=None)
@given(block_graphs(n_max=14, m_max=5))
def test_decomposition_valid(mg):
    _, g = mg
    td = tree_decomposition(g)
    assert is_valid_decomposition(td, g.n, g.edge_list())
    assert td.width == g.omega - 1
