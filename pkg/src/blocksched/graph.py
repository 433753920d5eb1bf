"""Block graphs, their block-cut forests and tree decompositions.

Vertices are dense integers ``0..n-1``. Blocks are stored as frozensets and
kept in a canonical order (lexicographic on the sorted vertex tuple), so a
block's index is stable across runs.

Tree nodes are tagged tuples: ``("B", i)`` for the i-th block and
``("C", v)`` for cut vertex ``v``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import NotABlockGraph

Node = tuple[str, int]


def _biconnected_components(n: int, adj: Sequence[Sequence[int]]) -> list[set[int]]:
    """Vertex sets of the biconnected components (iterative Hopcroft-Tarjan).

    Isolated vertices come back as singleton components.
    """
    disc = [-1] * n
    low = [0] * n
    comps: list[set[int]] = []
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        if not adj[root]:
            disc[root] = timer
            timer += 1
            comps.append({root})
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack: list[tuple[int, int]] = []
        # frame: (vertex, parent, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, parent, pos = stack[-1]
            if pos < len(adj[v]):
                stack[-1] = (v, parent, pos + 1)
                w = adj[v][pos]
                if disc[w] == -1:
                    edge_stack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, 0))
                elif w != parent and disc[w] < disc[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], disc[w])
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[v])
            if low[v] >= disc[parent]:
                comp: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.add(a)
                    comp.add(b)
                    if (a, b) == (parent, v):
                        break
                comps.append(comp)
    return comps


def _normalize_adjacency(adjacency) -> list[list[int]]:
    if isinstance(adjacency, Mapping):
        n = (max(adjacency) + 1) if adjacency else 0
        rows = [adjacency.get(v, ()) for v in range(n)]
    else:
        rows = list(adjacency)
    n = len(rows)
    adj = [set() for _ in range(n)]
    for v, row in enumerate(rows):
        for w in row:
            w = int(w)
            if not 0 <= w < n:
                raise ValueError(f"neighbour {w} of vertex {v} out of range")
            if w == v:
                raise ValueError(f"self-loop at vertex {v}")
            adj[v].add(w)
            adj[w].add(v)
    return [sorted(s) for s in adj]


@dataclass(frozen=True)
class BlockCutTree:
    """Rooted block-cut forest of a block graph.

    Attributes
    ----------
    n : int
        Number of vertices.
    blocks : tuple of frozenset
        Maximal cliques in canonical order.
    cut_vertices : frozenset
        Vertices lying in two or more blocks.
    edges : tuple of (int, int)
        ``(block index, cut vertex)`` adjacencies of the forest.
    roots : tuple of int
        Root block of every connected component, ordered by smallest vertex.
    child_order : dict
        Node -> ordered tuple of child nodes (plane order).
    """

    n: int
    blocks: tuple[frozenset, ...]
    cut_vertices: frozenset
    edges: tuple[tuple[int, int], ...]
    roots: tuple[int, ...]
    child_order: Mapping[Node, tuple[Node, ...]] = field(repr=False, compare=False)
    parent: Mapping[Node, Node | None] = field(repr=False, compare=False)
    vertex_blocks: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    # construction

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "BlockCutTree":
        """Build from a block list; the graph is re-validated."""
        adj: list[set[int]] = [set() for _ in range(n)]
        for block in blocks:
            vs = [int(v) for v in block]
            for v in vs:
                if not 0 <= v < n:
                    raise ValueError(f"vertex {v} out of range for n={n}")
            for i, v in enumerate(vs):
                for w in vs[i + 1:]:
                    if v != w:
                        adj[v].add(w)
                        adj[w].add(v)
        return validate_and_build([sorted(s) for s in adj])

    # basic properties

    @property
    def root(self) -> Node | None:
        """Root node of the first component, or None for an empty graph."""
        return ("B", self.roots[0]) if self.roots else None

    @property
    def omega(self) -> int:
        """Clique number, i.e. the largest block size."""
        return max((len(b) for b in self.blocks), default=0)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def is_connected(self) -> bool:
        return len(self.roots) <= 1

    def adjacency(self) -> list[list[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for block in self.blocks:
            for v in block:
                adj[v].update(block)
                adj[v].discard(v)
        return [sorted(s) for s in adj]

    def edge_list(self) -> list[tuple[int, int]]:
        return [(v, w) for v, row in enumerate(self.adjacency()) for w in row if v < w]

    def children(self, node: Node) -> tuple[Node, ...]:
        return self.child_order.get(node, ())

    def parent_cut(self, b: int) -> int | None:
        """Cut vertex above block ``b`` (None for a root block)."""
        p = self.parent[("B", b)]
        return None if p is None else p[1]

    def parent_block(self, v: int) -> int:
        """Block above cut vertex ``v``."""
        if v not in self.cut_vertices:
            raise ValueError(f"{v} is not a cut vertex")
        return self.parent[("C", v)][1]

    def preorder(self) -> list[Node]:
        """All forest nodes in plane pre-order, component by component."""
        out: list[Node] = []
        for r in self.roots:
            stack = [("B", r)]
            while stack:
                node = stack.pop()
                out.append(node)
                stack.extend(reversed(self.children(node)))
        return out

    def block_preorder(self) -> list[int]:
        return [i for kind, i in self.preorder() if kind == "B"]

    def job_preorder(self) -> list[int]:
        """Vertices in the order they are first met by a block pre-order walk."""
        seen: set[int] = set()
        order: list[int] = []
        for b in self.block_preorder():
            for v in sorted(self.blocks[b]):
                if v not in seen:
                    seen.add(v)
                    order.append(v)
        return order

    def cut_preorder(self) -> list[int]:
        return [v for kind, v in self.preorder() if kind == "C"]

    def components(self) -> list[list[int]]:
        """Vertex lists of the connected components, ordered like ``roots``."""
        comps = []
        for r in self.roots:
            verts: set[int] = set()
            stack = [("B", r)]
            while stack:
                node = stack.pop()
                if node[0] == "B":
                    verts.update(self.blocks[node[1]])
                stack.extend(self.children(node))
            comps.append(sorted(verts))
        return comps

    # descendant queries

    def _subtree_vertices(self, node: Node) -> set[int]:
        verts: set[int] = set()
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur[0] == "B":
                verts.update(self.blocks[cur[1]])
            else:
                verts.add(cur[1])
            stack.extend(self.children(cur))
        return verts

    # serialization

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": [sorted(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: Mapping) -> "BlockCutTree":
        return cls.from_blocks(int(data["n"]), data["blocks"])


def validate_and_build(adjacency) -> BlockCutTree:
    """Check that a graph is a block graph and build its block-cut forest.

    Parameters
    ----------
    adjacency : sequence of sequences or mapping
        Neighbour lists indexed by vertex id. Edges may be listed from one
        side only.

    Returns
    -------
    BlockCutTree

    Raises
    ------
    NotABlockGraph
        If some biconnected component is not a clique.
    """
    adj = _normalize_adjacency(adjacency)
    n = len(adj)
    comps = _biconnected_components(n, adj)
    adj_sets = [set(row) for row in adj]
    for comp in comps:
        c = len(comp)
        edges = sum(len(adj_sets[v] & comp) for v in comp) // 2
        if edges != c * (c - 1) // 2:
            raise NotABlockGraph(f"component {sorted(comp)} is not a clique")
    blocks = tuple(frozenset(b) for b in sorted((tuple(sorted(c)) for c in comps)))

    vertex_blocks_l: list[list[int]] = [[] for _ in range(n)]
    for i, b in enumerate(blocks):
        for v in b:
            vertex_blocks_l[v].append(i)
    vertex_blocks = tuple(tuple(x) for x in vertex_blocks_l)
    cut_vertices = frozenset(v for v in range(n) if len(vertex_blocks[v]) >= 2)
    edges = tuple(sorted((i, v) for v in cut_vertices for i in vertex_blocks[v]))

    child_order: dict[Node, tuple[Node, ...]] = {}
    parent: dict[Node, Node | None] = {}
    roots: list[int] = []
    for v in range(n):
        if ("B", vertex_blocks[v][0]) in parent:
            continue
        # smallest vertex of a new component: its first block is the root
        root = vertex_blocks[v][0]
        roots.append(root)
        parent[("B", root)] = None
        stack: list[Node] = [("B", root)]
        while stack:
            node = stack.pop()
            up = parent[node]
            if node[0] == "B":
                skip = None if up is None else up[1]
                kids = tuple(("C", c) for c in sorted(blocks[node[1]]) if c in cut_vertices and c != skip)
            else:
                c = node[1]
                others = [b for b in vertex_blocks[c] if b != up[1]]
                others.sort(key=lambda b: min(blocks[b] - {c}))
                kids = tuple(("B", b) for b in others)
            child_order[node] = kids
            for kid in kids:
                parent[kid] = node
            stack.extend(kids)
    return BlockCutTree(
        n=n,
        blocks=blocks,
        cut_vertices=cut_vertices,
        edges=edges,
        roots=tuple(roots),
        child_order=child_order,
        parent=parent,
        vertex_blocks=vertex_blocks,
    )


def descendants(tree: BlockCutTree, v: int) -> frozenset:
    """D(v): the cut vertex ``v`` together with everything below it."""
    if v not in tree.cut_vertices:
        raise ValueError(f"{v} is not a cut vertex")
    return frozenset(tree._subtree_vertices(("C", v)))


def descendants_d(tree: BlockCutTree, v: int, d: int) -> frozenset:
    """D_d(v): ``v`` plus the subtree of its d-th child block (1-based)."""
    if v not in tree.cut_vertices:
        raise ValueError(f"{v} is not a cut vertex")
    kids = tree.children(("C", v))
    if not 1 <= d <= len(kids):
        raise IndexError(f"cut vertex {v} has {len(kids)} child blocks, asked for {d}")
    return frozenset(tree._subtree_vertices(kids[d - 1]) | {v})


def descendants_of_subset(tree: BlockCutTree, block: int, v: int | None, subset: Iterable[int]) -> frozenset:
    """D(U) for ``U`` inside ``block`` minus its parent vertex ``v``."""
    members = tree.blocks[block]
    out: set[int] = set()
    for u in subset:
        if u not in members or u == v:
            raise ValueError(f"{u} is not in block {sorted(members)} minus {v}")
        out.add(u)
        if u in tree.cut_vertices and tree.parent[("C", u)] == ("B", block):
            out |= tree._subtree_vertices(("C", u))
    return frozenset(out)


# tree decompositions


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree decomposition where every node has zero or two children.

    Attributes
    ----------
    bags : tuple of frozenset
    children : tuple of tuple of int
        Child indices of each node; length 0 or 2.
    root : int
    """

    bags: tuple[frozenset, ...]
    children: tuple[tuple[int, ...], ...]
    root: int

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack = [(self.root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                out.append(node)
                continue
            stack.append((node, True))
            for kid in reversed(self.children[node]):
                stack.append((kid, False))
        return out


def tree_decomposition(tree: BlockCutTree) -> TreeDecomposition:
    """One bag per block, then binarized.

    A node with one child gets an extra empty leaf; a node with more than
    two children keeps its first child and hands the rest to a copy of its
    own bag. Several components hang below an empty root bag.
    """
    bags: list[frozenset] = []
    children: list[tuple[int, ...]] = []

    def new(bag: frozenset) -> int:
        bags.append(bag)
        children.append(())
        return len(bags) - 1

    def attach(node: int, kids: list[int]) -> None:
        if not kids:
            return
        if len(kids) == 1:
            children[node] = (kids[0], new(frozenset()))
        elif len(kids) == 2:
            children[node] = (kids[0], kids[1])
        else:
            dup = new(bags[node])
            children[node] = (kids[0], dup)
            attach(dup, kids[1:])

    def block_kids(b: int) -> list[int]:
        return [bb for _, c in tree.children(("B", b)) for _, bb in tree.children(("C", c))]

    # build bottom-up so that ``attach`` sees finished children
    node_of: dict[int, int] = {}
    order = tree.block_preorder()
    for b in reversed(order):
        node = new(tree.blocks[b])
        node_of[b] = node
        attach(node, [node_of[k] for k in block_kids(b)])

    if not tree.roots:
        return TreeDecomposition(bags=(frozenset(),), children=((),), root=0)
    if len(tree.roots) == 1:
        root = node_of[tree.roots[0]]
    else:
        root = new(frozenset())
        attach(root, [node_of[r] for r in tree.roots])
    return TreeDecomposition(bags=tuple(bags), children=tuple(children), root=root)


def is_valid_decomposition(td: TreeDecomposition, n: int, edges: Iterable[tuple[int, int]]) -> bool:
    """Independent check of coverage, edge coverage and subtree connectivity."""
    m = len(td.bags)
    parent = [-1] * m
    seen = {td.root}
    stack = [td.root]
    while stack:
        node = stack.pop()
        if len(td.children[node]) not in (0, 2):
            return False
        for kid in td.children[node]:
            if kid in seen:
                return False
            seen.add(kid)
            parent[kid] = node
            stack.append(kid)
    if len(seen) != m:
        return False
    covered = set().union(*td.bags) if td.bags else set()
    if covered != set(range(n)):
        return False
    for v, w in edges:
        if not any(v in bag and w in bag for bag in td.bags):
            return False
    for v in range(n):
        holders = [i for i in range(m) if v in td.bags[i]]
        # connected iff exactly one holder has a parent outside the holder set
        tops = [i for i in holders if parent[i] == -1 or v not in td.bags[parent[i]]]
        if len(tops) != 1:
            return False
    return True
