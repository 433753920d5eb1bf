"""A small deterministic Dinic max-flow solver for integer capacities."""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable


class FlowNetwork:
    """Directed network with labelled nodes and integer capacities.

    Edges are stored in insertion order; ``edges[e] = (u, v, cap)`` with
    node indices. Reverse residual arcs are kept internally.
    """

    def __init__(self) -> None:
        self.labels: list[Hashable] = []
        self.index: dict[Hashable, int] = {}
        self.edges: list[tuple[int, int, int]] = []

    def add_node(self, label: Hashable) -> int:
        if label in self.index:
            return self.index[label]
        self.index[label] = len(self.labels)
        self.labels.append(label)
        return self.index[label]

    def add_edge(self, u: Hashable, v: Hashable, cap: int) -> int:
        if cap < 0:
            raise ValueError("capacities must be non-negative")
        self.edges.append((self.add_node(u), self.add_node(v), int(cap)))
        return len(self.edges) - 1

    def edge_set(self) -> set[tuple[Hashable, Hashable, int]]:
        """Edges as ``(label_u, label_v, capacity)`` triples."""
        return {(self.labels[u], self.labels[v], c) for u, v, c in self.edges}

    def __len__(self) -> int:
        return len(self.labels)


def max_flow(net: FlowNetwork, source: Hashable = "s", sink: Hashable = "t") -> tuple[int, list[int]]:
    """Maximum ``source``-``sink`` flow.

    Returns
    -------
    (int, list of int)
        Flow value and the flow on every edge, in ``net.edges`` order.
    """
    if source not in net.index or sink not in net.index:
        return 0, [0] * len(net.edges)
    s, t = net.index[source], net.index[sink]
    size = len(net.labels)
    # residual arcs: arc 2e is edge e, arc 2e+1 its reverse
    head: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(size)]
    for u, v, c in net.edges:
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0)

    value = 0
    while True:
        level = [-1] * size
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[head[a]] < 0:
                    level[head[a]] = level[u] + 1
                    queue.append(head[a])
        if level[t] < 0:
            break
        ptr = [0] * size
        while True:
            # iterative DFS for one augmenting path in the level graph
            path: list[int] = []
            u = s
            while u != t:
                advanced = False
                while ptr[u] < len(adj[u]):
                    a = adj[u][ptr[u]]
                    if cap[a] > 0 and level[head[a]] == level[u] + 1:
                        path.append(a)
                        u = head[a]
                        advanced = True
                        break
                    ptr[u] += 1
                if not advanced:
                    if u == s:
                        break
                    # dead end: retreat and skip the arc that led here
                    level[u] = -1
                    a = path.pop()
                    u = head[a ^ 1]
                    ptr[u] += 1
            if u != t:
                break
            push = min(cap[a] for a in path)
            for a in path:
                cap[a] -= push
                cap[a ^ 1] += push
            value += push
    flows = [net.edges[e][2] - cap[2 * e] for e in range(len(net.edges))]
    return value, flows
