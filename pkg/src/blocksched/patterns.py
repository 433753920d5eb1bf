"""Coloring patterns for unit jobs on identical machines.

A proper coloring of a rooted piece of the block graph with ``m`` colors,
each used at most ``k`` times, is summarized by its pattern ``(a, b)``:
``a[c]`` counts the colors of cardinality ``c`` used by the anchor (the cut
vertex, or the block subset ``U``), ``b[c]`` counts all other colors,
unused ones included. Each stored pattern keeps the first coloring found
for it, as explicit color classes.

Vertex ids are the graph's ids; the trace keys use them directly.
"""

from __future__ import annotations

from collections.abc import Iterator
from functools import lru_cache
from math import ceil
from typing import NamedTuple

from .budget import Budget, ensure
from .errors import Infeasible
from .graph import BlockCutTree
from .greedy import greedy_schedule
from .model import Identical, Instance, Schedule, makespan

Classes = tuple[frozenset, ...]


def histogram(classes: Classes, k: int) -> tuple[int, ...]:
    h = [0] * (k + 1)
    for c in classes:
        h[len(c)] += 1
    return tuple(h)


class Pattern(NamedTuple):
    """Pattern vectors plus a witness coloring.

    ``anchor_classes`` are the color classes counted in ``a`` and
    ``other_classes`` those counted in ``b``.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]
    anchor_classes: Classes
    other_classes: Classes

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.a, self.b

    def classes(self) -> Classes:
        return self.anchor_classes + self.other_classes

    def coloring(self) -> dict[int, int]:
        """Vertex -> color index, anchor colors first."""
        return {v: c for c, cls in enumerate(self.classes()) for v in cls}


def _make(anchor: Classes, other: Classes, k: int) -> Pattern:
    return Pattern(histogram(anchor, k), histogram(other, k), tuple(anchor), tuple(other))


class PatternSet:
    """Patterns keyed by ``(a, b)``; the first witness of a key is kept."""

    def __init__(self, m: int, k: int, anchor=None, budget: Budget | None = None) -> None:
        self.m = m
        self.k = k
        self.anchor = anchor
        self._items: dict = {}
        self._budget = budget

    def add(self, pattern: Pattern) -> bool:
        if pattern.key in self._items:
            return False
        self._items[pattern.key] = pattern
        if self._budget is not None:
            self._budget.charge()
        return True

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, key) -> bool:
        return key in self._items

    def __getitem__(self, key) -> Pattern:
        return self._items[key]

    def relabel(self, anchor) -> "PatternSet":
        """Shallow copy with a different anchor descriptor."""
        out = PatternSet(self.m, self.k, anchor=anchor)
        out._items = dict(self._items)
        return out

    def vectors(self) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
        return set(self._items)

    def flat(self) -> set[tuple[int, ...]]:
        """Patterns as concatenated ``a + b`` tuples, the notation of the examples."""
        return {a + b for a, b in self._items}

    def __repr__(self) -> str:
        body = ", ".join(f"({','.join(map(str, a))};{','.join(map(str, b))})" for a, b in self._items)
        return f"PatternSet({{{body}}})"


@lru_cache(maxsize=None)
def _match(left: tuple[tuple[int, int], ...], right: tuple[int, ...], k: int):
    """All ways to pair two equally long multisets of colors.

    ``left`` holds ``(kind, card)`` items, ``right`` plain cardinalities.
    Every left color is identified with one right color and the merged
    cardinality must stay at most ``k``. Returns a tuple of
    ``(result, path)`` with ``result`` the sorted multiset of merged
    ``(kind, card)`` items and ``path`` the ``((kind, lcard), rcard)``
    pairs of the first pairing reaching it.
    """
    if not right:
        return (((), ()),)
    r, rest = right[0], right[1:]
    out: dict = {}
    for idx, item in enumerate(left):
        if idx and left[idx - 1] == item:
            continue
        kind, card = item
        if card + r > k:
            continue
        remaining = left[:idx] + left[idx + 1:]
        for res, path in _match(remaining, rest, k):
            merged = tuple(sorted(res + ((kind, card + r),)))
            if merged not in out:
                out[merged] = ((item, r),) + path
    return tuple(out.items())


def _realize(
    left: list[tuple[int, frozenset]],
    right: list[frozenset],
    path,
) -> list[tuple[int, frozenset]]:
    """Turn a cardinality pairing back into concrete merged classes."""
    left = list(left)
    right = list(right)
    out = []
    for (kind, lcard), rcard in path:
        li = next(i for i, (kd, c) in enumerate(left) if kd == kind and len(c) == lcard)
        ri = next(i for i, c in enumerate(right) if len(c) == rcard)
        out.append((kind, left.pop(li)[1] | right.pop(ri)))
    return out


def _pair_classes(left: list[tuple[int, frozenset]], right: list[frozenset], k: int):
    """Yield merged class lists, one per distinct resulting multiset."""
    lkey = tuple(sorted((kd, len(c)) for kd, c in left))
    rkey = tuple(sorted((len(c) for c in right), reverse=True))
    for _, path in _match(lkey, rkey, k):
        yield _realize(left, right, path)


def simplicial_pattern(m: int, k: int, v: int = 0) -> PatternSet:
    """``{(1^1, (m-1) 1^0)}``: a lone vertex in its own color."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    out = PatternSet(m, k, anchor=v)
    out.add(_make((frozenset({v}),), (frozenset(),) * (m - 1), k))
    return out


def merge_child_patterns(mp: PatternSet, pd: PatternSet, m: int, k: int, d: int = 2, budget: Budget | None = None) -> PatternSet:
    """Combine the first ``d-1`` child subtrees of a cut vertex with the d-th.

    The two colors of the shared cut vertex are identified; the remaining
    ``m - 1`` colors of both sides are paired in every possible way.
    """
    if d == 1:
        return pd
    out = PatternSet(m, k, anchor=mp.anchor, budget=budget)
    for p in mp:
        for q in pd:
            cv = p.anchor_classes[0] | q.anchor_classes[0]
            if len(cv) > k:
                continue
            left = [(1, c) for c in p.other_classes]
            for merged in _pair_classes(left, list(q.other_classes), k):
                out.add(_make((cv,), tuple(c for _, c in merged), k))
    return out


def merge_block_vertex(pu: PatternSet | None, pv: PatternSet, m: int, k: int, budget: Budget | None = None) -> PatternSet:
    """Add vertex ``u`` (with everything below it) to a block subset ``U``.

    ``u``'s own color may only join a color not used by ``U``; the other
    colors below ``u`` may join any color. ``pu=None`` stands for the empty
    subset, in which case ``pv`` is returned unchanged.
    """
    if pu is None:
        return pv
    out = PatternSet(m, k, budget=budget)
    for p in pu:
        for q in pv:
            u_cls = q.anchor_classes[0]
            tried: set[int] = set()
            for idx, cls in enumerate(p.other_classes):
                if len(cls) in tried or len(cls) + len(u_cls) > k:
                    continue
                tried.add(len(cls))
                joined = cls | u_cls
                left = [(0, c) for c in p.anchor_classes] + [(1, c) for i, c in enumerate(p.other_classes) if i != idx]
                for merged in _pair_classes(left, list(q.other_classes), k):
                    a_cls = (joined,) + tuple(c for kd, c in merged if kd == 0)
                    b_cls = tuple(c for kd, c in merged if kd == 1)
                    out.add(_make(a_cls, b_cls, k))
    return out


def lift_block_to_cut(pu: PatternSet, v: int, m: int, k: int, budget: Budget | None = None) -> PatternSet:
    """Give the parent cut vertex ``v`` a color not used inside the block."""
    out = PatternSet(m, k, anchor=v, budget=budget)
    for p in pu:
        tried: set[int] = set()
        for idx, cls in enumerate(p.other_classes):
            if len(cls) in tried or len(cls) > k - 1:
                continue
            tried.add(len(cls))
            rest = p.anchor_classes + tuple(c for i, c in enumerate(p.other_classes) if i != idx)
            out.add(_make((cls | {v},), rest, k))
    return out


class _EarlyNo(Exception):
    pass


class _Rooted:
    """Vertex-rooted view of a block graph used by the recursion."""

    def __init__(self, blocks: list[frozenset], n: int) -> None:
        self.blocks = blocks
        self.vertex_blocks: list[list[int]] = [[] for _ in range(n)]
        for i, b in enumerate(blocks):
            for v in b:
                self.vertex_blocks[v].append(i)

    def child_blocks(self, v: int, parent_block: int | None) -> list[int]:
        kids = [b for b in self.vertex_blocks[v] if b != parent_block and len(self.blocks[b]) > 1]
        kids.sort(key=lambda b: min(self.blocks[b] - {v}))
        return kids


def _all_patterns(
    rooted: _Rooted,
    root: int,
    m: int,
    k: int,
    budget: Budget,
    trace: dict | None,
    early_abort: bool,
) -> PatternSet:
    def check(ps: PatternSet) -> PatternSet:
        if early_abort and len(ps) == 0:
            raise _EarlyNo
        return ps

    def visit(v: int, parent_block: int | None) -> PatternSet:
        budget.tick()
        kids = rooted.child_blocks(v, parent_block)
        mp = simplicial_pattern(m, k, v)
        for d, blk in enumerate(kids, start=1):
            pu: PatternSet | None = None
            members: list[int] = []
            for u in sorted(rooted.blocks[blk] - {v}):
                pv = visit(u, blk)
                members.append(u)
                pu = check(merge_block_vertex(pu, pv, m, k, budget)).relabel(frozenset(members))
                if trace is not None:
                    trace[("U", blk, frozenset(members))] = pu
            pd = check(lift_block_to_cut(pu, v, m, k, budget))
            if trace is not None:
                trace[("P_d", v, d)] = pd
            mp = check(merge_child_patterns(mp, pd, m, k, d, budget))
            if trace is not None:
                trace[("MP", v, d)] = mp
        if trace is not None:
            trace[("P", v)] = mp
        return mp

    try:
        return visit(root, None)
    except _EarlyNo:
        return PatternSet(m, k, anchor=root)


def all_patterns(
    tree: BlockCutTree,
    m: int,
    k: int,
    root: int = 0,
    budget: Budget | None = None,
    trace: dict | None = None,
    early_abort: bool = False,
) -> PatternSet:
    """P(root): every pattern of the component containing ``root``.

    Parameters
    ----------
    tree : BlockCutTree
    m, k : int
        Number of colors and the cap on color class size.
    root : int
        Vertex the recursion is rooted at.
    budget : Budget, optional
    trace : dict, optional
        Filled with intermediate sets under keys ``("P", v)``,
        ``("P_d", v, d)``, ``("MP", v, d)`` and ``("U", block, U)``.
    early_abort : bool
        Stop as soon as any intermediate set is empty.
    """
    if tree.n == 0:
        raise ValueError("empty graph")
    rooted = _Rooted(list(tree.blocks), tree.n)
    return _all_patterns(rooted, root, m, k, ensure(budget), trace, early_abort)


def _decode(classes: Classes, n: int) -> Schedule:
    real = [sorted(v for v in c if v < n) for c in classes]
    order = sorted(range(len(real)), key=lambda i: (not real[i], real[i][0] if real[i] else 0, i))
    assign = [-1] * n
    for machine, ci in enumerate(order):
        for v in real[ci]:
            assign[v] = machine
    return Schedule(tuple(assign))


def decide_bounded_makespan(
    inst: Instance,
    k: int,
    budget: Budget | None = None,
    early_abort: bool = False,
    trace: dict | None = None,
) -> Schedule:
    """Schedule unit jobs with at most ``k`` jobs per machine.

    Disconnected graphs get a dummy root joined to the smallest vertex of
    each component and one extra color, which must end up holding the
    dummy alone.

    Raises
    ------
    Infeasible
        If no such schedule exists.
    """
    if not isinstance(inst.env, Identical):
        raise ValueError("decide_bounded_makespan needs identical machines")
    if not inst.is_unit:
        raise ValueError("decide_bounded_makespan needs unit jobs")
    if k < 1:
        raise Infeasible("k must be at least 1")
    g, m, n = inst.graph, inst.m, inst.n
    if g.omega > m:
        raise Infeasible(f"a block of size {g.omega} does not fit on {m} machines")
    budget = ensure(budget)
    blocks = list(g.blocks)
    if g.is_connected:
        rooted = _Rooted(blocks, n)
        result = _all_patterns(rooted, 0, m, k, budget, trace, early_abort)
        if not len(result):
            raise Infeasible(f"no schedule with at most {k} jobs per machine")
        return _decode(next(iter(result)).classes(), n)
    r = n
    blocks += [frozenset({r, comp[0]}) for comp in g.components()]
    rooted = _Rooted(blocks, n + 1)
    result = _all_patterns(rooted, r, m + 1, k, budget, trace, early_abort)
    for p in result:
        if len(p.anchor_classes[0]) == 1:
            return _decode(p.other_classes, n)
    raise Infeasible(f"no schedule with at most {k} jobs per machine")


def min_makespan_unit(inst: Instance, k_max: int | None = None, budget: Budget | None = None) -> Schedule:
    """Optimal unit-job schedule by searching ``k`` upward.

    The search starts at ``ceil(n/m)`` and stops at ``k_max``; when
    ``k_max`` is None the greedy makespan is used, which is always feasible.
    """
    if inst.n == 0:
        return Schedule(())
    if k_max is None:
        k_max = int(makespan(inst, greedy_schedule(inst)))
    for k in range(max(1, ceil(inst.n / inst.m)), k_max + 1):
        try:
            return decide_bounded_makespan(inst, k, budget)
        except Infeasible:
            continue
    raise Infeasible(f"no schedule with at most {k_max} jobs per machine")
