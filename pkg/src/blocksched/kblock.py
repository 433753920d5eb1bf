"""Uniform machines with a bounded number of blocks.

``k_approx`` tries every placement of the cut vertices and fills each block
greedily onto the fastest free machines. ``ptas_core`` is the configuration
dynamic program for one makespan guess, and ``ptas_uniform`` wraps it in a
bounded bisection seeded by ``k_approx``.

Rounded sizes are handled as integer exponents of ``1 + eps`` with exact
rational powers, so no logarithm is ever evaluated in floating point.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from .budget import Budget, ensure
from .errors import Infeasible
from .model import Identical, Instance, Schedule, Uniform, makespan


def _speeds(inst: Instance) -> tuple[int, ...]:
    if isinstance(inst.env, Uniform):
        return inst.env.speeds
    if isinstance(inst.env, Identical):
        return (1,) * inst.m
    raise ValueError("needs identical or uniform machines")


def _valid_cut_assignments(inst: Instance) -> Iterator[dict[int, int]]:
    """Cut-vertex placements with no two adjacent cut vertices together."""
    g, m = inst.graph, inst.m
    order = g.cut_preorder()
    adj = g.adjacency()
    current: dict[int, int] = {}

    def rec(pos: int) -> Iterator[dict[int, int]]:
        if pos == len(order):
            yield dict(current)
            return
        v = order[pos]
        for i in range(m):
            if any(current.get(w) == i for w in adj[v]):
                continue
            current[v] = i
            yield from rec(pos + 1)
            del current[v]

    yield from rec(0)


def k_approx(inst: Instance, budget: Budget | None = None) -> Schedule:
    """Best greedy completion over all cut-vertex placements.

    Machines are indexed by non-increasing speed, so "fastest free machine"
    means lowest free index. The makespan is at most ``k`` times the
    optimum for a graph with ``k`` blocks.

    Raises
    ------
    Infeasible
        If a block is larger than the number of machines.
    """
    _speeds(inst)  # rejects unrelated machines
    g = inst.graph
    if g.omega > inst.m:
        raise Infeasible(f"a block of size {g.omega} does not fit on {inst.m} machines")
    budget = ensure(budget)
    p = inst.proc
    best: Schedule | None = None
    best_c: Fraction | None = None
    for f in _valid_cut_assignments(inst):
        budget.tick()
        assign = [-1] * inst.n
        for v, i in f.items():
            assign[v] = i
        for block in g.blocks:
            jobs = sorted((j for j in block if assign[j] < 0), key=lambda j: (-p[j], j))
            taken = {assign[v] for v in block if v in f}
            i = 0
            for j in jobs:
                while i in taken:
                    i += 1
                assign[j] = i
                i += 1
        sched = Schedule(tuple(assign))
        c = makespan(inst, sched)
        if best_c is None or c < best_c:
            best, best_c = sched, c
    assert best is not None
    return best


# exact exponent arithmetic


class _Powers:
    """Cached powers of a rational base greater than one."""

    def __init__(self, base: Fraction) -> None:
        if base <= 1:
            raise ValueError("base must exceed 1")
        self.base = base
        self._pos = [Fraction(1)]
        self._neg = [Fraction(1)]

    def __call__(self, e: int) -> Fraction:
        table, step = (self._pos, self.base) if e >= 0 else (self._neg, 1 / self.base)
        while len(table) <= abs(e):
            table.append(table[-1] * step)
        return table[abs(e)]

    def floor_log(self, x: Fraction) -> int:
        """Largest ``e`` with ``base**e <= x``."""
        if x <= 0:
            raise ValueError("x must be positive")
        e = 0
        if x >= 1:
            while self(e + 1) <= x:
                e += 1
            return e
        while self(e) > x:
            e -= 1
        return e

    def ceil_log(self, x: Fraction) -> int:
        """Smallest ``g`` with ``base**g >= x``."""
        e = self.floor_log(x)
        return e if self(e) == x else e + 1


# configurations


@dataclass(frozen=True)
class Configuration:
    """Unscheduled jobs at a given basis.

    ``small[s]`` counts simplicial jobs of block ``s`` below the basis,
    ``counts[s][t]`` those with rounded size ``(1+eps)**(basis+t)`` and
    ``flags[c]`` is 1 while the c-th cut vertex is unscheduled.
    """

    basis: int
    small: tuple[int, ...]
    counts: tuple[tuple[int, ...], ...]
    flags: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.small) and not any(map(any, self.counts)) and not any(self.flags)


class ConfigurationDP:
    """State of the configuration dynamic program for one guess ``C``.

    Parameters
    ----------
    inst : Instance
        Uniform (or identical) machines.
    C : Fraction
        Makespan guess.
    eps : Fraction
    """

    def __init__(self, inst: Instance, C, eps) -> None:
        self.inst = inst
        self.C = Fraction(C)
        self.eps = Fraction(eps)
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        self.pow = _Powers(1 + self.eps)
        g = inst.graph
        self.k = len(g.blocks)
        self.speeds = _speeds(inst)
        # tau = ceil(log_{1+eps}(k/eps)), at least 0
        self.tau = max(0, self.pow.ceil_log(Fraction(max(self.k, 1)) / self.eps))
        self.exp = [self.pow.floor_log(Fraction(p)) for p in inst.proc]
        self.cuts = g.cut_preorder()
        self.cut_index = {v: c for c, v in enumerate(self.cuts)}
        self.simplicial = [sorted(j for j in b if j not in g.cut_vertices) for b in g.blocks]
        self.cut_blocks = [g.vertex_blocks[v] for v in self.cuts]
        cap = [self.C * s for s in self.speeds]
        self.g_exp = [self.pow.ceil_log(c) if c > 0 else None for c in cap]
        self.order = sorted(range(inst.m), key=lambda i: (cap[i], i))
        self.cap = cap
        self.basis = [0] + [max(self.g_exp[i] - self.tau, 0) for i in self.order]

    def rounded(self, j: int) -> Fraction:
        return self.pow(self.exp[j])

    def necessary(self) -> bool:
        """Largest rounded job fits the largest rounded capacity."""
        if self.C <= 0:
            return self.inst.n == 0
        return max(self.exp, default=0) <= max(self.g_exp)

    def _block_config(self, s: int, basis: int, scheduled: set[int]) -> tuple[int, tuple[int, ...]]:
        small = 0
        counts = [0] * (self.tau + 1)
        for j in self.simplicial[s]:
            if j in scheduled:
                continue
            e = self.exp[j]
            if e < basis:
                small += 1
            elif e <= basis + self.tau:
                counts[e - basis] += 1
        return small, tuple(counts)

    def residual(self, scheduled: set[int], step: int) -> Configuration:
        """Configuration of the jobs outside ``scheduled`` at basis ``basis[step]``."""
        basis = self.basis[step]
        per = [self._block_config(s, basis, scheduled) for s in range(self.k)]
        return Configuration(
            basis=basis,
            small=tuple(x for x, _ in per),
            counts=tuple(c for _, c in per),
            flags=tuple(0 if v in scheduled else 1 for v in self.cuts),
        )

    def initial(self) -> Configuration:
        return self.residual(set(), 0)

    def convert(self, u: Configuration, basis: int) -> Configuration:
        """Re-express ``u`` at a basis at least as large as its own."""
        old = u.basis
        if basis < old:
            raise ValueError("bases never decrease")
        if basis == old:
            return u
        small = []
        counts = []
        top_old = old + self.tau
        for s in range(self.k):
            c_old = u.counts[s]
            sm = u.small[s]
            # visible jobs that fall below the new basis
            sm += sum(c_old[e - old] for e in range(old, min(basis, top_old + 1)))
            # never-visible jobs that are already below the new basis
            sm += sum(1 for j in self.simplicial[s] if top_old < self.exp[j] < basis)
            new = []
            for e in range(basis, basis + self.tau + 1):
                if e <= top_old:
                    new.append(c_old[e - old])
                else:
                    new.append(sum(1 for j in self.simplicial[s] if self.exp[j] == e))
            small.append(sm)
            counts.append(tuple(new))
        return Configuration(basis, tuple(small), tuple(counts), u.flags)

    def choices(self, u: Configuration, machine: int) -> Iterator[tuple[tuple[int, ...], tuple]]:
        """Job sets fitting on ``machine``: at most one job per block.

        Yields ``(cuts, picks)`` where ``cuts`` lists chosen cut-vertex
        indices and ``picks[s]`` is None, ``"small"`` or an exponent.
        """
        cap = self.cap[machine]
        basis = u.basis
        free_cuts = [c for c, flag in enumerate(u.flags) if flag]

        def cut_size(c: int) -> Fraction:
            e = self.exp[self.cuts[c]]
            return self.pow(e) if e >= basis else Fraction(0)

        def pick_blocks(s: int, used: frozenset, load: Fraction, picks: list) -> Iterator[tuple]:
            if s == self.k:
                yield tuple(picks)
                return
            picks.append(None)
            yield from pick_blocks(s + 1, used, load, picks)
            picks.pop()
            if s in used:
                return
            if u.small[s]:
                picks.append("small")
                yield from pick_blocks(s + 1, used, load, picks)
                picks.pop()
            for t, cnt in enumerate(u.counts[s]):
                if not cnt:
                    continue
                size = self.pow(basis + t)
                if load + size > cap:
                    break
                picks.append(basis + t)
                yield from pick_blocks(s + 1, used, load + size, picks)
                picks.pop()

        def pick_cuts(idx: int, chosen: list, used: frozenset, load: Fraction) -> Iterator[tuple]:
            if idx == len(free_cuts):
                for picks in pick_blocks(0, used, load, []):
                    yield tuple(chosen), picks
                return
            yield from pick_cuts(idx + 1, chosen, used, load)
            c = free_cuts[idx]
            blocks = self.cut_blocks[c]
            if used.intersection(blocks):
                return
            size = cut_size(c)
            if load + size > cap:
                return
            chosen.append(c)
            yield from pick_cuts(idx + 1, chosen, used | frozenset(blocks), load + size)
            chosen.pop()

        yield from pick_cuts(0, [], frozenset(), Fraction(0))

    def apply(self, u: Configuration, cuts: tuple[int, ...], picks: tuple) -> Configuration:
        small = list(u.small)
        counts = [list(c) for c in u.counts]
        for s, pick in enumerate(picks):
            if pick == "small":
                small[s] -= 1
            elif pick is not None:
                counts[s][pick - u.basis] -= 1
        flags = list(u.flags)
        for c in cuts:
            flags[c] = 0
        return Configuration(u.basis, tuple(small), tuple(tuple(c) for c in counts), tuple(flags))

    def run(self, budget: Budget | None = None, trace: list | None = None) -> Schedule | None:
        budget = ensure(budget)
        if not self.necessary():
            return None
        current = {self.initial(): None}
        layers: list[dict] = []
        for step, machine in enumerate(self.order, start=1):
            basis = self.basis[step]
            nxt: dict = {}
            for u in current:
                uc = self.convert(u, basis)
                for cuts, picks in self.choices(uc, machine):
                    budget.tick()
                    w = self.apply(uc, cuts, picks)
                    if w not in nxt:
                        nxt[w] = (u, cuts, picks)
                        budget.charge()
            layers.append(nxt)
            if trace is not None:
                trace.append(nxt)
            current = nxt
        zero = next((u for u in current if u.is_zero()), None)
        if zero is None:
            return None
        return self._decode(layers, zero)

    def _decode(self, layers: list[dict], last: Configuration) -> Schedule:
        steps = []
        u = last
        for layer in reversed(layers):
            prev, cuts, picks = layer[u]
            steps.append((cuts, picks))
            u = prev
        steps.reverse()
        assign = [-1] * self.inst.n
        remaining = [list(js) for js in self.simplicial]
        for step, (machine, (cuts, picks)) in enumerate(zip(self.order, steps), start=1):
            basis = self.basis[step]
            for c in cuts:
                assign[self.cuts[c]] = machine
            for s, pick in enumerate(picks):
                if pick is None:
                    continue
                if pick == "small":
                    j = next(j for j in remaining[s] if self.exp[j] < basis)
                else:
                    j = next(j for j in remaining[s] if self.exp[j] == pick)
                remaining[s].remove(j)
                assign[j] = machine
        return Schedule(tuple(assign))


def ptas_core(inst: Instance, C, eps, budget: Budget | None = None, trace: list | None = None) -> Schedule | None:
    """Configuration DP for one makespan guess.

    Returns a schedule with makespan at most ``(1+eps)**2 * C`` or None
    when no schedule of makespan at most ``C`` exists.

    Parameters
    ----------
    trace : list, optional
        Receives the configuration layers ``U_1..U_m`` (dicts keyed by
        configuration).
    """
    if inst.graph.omega > inst.m:
        return None
    return ConfigurationDP(inst, C, eps).run(budget, trace)


def _largest_dyadic(limit_ok) -> Fraction:
    t = 0
    while not limit_ok(Fraction(1, 2**t)):
        t += 1
    return Fraction(1, 2**t)


def inner_eps(eps) -> tuple[Fraction, Fraction]:
    """Internal accuracies ``(eps1, eps2)``.

    ``eps1`` is the largest ``1/2**t`` with ``(1+eps1)**2 <= 1+eps``;
    ``eps2`` the largest ``1/2**t`` with ``(1+eps1)**2 (1+eps2) <= 1+eps``
    and serves as the bisection tolerance.
    """
    eps = Fraction(eps)
    e1 = _largest_dyadic(lambda x: (1 + x) ** 2 <= 1 + eps)
    e2 = _largest_dyadic(lambda x: (1 + e1) ** 2 * (1 + x) <= 1 + eps)
    return e1, e2


def ptas_uniform(inst: Instance, eps, budget: Budget | None = None) -> Schedule:
    """(1+eps)-approximate schedule via bounded bisection.

    The k-approximate schedule of value ``C0`` brackets the optimum in
    ``[C0/k, C0]``; the bracket is halved with ``ptas_core`` calls until
    its width is at most ``eps2`` times its lower end.

    Raises
    ------
    Infeasible
        If a block is larger than the number of machines.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    budget = ensure(budget)
    seed = k_approx(inst, budget)
    if inst.n == 0:
        return seed
    best, best_c = seed, makespan(inst, seed)
    e1, e2 = inner_eps(eps)
    k = max(1, len(inst.graph.blocks))
    hi = best_c
    lo = best_c / k
    if lo == hi:
        found = ptas_core(inst, hi, e1, budget)
        if found is not None and makespan(inst, found) < best_c:
            best, best_c = found, makespan(inst, found)
        return best
    while hi - lo > e2 * lo:
        mid = (lo + hi) / 2
        found = ptas_core(inst, mid, e1, budget)
        if found is None:
            lo = mid
            continue
        hi = mid
        c = makespan(inst, found)
        if c < best_c:
            best, best_c = found, c
    return best
