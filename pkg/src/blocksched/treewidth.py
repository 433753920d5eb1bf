"""FPTAS for a fixed number of machines over a tree decomposition.

For a makespan guess ``C`` all times are rounded down to multiples of
``eps*C/n`` and partial schedules are combined bottom-up over a binary
tree decomposition. A state is identified by its machine loads (in units)
and the placement of the current bag's jobs; each kept state carries the
per-machine job lists of one partial schedule as its witness.

Uniform instances are turned into unrelated ones by scaling every time by
the lcm of the speeds, which keeps all times integral. Identical machines
use a symmetric layout: the bag's jobs occupy the first machines in bag
order and the remaining loads are kept sorted.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import permutations
from math import floor, lcm

from .budget import Budget, ensure
from .errors import Infeasible
from .graph import TreeDecomposition, tree_decomposition
from .model import Identical, Instance, Schedule, Uniform


def time_table(inst: Instance) -> tuple[list[list[int]], int]:
    """Integer times ``t[i][j]`` and the scale factor applied to them."""
    env = inst.env
    if isinstance(env, Identical):
        return [list(inst.proc) for _ in range(env.m)], 1
    if isinstance(env, Uniform):
        scale = lcm(*env.speeds)
        return [[p * scale // s for p in inst.proc] for s in env.speeds], scale
    return [list(row) for row in env.times], 1


def _symmetric(inst: Instance) -> bool:
    env = inst.env
    return isinstance(env, Identical) or (isinstance(env, Uniform) and len(set(env.speeds)) == 1)


def _rounded(times: list[list[int]], C: Fraction, eps: Fraction, n: int) -> tuple[list[list[int]], int]:
    """Times in units of ``eps*C/n`` (rounded down) and the unit cap ``floor(C/unit)``."""
    factor = Fraction(n) / (eps * C)
    rounded = [[floor(t * factor) for t in row] for row in times]
    return rounded, floor(n / eps)


class _Store:
    """Keep-first state table; with trimming off every state is kept."""

    def __init__(self, trim: bool, budget: Budget) -> None:
        self.trim = trim
        self.budget = budget
        self.items: dict = {}

    def add(self, key, value) -> None:
        if not self.trim:
            key = (key, len(self.items))
        elif key in self.items:
            return
        self.items[key] = value
        self.budget.charge()

    def values(self):
        return self.items.values()

    def __len__(self) -> int:
        return len(self.items)


class _Unrelated:
    """States are (loads, bag placement); witnesses use real machine ids."""

    def __init__(self, r: list[list[int]], cap: int, m: int, trim: bool, budget: Budget) -> None:
        self.r, self.cap, self.m, self.trim, self.budget = r, cap, m, trim, budget

    def _base(self, jobs: list[int]):
        for place in permutations(range(self.m), len(jobs)):
            loads = [0] * self.m
            for j, i in zip(jobs, place):
                loads[i] += self.r[i][j]
            if max(loads, default=0) <= self.cap:
                yield tuple(loads), place

    def leaf(self, jobs: list[int]) -> _Store:
        out = _Store(self.trim, self.budget)
        for loads, place in self._base(jobs):
            lists = [() for _ in range(self.m)]
            for j, i in zip(jobs, place):
                lists[i] += (j,)
            out.add((loads, place), (loads, place, tuple(lists)))
        return out

    def _project(self, states: _Store, cjobs: list[int], shared: set[int]) -> dict:
        """Child states by shared placement, with the shared jobs taken out."""
        pos = [p for p, j in enumerate(cjobs) if j in shared]
        groups = defaultdict(dict)
        for loads, place, lists in states.values():
            sub = tuple(place[p] for p in pos)
            red = list(loads)
            for p in pos:
                red[place[p]] -= self.r[place[p]][cjobs[p]]
            red = tuple(red)
            bucket = groups[sub].setdefault(red, [])
            if self.trim and bucket:
                continue
            bucket.append(tuple(tuple(x for x in js if x not in shared) for js in lists))
        return groups

    def join(self, jobs: list[int], kids: list[tuple[_Store, list[int]]]) -> _Store:
        jobset = set(jobs)
        projected = []
        for states, cjobs in kids:
            shared = [j for j in cjobs if j in jobset]
            projected.append((self._project(states, cjobs, set(shared)), [jobs.index(j) for j in shared]))
        out = _Store(self.trim, self.budget)
        for loads0, place in self._base(jobs):
            lists0 = [() for _ in range(self.m)]
            for j, i in zip(jobs, place):
                lists0[i] += (j,)
            combos = [(loads0, tuple(lists0))]
            for groups, pos in projected:
                group = groups.get(tuple(place[p] for p in pos))
                nxt = []
                for loads, lists in combos:
                    for red, witnesses in (group or {}).items():
                        new = tuple(a + b for a, b in zip(loads, red))
                        if max(new) > self.cap:
                            continue
                        self.budget.tick()
                        for w in witnesses:
                            nxt.append((new, tuple(x + y for x, y in zip(lists, w))))
                # trimming between the two children keeps the product small
                if self.trim:
                    dedup: dict = {}
                    for loads, lists in nxt:
                        dedup.setdefault(loads, lists)
                    nxt = list(dedup.items())
                combos = nxt
            for loads, lists in combos:
                out.add((loads, place), (loads, place, lists))
        return out


class _Symmetric:
    """Identical machines: bag jobs on the first machines, other loads sorted."""

    def __init__(self, r: list[int], cap: int, m: int, trim: bool, budget: Budget) -> None:
        self.r, self.cap, self.m, self.trim, self.budget = r, cap, m, trim, budget

    def _canon(self, t: int, loads: list[int], lists: list[tuple]) -> tuple[tuple, tuple]:
        free = sorted(range(t, self.m), key=lambda i: (loads[i], lists[i]))
        order = list(range(t)) + free
        return tuple(loads[i] for i in order), tuple(lists[i] for i in order)

    def _base(self, jobs: list[int]):
        t = len(jobs)
        loads = [self.r[j] for j in jobs] + [0] * (self.m - t)
        if max(loads, default=0) > self.cap:
            return None
        return loads, [(j,) for j in jobs] + [()] * (self.m - t)

    def leaf(self, jobs: list[int]) -> _Store:
        out = _Store(self.trim, self.budget)
        base = self._base(jobs)
        if base is not None:
            out.add(tuple(base[0]), (tuple(base[0]), tuple(base[1])))
        return out

    def _project(self, states: _Store, cjobs: list[int], jobset: set[int]) -> tuple[list[int], dict]:
        ypos = [p for p, j in enumerate(cjobs) if j in jobset]
        fpos = [p for p in range(self.m) if p not in set(ypos)]
        groups: dict = {}
        for loads, lists in states.values():
            y = tuple(loads[p] - self.r[cjobs[p]] for p in ypos)
            ylists = tuple(tuple(x for x in lists[p] if x not in jobset) for p in ypos)
            f = sorted(((loads[p], lists[p]) for p in fpos), key=lambda e: e[0])
            key = (y, tuple(e[0] for e in f))
            bucket = groups.setdefault(key, [])
            if self.trim and bucket:
                continue
            bucket.append((ylists, tuple(e[1] for e in f)))
        return ypos, groups

    def join(self, jobs: list[int], kids: list[tuple[_Store, list[int]]]) -> _Store:
        t = len(jobs)
        base = self._base(jobs)
        out = _Store(self.trim, self.budget)
        if base is None:
            return out
        jobset = set(jobs)
        current = [(base[0], base[1])]
        for states, cjobs in kids:
            ypos, groups = self._project(states, cjobs, jobset)
            ypar = [jobs.index(cjobs[p]) for p in ypos]
            targets = [p for p in range(self.m) if p not in set(ypar)]
            nxt = _Store(self.trim, self.budget)
            for loads0, lists0 in current:
                for (y, fl), witnesses in groups.items():
                    loads1 = list(loads0)
                    for p, add in zip(ypar, y):
                        loads1[p] += add
                    if loads1 and max(loads1) > self.cap:
                        continue
                    seen = set()
                    for perm in permutations(range(len(fl))):
                        sig = tuple(fl[q] for q in perm)
                        if sig in seen:
                            continue
                        seen.add(sig)
                        self.budget.tick()
                        loads2 = list(loads1)
                        for tgt, q in zip(targets, perm):
                            loads2[tgt] += fl[q]
                        if max(loads2) > self.cap:
                            continue
                        for ylists, flists in witnesses:
                            lists2 = list(lists0)
                            for p, extra in zip(ypar, ylists):
                                lists2[p] = lists2[p] + extra
                            for tgt, q in zip(targets, perm):
                                lists2[tgt] = lists2[tgt] + flists[q]
                            key, lists_c = self._canon(t, loads2, lists2)
                            nxt.add(key, (list(key), list(lists_c)))
            current = list(nxt.values())
            if not current:
                return out
        for loads, lists in current:
            out.add(tuple(loads), (tuple(loads), tuple(lists)))
        return out


def _root_lists(states: _Store) -> tuple:
    value = next(iter(states.values()))
    return value[-1]


def fptas_feasible(
    inst: Instance,
    decomp: TreeDecomposition | None,
    C,
    eps,
    budget: Budget | None = None,
    trim: bool = True,
    symmetric: bool | None = None,
) -> Schedule | None:
    """One guess of the FPTAS.

    Parameters
    ----------
    inst : Instance
    decomp : TreeDecomposition or None
        Binary decomposition of the conflict graph; built when None.
    C : rational
        Makespan guess in the instance's own time units.
    eps : rational
    trim : bool
        Keep one state per (loads, bag placement). Turning it off only
        costs time.
    symmetric : bool, optional
        Use the identical-machine layout; defaults to True for identical
        machines.

    Returns
    -------
    Schedule or None
        A schedule with makespan below ``(1+eps) C``, or None when the
        rounded instance has no schedule within ``C``.
    """
    C = Fraction(C)
    eps = Fraction(eps)
    if C <= 0 or eps <= 0:
        raise ValueError("C and eps must be positive")
    n, m = inst.n, inst.m
    if n == 0:
        return Schedule(())
    if inst.graph.omega > m:
        return None
    decomp = decomp if decomp is not None else tree_decomposition(inst.graph)
    budget = ensure(budget)
    times, scale = time_table(inst)
    r, cap = _rounded(times, C * scale, eps, n)
    if symmetric is None:
        symmetric = _symmetric(inst)
    dp = _Symmetric(r[0], cap, m, trim, budget) if symmetric else _Unrelated(r, cap, m, trim, budget)

    bag_jobs = [sorted(b) for b in decomp.bags]
    table: dict[int, dict] = {}
    for node in decomp.postorder():
        budget.tick()
        kids = decomp.children[node]
        if not kids:
            states = dp.leaf(bag_jobs[node])
        else:
            states = dp.join(bag_jobs[node], [(table[c], bag_jobs[c]) for c in kids])
            for c in kids:
                del table[c]
        if not states:
            return None
        table[node] = states
    lists = _root_lists(table[decomp.root])
    assign = [-1] * n
    for i, js in enumerate(lists):
        for j in js:
            assign[j] = i
    if any(a < 0 for a in assign):
        raise RuntimeError("decoded schedule is not total")
    return Schedule(tuple(assign))


def fptas(inst: Instance, eps, budget: Budget | None = None, symmetric: bool | None = None) -> Schedule:
    """(1+eps)-approximate schedule by binary search on an integer guess.

    The guess runs over ``[max_j min_i t_ij, n * t_max]`` in integer time
    units (after scaling uniform instances).

    Raises
    ------
    Infeasible
        If a block is larger than the number of machines.
    """
    eps = Fraction(eps)
    if inst.graph.omega > inst.m:
        raise Infeasible(f"a block of size {inst.graph.omega} does not fit on {inst.m} machines")
    if inst.n == 0:
        return Schedule(())
    budget = ensure(budget)
    decomp = tree_decomposition(inst.graph)
    times, scale = time_table(inst)
    lo = max(min(col) for col in zip(*times))
    hi = inst.n * max(max(row) for row in times)
    best = None
    while lo < hi:
        mid = (lo + hi) // 2
        found = fptas_feasible(inst, decomp, Fraction(mid, scale), eps, budget, symmetric=symmetric)
        if found is None:
            lo = mid + 1
        else:
            hi, best = mid, found
    if best is None:
        best = fptas_feasible(inst, decomp, Fraction(hi, scale), eps, budget, symmetric=symmetric)
    if best is None:
        raise Infeasible("no schedule found at the upper bound")
    return best
