"""Random block graphs and instances.

The partition sampler is the Nijenhuis-Wilf table method restricted to a
fixed number of parts with bounded sizes, so every valid multiset of part
sizes is equally likely.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache
from math import ceil

import numpy as np
from sklearn.utils import check_random_state

from .errors import Infeasible
from .graph import BlockCutTree
from .model import Identical, Instance, Uniform, Unrelated

PROC_RANGES = {"unit": (1, 1), "p0": (1, 5), "p1": (1, 10), "p2": (1, 20)}

# default speed sets for uniform experiments, keyed by m
STANDARD_SPEEDS = {
    4: (5, 5, 5, 1),
    6: (5, 5, 5, 5, 1, 1),
    8: (5, 5, 5, 5, 5, 2, 1, 1),
}

# the same shapes drawn from [1, 25]
WIDE_SPEEDS = {
    4: (23, 21, 21, 4),
    6: (25, 23, 21, 21, 4, 4),
    8: (25, 23, 23, 21, 21, 6, 4, 4),
}


@lru_cache(maxsize=None)
def _bounded(total: int, count: int, size: int) -> int:
    """Partitions of ``total`` into at most ``count`` parts, each at most ``size``."""
    if total == 0:
        return 1
    if count == 0 or size == 0 or total > count * size:
        return 0
    # largest part x, the rest at most x; recursion depth is bounded by count
    return sum(_bounded(total - x, count - 1, x) for x in range(1, min(size, total) + 1))


def _count(total: int, parts: int, lo: int, hi: int) -> int:
    """Non-increasing sequences of ``parts`` values in [lo, hi] summing to total."""
    if parts == 0:
        return 1 if total == 0 else 0
    if total < parts * lo or total > parts * hi:
        return 0
    # subtract lo from every part and count conjugates: at most hi - lo parts,
    # each at most ``parts``, so the recursion depth stays below m
    return _bounded(total - parts * lo, hi - lo, parts)


def _randbelow(rng: np.random.RandomState, k: int) -> int:
    """Uniform integer in [0, k) for arbitrarily large k."""
    if k < 2**62:
        return int(rng.randint(0, k, dtype=np.int64))
    bits = k.bit_length()
    while True:
        x = 0
        for _ in range(0, bits, 30):
            x = (x << 30) | int(rng.randint(0, 2**30))
        x >>= (-bits) % 30
        if x < k:
            return x


def random_partition(total: int, parts: int, lo: int, hi: int, rng=None) -> tuple[int, ...]:
    """Uniform random partition of ``total`` into ``parts`` bounded parts.

    Parameters
    ----------
    total, parts : int
    lo, hi : int
        Inclusive bounds on every part.
    rng : None, int or numpy.random.RandomState

    Returns
    -------
    tuple of int
        Part sizes in non-increasing order.

    Raises
    ------
    Infeasible
        If no such partition exists.
    """
    if parts < 0 or lo < 0 or hi < lo:
        raise ValueError("invalid partition bounds")
    count = _count(total, parts, lo, hi)
    if count == 0:
        raise Infeasible(f"no partition of {total} into {parts} parts within [{lo}, {hi}]")
    rng = check_random_state(rng)
    out = []
    cap = hi
    for left in range(parts, 0, -1):
        r = _randbelow(rng, _count(total, left, lo, cap))
        # largest part first; walk the table until r falls inside a bucket
        for x in range(min(cap, total), lo - 1, -1):
            c = _count(total - x, left - 1, lo, x)
            if r < c:
                break
            r -= c
        out.append(x)
        total -= x
        cap = x
    return tuple(out)


def generate_block_graph(partition: Sequence[int], rng=None) -> BlockCutTree:
    """Grow a connected block graph with the given block sizes.

    The sizes are shuffled, the first becomes a clique, and each further
    block of size ``s`` picks a block uniformly at random, then one of its
    vertices uniformly at random, and adds ``s - 1`` new vertices forming a
    clique with it.
    """
    sizes = [int(s) for s in partition]
    if not sizes:
        raise ValueError("partition must be non-empty")
    if any(s < 1 for s in sizes) or (len(sizes) > 1 and any(s < 2 for s in sizes)):
        raise ValueError("block sizes must be at least 2 (a lone block may be a single vertex)")
    rng = check_random_state(rng)
    sizes = [sizes[i] for i in rng.permutation(len(sizes))]
    blocks = [list(range(sizes[0]))]
    n = sizes[0]
    for s in sizes[1:]:
        host = blocks[int(rng.randint(0, len(blocks)))]
        v = host[int(rng.randint(0, len(host)))]
        blocks.append([v] + list(range(n, n + s - 1)))
        n += s - 1
    return BlockCutTree.from_blocks(n, blocks)


def b_function(n: int, m: int, which: str) -> int:
    """Block counts used by the generator: ``min``, ``avg`` or ``max``."""
    if m < 2 or n < m:
        raise ValueError("need n >= m >= 2")
    b_min = ceil((n - 1) / (m - 1))
    b_max = n - 1
    if which == "min":
        return b_min
    if which == "max":
        return b_max
    if which == "avg":
        return (b_min + b_max) // 2
    raise ValueError(f"unknown b-function {which!r}")


def random_graph(n: int, m: int, b: int, rng=None) -> BlockCutTree:
    """Connected block graph on ``n`` vertices with ``b`` blocks of size 2..m."""
    rng = check_random_state(rng)
    if n == 1:
        return BlockCutTree.from_blocks(1, [[0]])
    parts = random_partition(n + b - 1, b, 2, m, rng)
    return generate_block_graph(parts, rng)


def random_proc(n: int, proc: str, rng=None) -> tuple[int, ...]:
    if proc not in PROC_RANGES:
        raise ValueError(f"unknown processing-time distribution {proc!r}")
    lo, hi = PROC_RANGES[proc]
    rng = check_random_state(rng)
    return tuple(int(x) for x in rng.randint(lo, hi + 1, size=n))


def random_instance(
    n: int,
    m: int,
    b: int | str = "min",
    proc: str = "unit",
    env: str = "identical",
    speeds: Sequence[int] | None = None,
    rng=None,
) -> Instance:
    """Draw a random instance following the experimental protocol.

    Parameters
    ----------
    b : int or {"min", "avg", "max"}
        Block count, or the name of a block-count function.
    proc : {"unit", "p0", "p1", "p2"}
    env : {"identical", "uniform", "unrelated"}
    speeds : sequence of int, optional
        Uniform speeds; defaults to the standard set for ``m`` when one
        exists and otherwise to random speeds in [1, 5].
    """
    rng = check_random_state(rng)
    if isinstance(b, str):
        b = b_function(n, m, b)
    graph = random_graph(n, m, b, rng)
    p = random_proc(n, proc, rng)
    if env == "identical":
        machines = Identical(m)
    elif env == "uniform":
        if speeds is None:
            speeds = STANDARD_SPEEDS.get(m) or tuple(int(s) for s in rng.randint(1, 6, size=m))
        machines = Uniform(tuple(sorted(speeds, reverse=True)))
        if machines.m != m:
            raise ValueError("speed list length must equal m")
    elif env == "unrelated":
        lo, hi = PROC_RANGES[proc] if proc != "unit" else (1, 5)
        machines = Unrelated(tuple(tuple(int(x) for x in row) for row in rng.randint(lo, hi + 1, size=(m, n))))
    else:
        raise ValueError(f"unknown environment {env!r}")
    return Instance(graph=graph, env=machines, proc=p)
