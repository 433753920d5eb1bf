"""Machine environments, instances and schedules.

Every processing time is handled as an exact :class:`fractions.Fraction`;
no solver in the package compares floats.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .graph import BlockCutTree


def _positive_ints(values, what: str) -> tuple[int, ...]:
    out = []
    for x in values:
        if isinstance(x, bool) or int(x) != x or int(x) <= 0:
            raise ValueError(f"{what} must be positive integers, got {x!r}")
        out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class Identical:
    """``m`` identical machines (P)."""

    m: int
    kind = "identical"

    def __post_init__(self) -> None:
        if int(self.m) < 1:
            raise ValueError("m must be at least 1")


@dataclass(frozen=True)
class Uniform:
    """Uniform machines (Q) with integer speeds sorted non-increasing."""

    speeds: tuple[int, ...]
    kind = "uniform"

    def __post_init__(self) -> None:
        speeds = _positive_ints(self.speeds, "speeds")
        if not speeds:
            raise ValueError("at least one machine is required")
        if any(a < b for a, b in zip(speeds, speeds[1:])):
            raise ValueError("speeds must be sorted non-increasing")
        object.__setattr__(self, "speeds", speeds)

    @property
    def m(self) -> int:
        return len(self.speeds)


@dataclass(frozen=True)
class Unrelated:
    """Unrelated machines (R); ``times[i][j]`` is job j on machine i."""

    times: tuple[tuple[int, ...], ...]
    kind = "unrelated"

    def __post_init__(self) -> None:
        rows = tuple(_positive_ints(row, "times") for row in self.times)
        if not rows:
            raise ValueError("at least one machine is required")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("times must be a rectangular m x n table")
        object.__setattr__(self, "times", rows)

    @property
    def m(self) -> int:
        return len(self.times)


MachineEnv = Identical | Uniform | Unrelated


@dataclass(frozen=True)
class Instance:
    """Jobs, conflict graph and machine environment.

    Parameters
    ----------
    graph : BlockCutTree
    env : Identical, Uniform or Unrelated
    proc : sequence of int
        Processing requirements. Required for P and Q; for R it may be
        omitted and is then taken as the per-job minimum over machines.
    """

    graph: BlockCutTree
    env: MachineEnv
    proc: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = self.graph.n
        if isinstance(self.env, Unrelated):
            if len(self.env.times[0]) != n:
                raise ValueError("times table must have one column per job")
            if not self.proc:
                object.__setattr__(self, "proc", tuple(min(col) for col in zip(*self.env.times)))
        proc = _positive_ints(self.proc, "proc")
        if len(proc) != n:
            raise ValueError(f"expected {n} processing times, got {len(proc)}")
        object.__setattr__(self, "proc", proc)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.env.m

    @property
    def is_unit(self) -> bool:
        return all(p == 1 for p in self.proc)

    def time(self, i: int, j: int) -> Fraction:
        """Exact processing time of job ``j`` on machine ``i``."""
        env = self.env
        if isinstance(env, Identical):
            return Fraction(self.proc[j])
        if isinstance(env, Uniform):
            return Fraction(self.proc[j], env.speeds[i])
        return Fraction(env.times[i][j])

    def to_json(self) -> dict:
        env: dict = {"kind": self.env.kind, "m": self.m}
        if isinstance(self.env, Uniform):
            env["speeds"] = list(self.env.speeds)
        if isinstance(self.env, Unrelated):
            env["times"] = [list(r) for r in self.env.times]
        return {"graph": self.graph.to_json(), "env": env, "proc": list(self.proc)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Instance":
        graph = BlockCutTree.from_json(data["graph"])
        e = data["env"]
        kind = e.get("kind")
        if kind == "identical":
            env: MachineEnv = Identical(int(e["m"]))
        elif kind == "uniform":
            env = Uniform(tuple(e["speeds"]))
        elif kind == "unrelated":
            env = Unrelated(tuple(tuple(r) for r in e["times"]))
        else:
            raise ValueError(f"unknown machine environment {kind!r}")
        if "m" in e and int(e["m"]) != env.m:
            raise ValueError("env.m does not match the machine data")
        return cls(graph=graph, env=env, proc=tuple(data.get("proc") or ()))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class Schedule:
    """Total map job -> machine, stored as a tuple indexed by job id."""

    assign: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assign", tuple(int(x) for x in self.assign))

    def to_json(self) -> dict:
        return {"assign": list(self.assign)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Schedule":
        return cls(tuple(data["assign"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def is_feasible(inst: Instance, sched: Schedule) -> bool:
    """True iff the schedule is total and no block has two jobs on one machine."""
    a = sched.assign
    if len(a) != inst.n or any(not 0 <= x < inst.m for x in a):
        return False
    for block in inst.graph.blocks:
        machines = [a[v] for v in block]
        if len(set(machines)) != len(machines):
            return False
    return True


def loads(inst: Instance, sched: Schedule) -> list[Fraction]:
    out = [Fraction(0)] * inst.m
    for j, i in enumerate(sched.assign):
        out[i] += inst.time(i, j)
    return out


def makespan(inst: Instance, sched: Schedule) -> Fraction:
    """Exact C_max of a total schedule."""
    if len(sched.assign) != inst.n:
        raise ValueError("schedule is not total")
    return max(loads(inst, sched), default=Fraction(0))


def identical_lower_bound(inst: Instance) -> Fraction:
    """max(sum p / m, p_max), and ceil(n/m) for unit jobs."""
    if not isinstance(inst.env, Identical):
        raise ValueError("identical_lower_bound needs identical machines")
    if inst.n == 0:
        return Fraction(0)
    lb = max(Fraction(sum(inst.proc), inst.m), Fraction(max(inst.proc)))
    if inst.is_unit:
        lb = max(lb, Fraction(ceil(inst.n / inst.m)))
    return lb


def sum_lower_bound(inst: Instance) -> Fraction:
    """Average-load bound valid for P and Q: sum p / sum s."""
    if isinstance(inst.env, Identical):
        return Fraction(sum(inst.proc), inst.m)
    if isinstance(inst.env, Uniform):
        return Fraction(sum(inst.proc), sum(inst.env.speeds))
    return Fraction(sum(min(col) for col in zip(*inst.env.times)), inst.m)


def with_env(inst: Instance, env: MachineEnv) -> Instance:
    return Instance(graph=inst.graph, env=env, proc=inst.proc)


def unit_instance(graph: BlockCutTree, env: MachineEnv | int) -> Instance:
    if isinstance(env, int):
        env = Identical(env)
    return Instance(graph=graph, env=env, proc=(1,) * graph.n)


def format_time(t: Fraction) -> str:
    """``"5"`` or ``"3/2"``; the canonical text form used in JSON output."""
    return str(t)


def speeds_from(values: Sequence[int]) -> Uniform:
    return Uniform(tuple(sorted((int(s) for s in values), reverse=True)))
