"""Experiment runner producing the per-cell report rows.

A cell is one ``(m, n)`` pair. For every cell ``instances`` random
instances are drawn, solved under a per-instance budget and compared
with a reference value. After the first budget failure in a cell the
remaining instances of that cell are skipped and the cell is marked
``T`` (time) or ``M`` (memory).
"""

from __future__ import annotations

import csv
import io
import json
import time
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .errors import OutOfBudget
from .estimators import ALGORITHMS, make_scheduler
from .generate import PROC_RANGES, STANDARD_SPEEDS, WIDE_SPEEDS, random_instance
from .model import Instance, identical_lower_bound, sum_lower_bound
from .oracle import optimum
from .validation import check_eps

CSV_COLUMNS = ("m", "n", "b", "proc", "alg", "eps", "mean_ratio", "mean_us", "status", "participation")
TAG_ORDER = ("C", "C+T", "C+G")


@dataclass
class ExperimentConfig:
    """Parameters of one experiment.

    Parameters
    ----------
    n, m : list of int
        Cell grid; cells run ``m``-major in the given order. Pairs with
        ``n < m`` are skipped.
    alg : str
        Algorithm name as accepted by the CLI.
    b : {"min", "avg", "max"}
    proc : {"unit", "p0", "p1", "p2"}
    env : {"identical", "uniform", "unrelated"}
    speeds : list of int, "standard", "wide" or "random"
        Uniform speeds. ``"standard"`` (speeds in [1, 5]) and ``"wide"``
        (speeds in [1, 25]) pick a fixed set for ``m`` and fall back to
        random speeds in [1, 5] when none exists.
    eps : rational, optional
    k : int, optional
        Bound for ``exact-cmax``; None searches the optimum.
    reference : str
        ``"sum"`` (total work over capacity), ``"lb"`` (the stronger
        identical-machine bound), ``"oracle"`` or another algorithm name.
    instances : int
    timeout_ms, mem_mb : int, optional
        Per-instance budgets.
    seed : int
    """

    n: list[int]
    m: list[int]
    alg: str
    b: str = "min"
    proc: str = "unit"
    env: str = "identical"
    speeds: list[int] | str | None = "standard"
    eps: str | float | None = None
    k: int | None = None
    reference: str = "sum"
    instances: int = 25
    timeout_ms: int | None = None
    mem_mb: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        self.n = [int(x) for x in self.n]
        self.m = [int(x) for x in self.m]
        if self.alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.alg!r}")
        if self.b not in ("min", "avg", "max"):
            raise ValueError(f"unknown b-function {self.b!r}")
        if self.proc not in PROC_RANGES:
            raise ValueError(f"unknown processing-time distribution {self.proc!r}")
        if self.env not in ("identical", "uniform", "unrelated"):
            raise ValueError(f"unknown environment {self.env!r}")
        if self.reference not in ("sum", "lb", "oracle") and self.reference not in ALGORITHMS:
            raise ValueError(f"unknown reference {self.reference!r}")
        if isinstance(self.speeds, str) and self.speeds not in ("standard", "wide", "random"):
            raise ValueError(f"unknown speed set {self.speeds!r}")
        if self.instances < 0:
            raise ValueError("instances must be non-negative")
        for name in ("timeout_ms", "mem_mb"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive")
        if self.eps is not None:
            check_eps(self.eps)
        if any(m < 2 for m in self.m):
            raise ValueError("m must be at least 2")

    @classmethod
    def from_json(cls, data: Mapping | str) -> "ExperimentConfig":
        if isinstance(data, str):
            data = json.loads(data)
        data = dict(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> dict:
        return asdict(self)

    def cells(self) -> list[tuple[int, int]]:
        return [(m, n) for m in self.m for n in self.n if n >= m]

    def speeds_for(self, m: int, rng) -> tuple[int, ...] | None:
        if self.env != "uniform":
            return None
        named = {"standard": STANDARD_SPEEDS, "wide": WIDE_SPEEDS, None: STANDARD_SPEEDS}
        if isinstance(self.speeds, str) or self.speeds is None:
            table = named.get(self.speeds, {})
            if m in table:
                return table[m]
            return tuple(sorted((int(s) for s in rng.randint(1, 6, size=m)), reverse=True))
        return tuple(int(s) for s in self.speeds)


@dataclass
class ReportRow:
    m: int
    n: int
    b: str
    proc: str
    alg: str
    eps: str
    mean_ratio: float | None
    mean_us: int | None
    status: str
    participation: str
    solved: int = 0

    def csv_fields(self) -> list[str]:
        ratio = "" if self.mean_ratio is None else f"{self.mean_ratio:.2f}"
        us = "" if self.mean_us is None else str(self.mean_us)
        return [str(self.m), str(self.n), self.b, self.proc, self.alg, self.eps, ratio, us, self.status, self.participation]


def instance_rng(seed: int, cell: int, index: int) -> np.random.RandomState:
    """Independent generator for instance ``index`` of cell ``cell``."""
    return np.random.RandomState(np.random.SeedSequence([seed, cell, index]).generate_state(4))


def _params(cfg: ExperimentConfig) -> dict:
    return {"eps": cfg.eps, "k": cfg.k, "timeout_ms": cfg.timeout_ms, "mem_mb": cfg.mem_mb}


def _reference(cfg: ExperimentConfig, inst: Instance) -> Fraction:
    if cfg.reference == "sum":
        return sum_lower_bound(inst)
    if cfg.reference == "lb":
        return identical_lower_bound(inst) if inst.env.kind == "P" else sum_lower_bound(inst)
    if cfg.reference == "oracle":
        return optimum(inst)
    return make_scheduler(cfg.reference, **_params(cfg)).fit(inst).makespan_


def run_cell(cfg: ExperimentConfig, cell: int, m: int, n: int) -> ReportRow:
    ratios: list[Fraction] = []
    times: list[float] = []
    tags: Counter[str] = Counter()
    status = "OK"
    for index in range(cfg.instances):
        rng = instance_rng(cfg.seed, cell, index)
        inst = random_instance(n, m, cfg.b, cfg.proc, cfg.env, cfg.speeds_for(m, rng), rng=rng)
        est = make_scheduler(cfg.alg, **_params(cfg))
        try:
            start = time.perf_counter()
            est.fit(inst)
            elapsed = time.perf_counter() - start
            ref = _reference(cfg, inst)
        except OutOfBudget as exc:
            # one failure ends the cell
            status = exc.kind
            break
        ratios.append(est.makespan_ / ref)
        times.append(elapsed)
        if hasattr(est, "tag_"):
            tags[est.tag_] += 1
    participation = " ".join(f"{t}:{tags[t]}" for t in TAG_ORDER if tags[t])
    return ReportRow(
        m=m,
        n=n,
        b=cfg.b,
        proc=cfg.proc,
        alg=cfg.alg,
        eps="" if cfg.eps is None else str(check_eps(cfg.eps)),
        mean_ratio=float(sum(ratios) / len(ratios)) if ratios else None,
        mean_us=round(1e6 * sum(times) / len(times)) if times else None,
        status=status,
        participation=participation,
        solved=len(ratios),
    )


def run_experiment(cfg: ExperimentConfig) -> list[ReportRow]:
    """Run every cell of ``cfg`` and return one row per cell.

    Examples
    --------
    >>> cfg = ExperimentConfig(n=[10], m=[3], alg="greedy", proc="p0", instances=3)
    >>> [row.status for row in run_experiment(cfg)]
    ['OK']
    """
    if cfg.instances == 0:
        return []
    return [run_cell(cfg, cell, m, n) for cell, (m, n) in enumerate(cfg.cells())]


def write_csv(rows: Sequence[ReportRow], fh=None) -> str:
    """Write ``rows`` as CSV with a header; returns the text as well."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text
