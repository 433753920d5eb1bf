"""Schedulers with an estimator-style interface.

``fit(X)`` solves instance ``X`` and stores ``schedule_`` and
``makespan_``; ``predict(X)`` returns the machine of every job as an
integer array. Hyper-parameters follow the usual conventions, so
``get_params``/``set_params``/``clone`` work as expected.

Examples
--------
>>> from blocksched import GreedyScheduler, random_instance
>>> inst = random_instance(12, 3, "min", "p0", rng=0)
>>> GreedyScheduler().fit(inst).makespan_ >= inst.proc[0] / 3
True
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .budget import Budget
from .flow import solve_uniform_unit
from .greedy import greedy_schedule
from .kblock import k_approx, ptas_uniform
from .model import Identical, Instance, Schedule, makespan
from .oracle import DEFAULT_CAP, brute_force
from .patterns import decide_bounded_makespan, min_makespan_unit
from .treewidth import fptas
from .unit_ptas import ptas_trace
from .validation import P_OR_Q, check_eps, check_instance


class BaseScheduler(BaseEstimator):
    """Common fit/predict plumbing; subclasses implement ``_solve``."""

    _env: tuple[type, ...] | None = None
    _unit = False

    def _budget(self) -> Budget:
        return Budget.from_mb(getattr(self, "timeout_ms", None), getattr(self, "mem_mb", None))

    def _solve(self, inst: Instance, budget: Budget) -> Schedule:
        raise NotImplementedError

    def fit(self, X, y=None):
        """Solve instance ``X``.

        Parameters
        ----------
        X : Instance, mapping or JSON path
        y : ignored

        Returns
        -------
        self
        """
        inst = check_instance(X, self._env, self._unit)
        sched = self._solve(inst, self._budget())
        self.schedule_ = sched
        self.makespan_ = makespan(inst, sched)
        self.n_machines_ = inst.m
        return self

    def predict(self, X=None) -> np.ndarray:
        """Machine index of every job.

        Without ``X`` the fitted schedule is returned; otherwise ``X`` is
        solved with the fitted hyper-parameters.
        """
        check_is_fitted(self, "schedule_")
        if X is None:
            return np.asarray(self.schedule_.assign, dtype=np.int64)
        inst = check_instance(X, self._env, self._unit)
        return np.asarray(self._solve(inst, self._budget()).assign, dtype=np.int64)

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict()


class GreedyScheduler(BaseScheduler):
    """Greedy block-by-block list scheduling (identical machines)."""

    _env = (Identical,)

    def __init__(self, timeout_ms=None, mem_mb=None):
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        return greedy_schedule(inst)


class ExactCmaxScheduler(BaseScheduler):
    """Pattern DP for unit jobs.

    Parameters
    ----------
    k : int or None
        Decide whether at most ``k`` jobs per machine suffice. With None
        the optimum is searched up to the greedy makespan.
    """

    _env = (Identical,)
    _unit = True

    def __init__(self, k=None, early_abort=False, timeout_ms=None, mem_mb=None):
        self.k = k
        self.early_abort = early_abort
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        if self.k is None or self.k == "auto":
            return min_makespan_unit(inst, budget=budget)
        return decide_bounded_makespan(inst, int(self.k), budget, early_abort=self.early_abort)


class UnitPTASScheduler(BaseScheduler):
    """PTAS for unit jobs; ``tag_`` records the stages that ran."""

    _env = (Identical,)
    _unit = True

    def __init__(self, eps=0.5, early_abort=False, timeout_ms=None, mem_mb=None):
        self.eps = eps
        self.early_abort = early_abort
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        sched, tag = ptas_trace(inst, check_eps(self.eps), budget, self.early_abort)
        self.tag_ = tag
        return sched


class FlowScheduler(BaseScheduler):
    """Exact max-flow algorithm for unit jobs on uniform machines."""

    _env = P_OR_Q
    _unit = True

    def __init__(self, n_jobs=1, timeout_ms=None, mem_mb=None):
        self.n_jobs = n_jobs
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        return solve_uniform_unit(inst, budget, n_jobs=self.n_jobs)


class KApproxScheduler(BaseScheduler):
    """k-approximation for uniform machines and a graph with k blocks."""

    _env = P_OR_Q

    def __init__(self, timeout_ms=None, mem_mb=None):
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        return k_approx(inst, budget)


class UniformPTASScheduler(BaseScheduler):
    """Configuration PTAS for uniform machines and few blocks."""

    _env = P_OR_Q

    def __init__(self, eps=0.5, timeout_ms=None, mem_mb=None):
        self.eps = eps
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        return ptas_uniform(inst, check_eps(self.eps), budget)


class TreewidthFPTASScheduler(BaseScheduler):
    """FPTAS over the tree decomposition; any machine environment."""

    def __init__(self, eps=0.5, timeout_ms=None, mem_mb=None):
        self.eps = eps
        self.timeout_ms = timeout_ms
        self.mem_mb = mem_mb

    def _solve(self, inst, budget):
        return fptas(inst, check_eps(self.eps), budget)


class OracleScheduler(BaseScheduler):
    """Exhaustive branch and bound; ``cap`` bounds the number of jobs."""

    def __init__(self, cap=DEFAULT_CAP):
        self.cap = cap

    def _solve(self, inst, budget):
        return brute_force(inst, cap=self.cap)[0]


ALGORITHMS: dict[str, type[BaseScheduler]] = {
    "greedy": GreedyScheduler,
    "exact-cmax": ExactCmaxScheduler,
    "ptas-unit": UnitPTASScheduler,
    "flow": FlowScheduler,
    "k-approx": KApproxScheduler,
    "ptas-uniform": UniformPTASScheduler,
    "tw-fptas": TreewidthFPTASScheduler,
    "oracle": OracleScheduler,
}


def make_scheduler(name: str, **params) -> BaseScheduler:
    """Instantiate a scheduler by its CLI name, dropping unknown parameters."""
    if name not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}")
    cls = ALGORITHMS[name]
    accepted = cls._get_param_names()
    return cls(**{k: v for k, v in params.items() if k in accepted and v is not None})
