"""Input-validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import json
import os
from collections.abc import Mapping
from fractions import Fraction

from .model import Identical, Instance, Schedule, Uniform


def check_instance(X, env: tuple[type, ...] | None = None, unit: bool = False) -> Instance:
    """Coerce ``X`` into an :class:`Instance` and check its kind.

    Parameters
    ----------
    X : Instance, mapping, JSON string or path to a JSON file
    env : tuple of types, optional
        Accepted machine environments.
    unit : bool
        Require unit processing times.
    """
    if isinstance(X, Instance):
        inst = X
    elif isinstance(X, Mapping):
        inst = Instance.from_json(X)
    elif isinstance(X, (str, os.PathLike)):
        text = str(X)
        if not text.lstrip().startswith("{"):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        inst = Instance.from_json(json.loads(text))
    else:
        raise TypeError(f"expected an Instance, got {type(X).__name__}")
    if env is not None and not isinstance(inst.env, env):
        names = ", ".join(e.kind for e in env)
        raise ValueError(f"expected {names} machines, got {inst.env.kind}")
    if unit and not inst.is_unit:
        raise ValueError("expected unit processing times")
    return inst


def check_eps(eps) -> Fraction:
    """Parse a positive rational accuracy such as ``0.25``, ``"1/4"`` or ``Fraction(1, 4)``."""
    if isinstance(eps, float):
        value = Fraction(str(eps))
    else:
        value = Fraction(eps)
    if value <= 0:
        raise ValueError("eps must be positive")
    return value


def check_schedule(sched, inst: Instance) -> Schedule:
    if isinstance(sched, Mapping):
        sched = Schedule.from_json(sched)
    elif not isinstance(sched, Schedule):
        sched = Schedule(tuple(sched))
    if len(sched.assign) != inst.n:
        raise ValueError(f"schedule has {len(sched.assign)} entries for {inst.n} jobs")
    return sched


P_OR_Q = (Identical, Uniform)
