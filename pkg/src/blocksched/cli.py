"""Command-line interface.

Usage
-----
    blocksched gen --n 9 --m 3 --b min --seed 1 > inst.json
    blocksched solve --alg greedy --in inst.json > sched.json
    blocksched validate --in inst.json --schedule sched.json
    blocksched oracle --in inst.json
    blocksched bench --config exp.json --out report.csv

Exit codes: 0 success, 1 infeasible, 2 budget exceeded, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import CapExceeded, Infeasible, OutOfBudget
from .estimators import ALGORITHMS, make_scheduler
from .experiment import ExperimentConfig, run_experiment, write_csv
from .generate import random_instance
from .model import format_time, is_feasible, makespan
from .oracle import DEFAULT_CAP
from .validation import check_eps, check_instance, check_schedule

EXIT_OK, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3

SOLVERS = [name for name in ALGORITHMS if name != "oracle"]


class BadInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with
    # the budget exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="random seed (default 0)")
    parser.add_argument("--timeout-ms", type=int, default=default, help="time budget per solve")
    parser.add_argument("--mem-mb", type=int, default=default, help="DP state budget in megabytes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="blocksched", description="Scheduling with block-graph conflicts.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="emit a random instance as JSON")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--b", default="min", help="min, avg, max or an explicit block count")
    gen.add_argument("--proc", default="unit", choices=["unit", "p0", "p1", "p2"])
    gen.add_argument("--env", default="identical", choices=["identical", "uniform", "unrelated"])
    gen.add_argument("--speeds", default=None, help="comma-separated speeds for uniform machines")
    gen.add_argument("--out", default="-")

    solve = sub.add_parser("solve", help="solve an instance read from --in or stdin")
    solve.add_argument("--alg", required=True, choices=SOLVERS)
    solve.add_argument("--eps", default=None, help="accuracy as a rational, e.g. 1/4")
    solve.add_argument("--k", default=None, help="jobs per machine for exact-cmax, or 'auto'")
    solve.add_argument("--parallel", type=int, default=1, help="threads for the flow algorithm")
    solve.add_argument("--in", dest="inp", default="-")
    solve.add_argument("--out", default="-")

    oracle = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    oracle.add_argument("--cap", type=int, default=DEFAULT_CAP)
    oracle.add_argument("--in", dest="inp", default="-")
    oracle.add_argument("--out", default="-")

    validate = sub.add_parser("validate", help="check a schedule against an instance")
    validate.add_argument("--in", dest="inp", required=True, help="instance JSON")
    validate.add_argument("--schedule", default="-", help="schedule JSON (default stdin)")

    bench = sub.add_parser("bench", help="run an experiment and emit CSV")
    bench.add_argument("--config", required=True, help="experiment config (JSON)")
    bench.add_argument("--out", default="-")

    for p in (gen, solve, oracle, validate, bench):
        _global_flags(p, suppress=True)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path}: invalid JSON ({exc})") from exc


def _result(inst, sched, alg: str, tag: str | None = None) -> str:
    doc = {"alg": alg, "assign": list(sched.assign), "makespan": format_time(makespan(inst, sched))}
    if tag is not None:
        doc["tag"] = tag
    return json.dumps(doc, sort_keys=True) + "\n"


def cmd_gen(args) -> int:
    b = args.b if args.b in ("min", "avg", "max") else int(args.b)
    speeds = None if args.speeds is None else [int(s) for s in args.speeds.split(",")]
    inst = random_instance(args.n, args.m, b, args.proc, args.env, speeds, rng=args.seed or 0)
    _write(args.out, inst.dumps() + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = check_instance(_load_json(args.inp))
    params = {"timeout_ms": args.timeout_ms, "mem_mb": args.mem_mb, "n_jobs": args.parallel}
    if args.eps is not None:
        params["eps"] = check_eps(args.eps)
    if args.k is not None:
        params["k"] = None if args.k == "auto" else int(args.k)
    est = make_scheduler(args.alg, **params).fit(inst)
    _write(args.out, _result(inst, est.schedule_, args.alg, getattr(est, "tag_", None)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = check_instance(_load_json(args.inp))
    est = make_scheduler("oracle", cap=args.cap).fit(inst)
    _write(args.out, _result(inst, est.schedule_, "oracle"))
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = check_instance(_load_json(args.inp))
    sched = check_schedule(_load_json(args.schedule), inst)
    ok = is_feasible(inst, sched)
    doc = {"feasible": ok, "makespan": format_time(makespan(inst, sched)) if ok else None}
    _write("-", json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    data = _load_json(args.config)
    # global flags given on the command line override the file
    for key in ("seed", "timeout_ms", "mem_mb"):
        if getattr(args, key, None) is not None:
            data[key] = getattr(args, key)
    rows = run_experiment(ExperimentConfig.from_json(data))
    _write(args.out, write_csv(rows))
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "oracle": cmd_oracle, "validate": cmd_validate, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OutOfBudget as exc:
        print(f"budget exceeded ({exc.kind}): {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (BadInput, CapExceeded, ValueError, KeyError, TypeError, OSError, ZeroDivisionError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
