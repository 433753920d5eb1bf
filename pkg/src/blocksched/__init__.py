"""Makespan scheduling on parallel machines with block-graph conflicts.

Jobs joined by an edge of the conflict graph must run on different
machines. The conflict graph is a block graph: each biconnected
component is a clique.
"""

from .budget import Budget
from .errors import BlockSchedError, CapExceeded, Infeasible, InvalidAssignment, NotABlockGraph, OutOfBudget
from .estimators import (
    ALGORITHMS,
    ExactCmaxScheduler,
    FlowScheduler,
    GreedyScheduler,
    KApproxScheduler,
    OracleScheduler,
    TreewidthFPTASScheduler,
    UniformPTASScheduler,
    UnitPTASScheduler,
    make_scheduler,
)
from .experiment import ExperimentConfig, ReportRow, run_experiment, write_csv
from .flow import build_flow_network, solve_uniform_unit
from .generate import random_instance, random_partition, generate_block_graph
from .graph import BlockCutTree, tree_decomposition, validate_and_build
from .greedy import greedy_schedule, hard_instance
from .kblock import k_approx, ptas_core, ptas_uniform
from .model import Identical, Instance, Schedule, Uniform, Unrelated, is_feasible, makespan
from .oracle import brute_force, optimum
from .patterns import all_patterns, decide_bounded_makespan, min_makespan_unit
from .treewidth import fptas
from .unit_ptas import ptas_trace, ptas_unit

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BlockCutTree",
    "BlockSchedError",
    "Budget",
    "CapExceeded",
    "ExactCmaxScheduler",
    "ExperimentConfig",
    "FlowScheduler",
    "GreedyScheduler",
    "Identical",
    "Infeasible",
    "Instance",
    "InvalidAssignment",
    "KApproxScheduler",
    "NotABlockGraph",
    "OracleScheduler",
    "OutOfBudget",
    "ReportRow",
    "Schedule",
    "TreewidthFPTASScheduler",
    "Uniform",
    "UniformPTASScheduler",
    "UnitPTASScheduler",
    "Unrelated",
    "all_patterns",
    "brute_force",
    "build_flow_network",
    "decide_bounded_makespan",
    "fptas",
    "generate_block_graph",
    "greedy_schedule",
    "hard_instance",
    "is_feasible",
    "k_approx",
    "make_scheduler",
    "makespan",
    "min_makespan_unit",
    "optimum",
    "ptas_core",
    "ptas_trace",
    "ptas_uniform",
    "ptas_unit",
    "random_instance",
    "random_partition",
    "run_experiment",
    "solve_uniform_unit",
    "tree_decomposition",
    "validate_and_build",
    "write_csv",
]
