"""Minimum-energy multicast planning for duty-cycled wireless sensor networks."""

from .baselines import BaselineKind, amst_tree, mnt_tree, run_baseline, schedule_tree, spt_tree
from .distsim import distributed_pipeline, simulate_distributed_cover, simulate_on_base_graph
from .extended import (
    ExtendedGraph,
    ExtNode,
    build_extended_graph,
    induced_satellite_subgraph,
    satellite_coverage,
)
from .model import (
    BudgetExceededError,
    DutySchedule,
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    MulticastTree,
    Network,
    energy_cost,
    greedy_hitting_set,
    is_feasible_schedule,
    tree_views,
    validate_network,
)
from .experiments import ExperimentConfig, RunRecord, generate_topology, run_sweep, summarize
from .oracle import OracleBudget, exact_memtcs, exact_msb, exact_mist_xi
from .solver import (
    BridgeMapping,
    SatelliteBridge,
    SolverConfig,
    find_msb,
    greedy_satellite_cover,
    map_bridge_to_tree,
    plan_from_mapping,
    solve_memtcs,
    steiner_tree_approx,
)

__version__ = "0.1.0"

__all__ = [
    "amst_tree",
    "BaselineKind",
    "BridgeMapping",
    "BudgetExceededError",
    "build_extended_graph",
    "distributed_pipeline",
    "DutySchedule",
    "energy_cost",
    "EnergyModel",
    "exact_memtcs",
    "exact_mist_xi",
    "exact_msb",
    "ExperimentConfig",
    "ExtendedGraph",
    "ExtNode",
    "find_msb",
    "generate_topology",
    "greedy_hitting_set",
    "greedy_satellite_cover",
    "induced_satellite_subgraph",
    "InfeasibleInstanceError",
    "is_feasible_schedule",
    "map_bridge_to_tree",
    "mnt_tree",
    "MulticastInstance",
    "MulticastPlan",
    "MulticastTree",
    "Network",
    "OracleBudget",
    "plan_from_mapping",
    "run_baseline",
    "run_sweep",
    "RunRecord",
    "satellite_coverage",
    "SatelliteBridge",
    "schedule_tree",
    "simulate_distributed_cover",
    "simulate_on_base_graph",
    "solve_memtcs",
    "SolverConfig",
    "spt_tree",
    "steiner_tree_approx",
    "summarize",
    "tree_views",
    "validate_network",
]
