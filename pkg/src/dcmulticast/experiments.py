"""Random deployments, paired algorithm sweeps, summaries and file formats.

Randomness comes from numpy's PCG64 generator seeded through
``SeedSequence``; the same (seed, config) yields the same topologies and
therefore the same CSV on any platform running the same numpy release.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import dataclass, field, fields, replace
from typing import IO, Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .baselines import BaselineKind, run_baseline
from .model import (
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    Network,
    energy_cost,
    terminals_connected,
)
from .solver import SolverConfig, solve_memtcs

__all__ = [
    "ALGORITHMS",
    "ExperimentConfig",
    "RunRecord",
    "SummaryRow",
    "Reduction",
    "Summary",
    "trial_seed",
    "generate_topology",
    "random_small_instance",
    "run_algorithm",
    "run_sweep",
    "summarize",
    "write_csv",
    "read_csv",
    "dump_topology",
    "load_topology",
]

log = logging.getLogger(__name__)

ALGORITHMS = ("TCS", "SPT", "AMST", "MNT")
TOPOLOGY_VERSION = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Deployment and sweep parameters.

    ``generate_topology`` reads the scalar fields (``K``, ``n_terminals`` or
    ``terminal_fraction``).  ``run_sweep`` walks ``K_values`` (default: just
    ``K``) and, unless ``n_terminals`` pins the terminal count,
    ``terminal_fractions``.  Active slots per node are ``duty_slots`` when
    given, else ``ceil(duty_fraction * K)``.
    """

    seed: int = 0
    n_nodes: int = 100
    area: tuple[float, float] = (1000.0, 1000.0)
    range: float = 300.0
    K: int = 20
    duty_slots: int | None = None
    duty_fraction: float = 0.25
    terminal_fraction: float = 0.5
    n_terminals: int | None = None
    terminal_fractions: tuple[float, ...] = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
    K_values: tuple[int, ...] = ()
    trials: int = 20
    algorithms: tuple[str, ...] = ALGORITHMS
    e_s: int = 100
    e_r: int = 15
    steiner_algorithm: str = "kmb"
    refine: bool = True
    tie_break: str = "terminal"
    max_retries: int = 200
    record_runtime: bool = False

    def __post_init__(self):
        if self.range <= 0:
            raise ValueError("range must be positive")
        if self.n_nodes < 1 or self.K < 1 or self.trials < 1:
            raise ValueError("n_nodes, K and trials must be positive")
        if not 1 <= self.slots_per_node() <= self.K:
            raise ValueError(f"duty slots must lie in [1, K], got {self.slots_per_node()}")
        for f in (self.terminal_fraction, *self.terminal_fractions):
            if not 0 < f <= 1:
                raise ValueError(f"terminal fraction {f} outside (0, 1]")
        if self.n_terminals is not None and not 1 <= self.n_terminals <= self.n_nodes:
            raise ValueError("n_terminals must lie in [1, n_nodes]")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        EnergyModel(self.e_s, self.e_r)

    def slots_per_node(self, K: int | None = None) -> int:
        K = self.K if K is None else K
        if self.duty_slots is not None:
            return self.duty_slots
        return max(1, math.ceil(self.duty_fraction * K - 1e-9))

    def terminal_count(self) -> int:
        if self.n_terminals is not None:
            return self.n_terminals
        return max(1, math.floor(self.terminal_fraction * self.n_nodes + 0.5))

    @property
    def energy(self) -> EnergyModel:
        return EnergyModel(self.e_s, self.e_r)

    def points(self) -> list["ExperimentConfig"]:
        """One scalar config per sweep point, in sweep order."""
        out = []
        for K in self.K_values or (self.K,):
            if self.n_terminals is not None:
                out.append(replace(self, K=K))
            else:
                out += [replace(self, K=K, terminal_fraction=f) for f in self.terminal_fractions]
        return out


@dataclass(frozen=True)
class RunRecord:
    seed: int
    n_nodes: int
    n_terminals: int
    K: int
    algorithm: str
    transmissions: int
    energy: int
    tree_nodes: int
    forwarders: int
    runtime_ms: float


CSV_HEADER = [f.name for f in fields(RunRecord)]


def trial_seed(seed: int, trial: int) -> int:
    """64-bit seed for one trial, derived from the sweep seed."""
    state = np.random.SeedSequence([seed, trial]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


def _rng(cfg: ExperimentConfig, trial: int) -> np.random.Generator:
    key = [trial_seed(cfg.seed, trial), cfg.n_nodes, cfg.K, cfg.terminal_count()]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def _sample(cfg: ExperimentConfig, rng: np.random.Generator):
    n, K = cfg.n_nodes, cfg.K
    pts = rng.uniform((0.0, 0.0), cfg.area, size=(n, 2))
    pairs = sorted(cKDTree(pts).query_pairs(cfg.range)) if n > 1 else []
    d = cfg.slots_per_node()
    slots = np.argsort(rng.random((n, K)), axis=1)[:, :d] + 1
    terminals = rng.choice(n, size=cfg.terminal_count(), replace=False)
    net = Network(
        range(n),
        pairs,
        K,
        {u: slots[u].tolist() for u in range(n)},
        positions={u: (float(pts[u, 0]), float(pts[u, 1])) for u in range(n)},
    )
    inst = MulticastInstance(terminals.tolist(), int(terminals[0]))
    return net, inst


def generate_topology(cfg: ExperimentConfig, trial: int = 0) -> tuple[Network, MulticastInstance]:
    """Random geometric deployment with a connected terminal set.

    Nodes are uniform in the area, linked when within ``range``; each draws
    its active slots uniformly without replacement; terminals are a uniform
    sample whose first member is the source.  Deployments whose terminals
    are disconnected are redrawn, at most ``max_retries`` times.
    """
    rng = _rng(cfg, trial)
    for attempt in range(cfg.max_retries):
        net, inst = _sample(cfg, rng)
        if terminals_connected(net, inst.terminals):
            if attempt:
                log.debug("trial %d: %d resample(s) for connectivity", trial, attempt)
            return net, inst
    raise InfeasibleInstanceError(
        f"no connected terminal set after {cfg.max_retries} deployments "
        f"(n={cfg.n_nodes}, range={cfg.range}, area={cfg.area})"
    )


def random_small_instance(
    rng: np.random.Generator,
    n_nodes: int,
    K: int,
    edge_prob: float = 0.4,
    n_terminals: int | None = None,
    max_active: int | None = None,
    max_retries: int = 1000,
) -> tuple[Network, MulticastInstance]:
    """Erdos-Renyi network with random nonempty schedules, for exhaustive checks."""
    max_active = K if max_active is None else max_active
    for _ in range(max_retries):
        edges = [
            (u, v) for u in range(n_nodes) for v in range(u + 1, n_nodes) if rng.random() < edge_prob
        ]
        sched = {}
        for u in range(n_nodes):
            k = int(rng.integers(1, max_active + 1))
            sched[u] = (rng.choice(K, size=k, replace=False) + 1).tolist()
        net = Network(range(n_nodes), edges, K, sched)
        m = n_terminals if n_terminals is not None else int(rng.integers(2, n_nodes + 1))
        terms = rng.choice(n_nodes, size=m, replace=False).tolist()
        if terminals_connected(net, terms):
            return net, MulticastInstance(terms, terms[0])
    raise InfeasibleInstanceError("could not draw a connected instance")


def run_algorithm(
    name: str,
    net: Network,
    inst: MulticastInstance,
    cfg: SolverConfig = SolverConfig(),
) -> MulticastPlan:
    if name == "TCS":
        return solve_memtcs(net, inst, cfg=cfg)
    return run_baseline(BaselineKind(name), net, inst, cfg=cfg)


def run_sweep(cfg: ExperimentConfig) -> list[RunRecord]:
    """Every algorithm on every (sweep point, trial) deployment, paired.

    Failures in one trial are logged and skipped.
    """
    solver_cfg = SolverConfig(cfg.steiner_algorithm, cfg.tie_break, cfg.refine)
    model = cfg.energy
    records = []
    for point in cfg.points():
        for trial in range(cfg.trials):
            try:
                net, inst = generate_topology(point, trial)
            except InfeasibleInstanceError as exc:
                log.warning("K=%d |M|=%d trial %d skipped: %s", point.K, point.terminal_count(), trial, exc)
                continue
            seed = trial_seed(point.seed, trial)
            for name in cfg.algorithms:
                t0 = time.perf_counter()
                try:
                    plan = run_algorithm(name, net, inst, solver_cfg)
                except (ValueError, RuntimeError) as exc:
                    log.warning("%s failed on K=%d trial %d: %s", name, point.K, trial, exc)
                    continue
                elapsed = (time.perf_counter() - t0) * 1000 if cfg.record_runtime else 0.0
                records.append(
                    RunRecord(
                        seed=seed,
                        n_nodes=point.n_nodes,
                        n_terminals=len(inst.terminals),
                        K=point.K,
                        algorithm=name,
                        transmissions=plan.transmissions,
                        energy=energy_cost(plan, model),
                        tree_nodes=len(plan.tree.nodes),
                        forwarders=plan.forwarders,
                        runtime_ms=round(elapsed, 3),
                    )
                )
    return records


@dataclass(frozen=True)
class SummaryRow:
    K: int
    n_terminals: int
    algorithm: str
    trials: int
    transmissions_mean: float
    transmissions_std: float
    energy_mean: float
    energy_std: float
    forwarders_mean: float
    tree_nodes_mean: float


@dataclass(frozen=True)
class Reduction:
    """TCS against the best baseline (lowest mean) at one sweep point, in percent."""

    K: int
    n_terminals: int
    best_baseline: str
    transmissions_pct: float
    energy_pct: float


@dataclass(frozen=True)
class Summary:
    rows: list[SummaryRow] = field(default_factory=list)
    reductions: list[Reduction] = field(default_factory=list)

    def row(self, K: int, n_terminals: int, algorithm: str) -> SummaryRow:
        return next(
            r for r in self.rows if (r.K, r.n_terminals, r.algorithm) == (K, n_terminals, algorithm)
        )


def summarize(records: Sequence[RunRecord]) -> Summary:
    """Mean and population std per (K, |M|, algorithm), plus TCS reductions."""
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple[int, int, str], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.K, r.n_terminals, r.algorithm), []).append(r)
    order = {a: i for i, a in enumerate(ALGORITHMS)}
    rows = []
    for (K, m, alg), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], order.get(kv[0][2], 99))):
        tx = np.array([r.transmissions for r in rs], dtype=float)
        en = np.array([r.energy for r in rs], dtype=float)
        rows.append(
            SummaryRow(
                K, m, alg, len(rs),
                float(tx.mean()), float(tx.std()),
                float(en.mean()), float(en.std()),
                float(np.mean([r.forwarders for r in rs])),
                float(np.mean([r.tree_nodes for r in rs])),
            )
        )
    reductions = []
    points = sorted({(r.K, r.n_terminals) for r in rows})
    for K, m in points:
        here = {r.algorithm: r for r in rows if (r.K, r.n_terminals) == (K, m)}
        if "TCS" not in here or len(here) < 2:
            continue
        base = [r for a, r in here.items() if a != "TCS"]
        best = min(base, key=lambda r: (r.transmissions_mean, order.get(r.algorithm, 99)))
        best_energy = min(r.energy_mean for r in base)
        tcs = here["TCS"]
        reductions.append(
            Reduction(
                K, m, best.algorithm,
                _pct(best.transmissions_mean, tcs.transmissions_mean),
                _pct(best_energy, tcs.energy_mean),
            )
        )
    return Summary(rows, reductions)


def _pct(base: float, new: float) -> float:
    return 0.0 if base == 0 else 100.0 * (base - new) / base


def write_csv(records: Iterable[RunRecord], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([getattr(r, name) for name in CSV_HEADER])


def read_csv(fh: IO[str]) -> list[RunRecord]:
    reader = csv.DictReader(fh)
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(
            RunRecord(
                seed=int(row["seed"]),
                n_nodes=int(row["n_nodes"]),
                n_terminals=int(row["n_terminals"]),
                K=int(row["K"]),
                algorithm=row["algorithm"],
                transmissions=int(row["transmissions"]),
                energy=int(row["energy"]),
                tree_nodes=int(row["tree_nodes"]),
                forwarders=int(row["forwarders"]),
                runtime_ms=float(row["runtime_ms"]),
            )
        )
    return out


def dump_topology(net: Network, inst: MulticastInstance | None = None) -> str:
    """JSON topology document (version, K, nodes, edges, optional instance)."""
    nodes = []
    for u in net.nodes:
        entry = {"id": u}
        if net.positions and u in net.positions:
            entry["x"], entry["y"] = net.positions[u]
        entry["active_slots"] = sorted(net.active(u)) if u in net.schedule else []
        nodes.append(entry)
    doc = {
        "version": TOPOLOGY_VERSION,
        "K": net.K,
        "nodes": nodes,
        "edges": [list(e) for e in sorted(net.edges)],
    }
    if inst is not None:
        doc["instance"] = {"source": inst.source, "terminals": sorted(inst.terminals)}
    return json.dumps(doc, indent=1) + "\n"


def load_topology(text: str) -> tuple[Network, MulticastInstance | None]:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("topology document must be a JSON object")
    if doc.get("version") != TOPOLOGY_VERSION:
        raise ValueError(f"unsupported topology version {doc.get('version')!r}")
    try:
        nodes = doc["nodes"]
        ids = [int(n["id"]) for n in nodes]
        sched = {int(n["id"]): [int(i) for i in n["active_slots"]] for n in nodes}
        pos = {int(n["id"]): (float(n["x"]), float(n["y"])) for n in nodes if "x" in n}
        net = Network(ids, [tuple(e) for e in doc["edges"]], int(doc["K"]), sched, pos or None)
        inst = None
        if "instance" in doc:
            inst = MulticastInstance(doc["instance"]["terminals"], doc["instance"]["source"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed topology document: {exc}") from exc
    return net, inst
