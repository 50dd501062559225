"""Duty-cycled network model, multicast trees, schedules and the energy objective."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "InfeasibleInstanceError",
    "BudgetExceededError",
    "DutySchedule",
    "Network",
    "EnergyModel",
    "MulticastInstance",
    "MulticastTree",
    "TreeViews",
    "MulticastPlan",
    "validate_network",
    "is_feasible_schedule",
    "energy_cost",
    "greedy_hitting_set",
    "tree_views",
    "tree_from_edges",
    "terminals_connected",
]


class InfeasibleInstanceError(ValueError):
    """Terminals cannot be joined by any tree (disconnected or uncoverable)."""


class BudgetExceededError(RuntimeError):
    """An exhaustive search would exceed its configured budget."""


@dataclass(frozen=True)
class DutySchedule:
    """Active slots of one node within the working period (1-based)."""

    active_slots: frozenset[int]

    def __init__(self, active_slots: Iterable[int]):
        object.__setattr__(self, "active_slots", frozenset(int(i) for i in active_slots))

    def __iter__(self):
        return iter(sorted(self.active_slots))

    def __len__(self):
        return len(self.active_slots)

    def __contains__(self, slot):
        return slot in self.active_slots

    def problems(self, K: int) -> list[str]:
        out = []
        if not self.active_slots:
            out.append("empty schedule")
        bad = sorted(i for i in self.active_slots if not 1 <= i <= K)
        if bad:
            out.append(f"out-of-range slot(s) {bad} (K={K})")
        return out


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected graph G=(V,E) with a per-node duty schedule over K slots.

    Construction does not validate; call :func:`validate_network` for a report.
    Edges are normalized to ``(min, max)`` pairs.
    """

    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    K: int
    schedule: Mapping[int, DutySchedule]
    positions: Mapping[int, tuple[float, float]] | None = None
    _adj: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __init__(self, nodes, edges, K, schedule, positions=None):
        nodes = tuple(sorted(int(u) for u in nodes))
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            norm.add((u, v) if u <= v else (v, u))
        sched = {
            int(u): s if isinstance(s, DutySchedule) else DutySchedule(s)
            for u, s in schedule.items()
        }
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "schedule", sched)
        object.__setattr__(self, "positions", dict(positions) if positions else None)
        known = set(nodes)
        adj: dict[int, set[int]] = {u: set() for u in nodes}
        for u, v in norm:
            if u != v and u in known and v in known:
                adj[u].add(v)
                adj[v].add(u)
        object.__setattr__(self, "_adj", {u: tuple(sorted(n)) for u, n in adj.items()})

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.K == other.K
            and self.schedule == other.schedule
        )

    __hash__ = None  # mutable-looking mappings inside

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def active(self, u: int) -> frozenset[int]:
        """Gamma(u)."""
        return self.schedule[u].active_slots

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def max_degree(self) -> int:
        return max((len(n) for n in self._adj.values()), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u <= v else (v, u)) in self.edges


@dataclass(frozen=True)
class EnergyModel:
    """Per-packet send and receive costs, integer energy units."""

    e_s: int
    e_r: int

    def __post_init__(self):
        if not (self.e_s >= self.e_r >= 0):
            raise ValueError(f"need e_s >= e_r >= 0, got e_s={self.e_s}, e_r={self.e_r}")


@dataclass(frozen=True)
class MulticastInstance:
    terminals: frozenset[int]
    source: int

    def __init__(self, terminals: Iterable[int], source: int):
        terminals = frozenset(int(m) for m in terminals)
        if source not in terminals:
            raise ValueError(f"source {source} is not a terminal")
        object.__setattr__(self, "terminals", terminals)
        object.__setattr__(self, "source", int(source))

    def check_against(self, net: Network) -> None:
        missing = sorted(self.terminals - set(net.nodes))
        if missing:
            raise ValueError(f"terminals not in network: {missing}")


@dataclass(frozen=True)
class TreeViews:
    N: frozenset[int]
    E: frozenset[tuple[int, int]]
    d1: frozenset[int]
    dplus: frozenset[int]
    nl: frozenset[int]
    child: Mapping[int, tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class MulticastTree:
    """A rooted tree stored as a child -> parent map."""

    root: int
    parent: Mapping[int, int]

    def __init__(self, root: int, parent: Mapping[int, int] | None = None):
        object.__setattr__(self, "root", int(root))
        object.__setattr__(self, "parent", {int(c): int(p) for c, p in (parent or {}).items()})
        if self.root in self.parent:
            raise ValueError("root cannot have a parent")
        # every chain must end at the root
        for start in self.parent:
            seen = set()
            u = start
            while u != self.root:
                if u in seen or u not in self.parent:
                    raise ValueError(f"node {start} does not reach root {self.root}")
                seen.add(u)
                u = self.parent[u]

    def __eq__(self, other):
        if not isinstance(other, MulticastTree):
            return NotImplemented
        return self.root == other.root and self.parent == other.parent

    __hash__ = None

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self.parent) | {self.root}

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((min(c, p), max(c, p)) for c, p in self.parent.items())

    def children(self, u: int) -> tuple[int, ...]:
        return tuple(sorted(c for c, p in self.parent.items() if p == u))

    def degree(self, u: int) -> int:
        return len(self.children(u)) + (u != self.root)

    def depth(self, u: int) -> int:
        d = 0
        while u != self.root:
            u = self.parent[u]
            d += 1
        return d

    def views(self) -> TreeViews:
        return tree_views(self)


@dataclass(frozen=True)
class MulticastPlan:
    """A multicast tree together with its transmission schedule B."""

    tree: MulticastTree
    schedule: Mapping[int, frozenset[int]]

    def __init__(self, tree: MulticastTree, schedule: Mapping[int, Iterable[int]]):
        object.__setattr__(self, "tree", tree)
        object.__setattr__(
            self, "schedule", {int(u): frozenset(b) for u, b in sorted(schedule.items())}
        )
        nl = tree_views(tree).nl
        if set(self.schedule) != set(nl):
            raise ValueError(
                f"schedule domain {sorted(self.schedule)} differs from nl(T) {sorted(nl)}"
            )

    @property
    def transmissions(self) -> int:
        return sum(len(b) for b in self.schedule.values())

    @property
    def forwarders(self) -> int:
        return len(self.schedule)


def validate_network(net: Network) -> list[str]:
    """Return every violation found in ``net``; an empty list means valid."""
    report = []
    if net.K < 1:
        report.append(f"K must be positive, got {net.K}")
    known = set(net.nodes)
    if len(known) != len(net.nodes):
        report.append("duplicate node ids")
    for u in net.nodes:
        if u not in net.schedule:
            report.append(f"node {u}: empty schedule")
            continue
        for p in net.schedule[u].problems(net.K):
            report.append(f"node {u}: {p}")
    for u in sorted(set(net.schedule) - known):
        report.append(f"schedule for unknown node {u}")
    for u, v in sorted(net.edges):
        if u == v:
            report.append(f"self-loop at {u}")
        elif u not in known or v not in known:
            report.append(f"dangling edge ({u},{v})")
    return report


def tree_views(tree: MulticastTree) -> TreeViews:
    """Derived node/edge views N, E, d1, d+, nl and child of a rooted tree."""
    nodes = tree.nodes
    child: dict[int, list[int]] = {u: [] for u in nodes}
    for c, p in tree.parent.items():
        child[p].append(c)
    deg = {u: len(child[u]) + (u != tree.root) for u in nodes}
    if len(nodes) == 1:
        d1: frozenset[int] = frozenset()
    else:
        d1 = frozenset(u for u in nodes if deg[u] == 1)
    dplus = frozenset(u for u in nodes if deg[u] > 1)
    nl = frozenset(u for u in nodes if child[u])
    return TreeViews(
        N=frozenset(nodes),
        E=tree.edges,
        d1=d1,
        dplus=dplus,
        nl=nl,
        child={u: tuple(sorted(cs)) for u, cs in child.items()},
    )


def tree_from_edges(root: int, edges: Iterable[tuple[int, int]]) -> MulticastTree:
    """Orient an undirected edge set as a tree rooted at ``root``."""
    adj: dict[int, list[int]] = {root: []}
    n_edges = 0
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
        n_edges += 1
    parent = {}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                parent[v] = u
                queue.append(v)
    if len(seen) != len(adj) or n_edges != len(adj) - 1:
        raise ValueError("edge set is not a tree containing the root")
    return MulticastTree(root, parent)


def is_feasible_schedule(
    tree: MulticastTree, sched: Mapping[int, Iterable[int]], net: Network
) -> bool:
    """True iff every B(u) hits Gamma(v) for each child v of u."""
    views = tree_views(tree)
    if set(sched) != set(views.nl):
        raise ValueError(
            f"schedule domain {sorted(sched)} differs from nl(T) {sorted(views.nl)}"
        )
    for u in views.nl:
        b = frozenset(sched[u])
        for v in views.child[u]:
            if not b & net.active(v):
                return False
    return True


def energy_cost(plan: MulticastPlan, model: EnergyModel) -> int:
    """Total energy: transmissions times e_s plus receptions times e_r."""
    sends = sum(len(b) for b in plan.schedule.values())
    return sends * model.e_s + (len(plan.tree.nodes) - 1) * model.e_r


def greedy_hitting_set(collection: Iterable[Iterable[int]], K: int | None = None) -> frozenset[int]:
    """Greedy hitting set: repeatedly take the slot hitting most unhit sets.

    Ties go to the smallest slot. ``K`` only restricts the candidate slots
    (when given, slots outside 1..K are ignored).
    """
    sets = [frozenset(c) for c in collection]
    if any(not s for s in sets):
        raise ValueError("collection contains an empty set")
    remaining = list(sets)
    chosen: set[int] = set()
    while remaining:
        counts: dict[int, int] = {}
        for s in remaining:
            for i in s:
                if K is None or 1 <= i <= K:
                    counts[i] = counts.get(i, 0) + 1
        if not counts:
            raise ValueError(f"no slot within 1..{K} hits the remaining sets")
        best = min(counts, key=lambda i: (-counts[i], i))
        chosen.add(best)
        remaining = [s for s in remaining if best not in s]
    return frozenset(chosen)


def terminals_connected(net: Network, terminals: Iterable[int]) -> bool:
    terminals = set(terminals)
    if len(terminals) <= 1:
        return True
    start = min(terminals)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return terminals <= seen
