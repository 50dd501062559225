"""Approximate minimum satellite bridge and the MEMTCS planner built on it.

Pipeline: build the extended graph, cover the terminals with satellites
greedily, connect the cover with a Steiner tree inside the satellite
subgraph (the *bridge*), then collapse satellites back onto their nuclear
nodes to get a multicast tree in G whose transmit slots come straight from
the bridge.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import steiner
from .extended import ExtendedGraph, ExtNode, build_extended_graph
from .graphs import IndexedGraph, spanning_tree_bfs
from .model import (
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    MulticastTree,
    Network,
    greedy_hitting_set,
    terminals_connected,
    tree_views,
)
from .steiner import STEINER_RATIO, SteinerTree

__all__ = [
    "SolverConfig",
    "TIE_BREAKS",
    "SatelliteBridge",
    "BridgeMapping",
    "greedy_satellite_cover",
    "steiner_tree_approx",
    "find_msb",
    "bridge_from_cover",
    "map_bridge_to_tree",
    "plan_from_mapping",
    "solve_memtcs",
]


TIE_BREAKS = ("lex", "terminal")


@dataclass(frozen=True)
class SolverConfig:
    """``steiner_algorithm`` is ``"kmb"`` (default) or ``"mehlhorn"``.

    With ``refine`` the mapped plan is post-processed: non-terminal leaves
    are pruned and each forwarder keeps only a greedy subset of its bridge
    slots that still reaches its children.  Both steps can only lower the
    energy.  ``refine=False`` schedules every inner node with its full
    bridge slot set.

    ``tie_break`` orders equal-gain satellites in the greedy cover:
    ``"lex"`` takes the smallest ``(node, slot)``; ``"terminal"`` first
    prefers satellites whose node is a terminal (already in the tree, so no
    extra reception), then falls back to ``"lex"``.
    """

    steiner_algorithm: str = "kmb"
    tie_break: str = "terminal"
    refine: bool = True

    def __post_init__(self):
        if self.steiner_algorithm not in STEINER_RATIO:
            raise ValueError(f"unknown Steiner algorithm {self.steiner_algorithm!r}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"unknown tie-break {self.tie_break!r}")

    @property
    def rho(self) -> int:
        return STEINER_RATIO[self.steiner_algorithm]


@dataclass(frozen=True)
class SatelliteBridge:
    """A tree of satellites; every terminal must touch one of them."""

    nodes: frozenset[ExtNode]
    edges: frozenset[tuple[ExtNode, ExtNode]] = frozenset()

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class BridgeMapping:
    """Tree ``R`` in G spanning the terminals plus slot sets ``F`` on its inner nodes.

    ``partition`` maps each nuclear node touched by the bridge to the slots
    of its satellites in the bridge; ``F`` is that map restricted to
    ``d+(R)``.  ``attach`` records which bridge node each terminal outside
    the partition was hooked onto.
    """

    R: MulticastTree
    F: Mapping[int, frozenset[int]]
    partition: Mapping[int, frozenset[int]]
    attach: Mapping[int, ExtNode] = field(default_factory=dict)
    graph_edges: frozenset[tuple[int, int]] = frozenset()


def _check_coverable(g: ExtendedGraph, terminals: Iterable[int]) -> None:
    for m in sorted(terminals):
        if ExtNode(m) not in g:
            raise ValueError(f"terminal {m} is not a network node")
        if not g.satellite_neighbors(m):
            raise InfeasibleInstanceError(f"terminal {m} has no satellite neighbour (isolated node)")


def greedy_satellite_cover(
    g: ExtendedGraph, terminals: Iterable[int], cfg: SolverConfig = SolverConfig()
) -> frozenset[ExtNode]:
    """Greedy set cover of the terminals by satellites.

    Each step picks the satellite adjacent to the most uncovered terminals,
    ties resolved by ``cfg.tie_break``.  Implemented lazily with a heap;
    gains only shrink, so the pick sequence equals the plain greedy loop.
    """
    terminals = frozenset(terminals)
    _check_coverable(g, terminals)
    covers: dict[ExtNode, set[int]] = {}
    for m in terminals:
        for w in g.satellite_neighbors(m):
            covers.setdefault(w, set()).add(m)
    prefer_terminals = cfg.tie_break == "terminal"

    def rank(w: ExtNode) -> tuple[bool, ExtNode]:
        return (prefer_terminals and w.node not in terminals, w)

    heap = [(-len(ms), rank(w)) for w, ms in covers.items()]
    heapq.heapify(heap)
    uncovered = set(terminals)
    chosen: set[ExtNode] = set()
    while uncovered:
        neg, (_, w) = heapq.heappop(heap)
        gain = len(covers[w] & uncovered)
        if gain == 0:
            continue
        if gain < -neg:
            heapq.heappush(heap, (-gain, rank(w)))
            continue
        chosen.add(w)
        uncovered -= covers[w]
    return frozenset(chosen)


def steiner_tree_approx(
    graph: IndexedGraph, terminals: Iterable, cfg: SolverConfig = SolverConfig()
) -> SteinerTree:
    return steiner.steiner_tree_approx(graph, terminals, cfg.steiner_algorithm)


def bridge_from_cover(
    g: ExtendedGraph, cover: Iterable[ExtNode], cfg: SolverConfig = SolverConfig()
) -> SatelliteBridge:
    """Connect a satellite cover with a Steiner tree in the satellite subgraph."""
    st = steiner_tree_approx(g.satellite_graph(), cover, cfg)
    return SatelliteBridge(st.nodes, st.edges)


def find_msb(
    g: ExtendedGraph, terminals: Iterable[int], cfg: SolverConfig = SolverConfig()
) -> SatelliteBridge:
    """Approximate minimum satellite bridge: greedy cover, then Steiner connection."""
    return bridge_from_cover(g, greedy_satellite_cover(g, terminals, cfg), cfg)


def _validate_bridge(sb: SatelliteBridge, g: ExtendedGraph, terminals) -> None:
    if not sb.nodes:
        raise ValueError("empty bridge")
    for x in sb.nodes:
        if not x.is_satellite or x not in g:
            raise ValueError(f"bridge node {x} is not a satellite of the graph")
    if len(sb.edges) != len(sb.nodes) - 1:
        raise ValueError("bridge is not a tree")
    for a, b in sb.edges:
        if a not in sb.nodes or b not in sb.nodes or not g.adjacent(a, b):
            raise ValueError(f"bridge edge ({a}, {b}) is not an edge among bridge nodes")
    adj: dict = {x: set() for x in sb.nodes}
    for a, b in sb.edges:
        adj[a].add(b)
        adj[b].add(a)
    start = min(sb.nodes)
    if len(spanning_tree_bfs(start, adj)) != len(sb.nodes) - 1:
        raise ValueError("bridge is not connected")
    for m in terminals:
        if not any(m in g.nuclear_neighbors(x) for x in sb.nodes):
            raise ValueError(f"terminal {m} is not adjacent to the bridge")


def map_bridge_to_tree(
    sb: SatelliteBridge,
    g: ExtendedGraph,
    terminals: Iterable[int],
    root: int | None = None,
) -> BridgeMapping:
    """Collapse a satellite bridge onto G.

    Bridge satellites are grouped by nuclear node ``a``; terminals outside
    those groups are hooked to their smallest adjacent bridge node.  Bridge
    edges between groups and the hook edges become the graph G' over
    terminals and group nodes, and ``R`` is a BFS spanning tree of G' from
    ``root`` (default: smallest terminal).  ``F(a)`` is the slot set of
    group ``a``.
    """
    terminals = frozenset(terminals)
    _validate_bridge(sb, g, terminals)
    partition: dict[int, set[int]] = {}
    for x in sb.nodes:
        partition.setdefault(x.node, set()).add(x.slot)
    groups = set(partition)

    bridge_sorted = sorted(sb.nodes)
    attach: dict[int, ExtNode] = {}
    gp_edges: set[tuple[int, int]] = set()
    for a, b in sb.edges:
        if a.node != b.node:
            gp_edges.add((min(a.node, b.node), max(a.node, b.node)))
    for m in sorted(terminals - groups):
        hook = next(x for x in bridge_sorted if m in g.nuclear_neighbors(x))
        attach[m] = hook
        gp_edges.add((min(hook.node, m), max(hook.node, m)))

    vertices = terminals | groups
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for a, b in gp_edges:
        adj[a].add(b)
        adj[b].add(a)
    if root is None:
        root = min(terminals)
    parent = spanning_tree_bfs(root, adj)
    if len(parent) != len(vertices) - 1:
        raise ValueError("collapsed bridge graph is disconnected")
    R = MulticastTree(root, parent)
    dplus = tree_views(R).dplus
    F = {a: frozenset(partition[a]) for a in sorted(dplus)}
    return BridgeMapping(
        R=R,
        F=F,
        partition={a: frozenset(s) for a, s in sorted(partition.items())},
        attach=attach,
        graph_edges=frozenset(gp_edges),
    )


def plan_from_mapping(
    mapping: BridgeMapping,
    net: Network,
    terminals: Iterable[int] | None = None,
    refine: bool = False,
) -> MulticastPlan:
    """Schedule the mapped tree: F on inner nodes, one slot for a leaf root.

    ``refine`` (needs ``terminals``) prunes non-terminal leaves and trims
    each F to a greedy hitting subset for the node's children.
    """
    tree = mapping.R
    if refine:
        if terminals is None:
            raise ValueError("refine needs the terminal set")
        tree = _prune_tree(tree, frozenset(terminals))
    views = tree_views(tree)
    schedule = {}
    for u in views.nl:
        if u in views.dplus or (u in mapping.F and refine):
            slots = mapping.F[u]
            if refine:
                slots = greedy_hitting_set([net.active(v) & slots for v in views.child[u]])
            schedule[u] = slots
        else:
            (child,) = views.child[u]
            schedule[u] = frozenset({min(net.active(child))})
    return MulticastPlan(tree, schedule)


def _prune_tree(tree: MulticastTree, keep: frozenset[int]) -> MulticastTree:
    parent = dict(tree.parent)
    n_children: dict[int, int] = {}
    for p in parent.values():
        n_children[p] = n_children.get(p, 0) + 1
    stack = [c for c in parent if c not in n_children and c not in keep]
    while stack:
        c = stack.pop()
        p = parent.pop(c)
        n_children[p] -= 1
        if n_children[p] == 0 and p != tree.root and p not in keep:
            stack.append(p)
    return MulticastTree(tree.root, parent)


def trivial_plan(source: int) -> MulticastPlan:
    return MulticastPlan(MulticastTree(source), {})


def solve_memtcs(
    net: Network,
    inst: MulticastInstance,
    model: EnergyModel | None = None,
    cfg: SolverConfig = SolverConfig(),
    extended: ExtendedGraph | None = None,
) -> MulticastPlan:
    """Approximate minimum-energy multicast tree plus feasible schedule.

    ``model`` is accepted for interface symmetry only; construction never
    reads it.  Pass a prebuilt ``extended`` graph to skip rebuilding it.
    """
    inst.check_against(net)
    if len(inst.terminals) == 1:
        return trivial_plan(inst.source)
    if not terminals_connected(net, inst.terminals):
        raise InfeasibleInstanceError("terminals are not in one connected component")
    g = extended if extended is not None else build_extended_graph(net)
    sb = find_msb(g, inst.terminals, cfg)
    mapping = map_bridge_to_tree(sb, g, inst.terminals, root=inst.source)
    return plan_from_mapping(mapping, net, inst.terminals, refine=cfg.refine)
