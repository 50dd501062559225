"""Duty-cycle-oblivious multicast trees scheduled with greedy hitting sets.

These are the comparison points for the planner: the trees are built as
if every node were always awake, and only afterwards does each forwarder
pick transmit slots covering its children.
"""

from __future__ import annotations

import enum
import heapq
from collections import deque

from .graphs import IndexedGraph
from .model import (
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    MulticastTree,
    Network,
    greedy_hitting_set,
    tree_from_edges,
    tree_views,
)
from .solver import SolverConfig
from .steiner import steiner_tree_approx

__all__ = ["BaselineKind", "spt_tree", "amst_tree", "mnt_tree", "schedule_tree", "run_baseline"]


class BaselineKind(str, enum.Enum):
    SPT = "SPT"
    AMST = "AMST"
    MNT = "MNT"


def _bfs_dist(net: Network, s: int) -> dict[int, int]:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in net.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _require_reachable(reached, terminals) -> None:
    missing = sorted(set(terminals) - set(reached))
    if missing:
        raise InfeasibleInstanceError(f"terminals unreachable from the source: {missing}")


def spt_tree(net: Network, inst: MulticastInstance) -> MulticastTree:
    """Union of hop-shortest paths from the source; parent = smallest id one hop closer."""
    inst.check_against(net)
    dist = _bfs_dist(net, inst.source)
    _require_reachable(dist, inst.terminals)
    parent: dict[int, int] = {}
    for m in sorted(inst.terminals):
        u = m
        while u != inst.source and u not in parent:
            p = min(w for w in net.neighbors(u) if dist.get(w) == dist[u] - 1)
            parent[u] = p
            u = p
    return MulticastTree(inst.source, parent)


def amst_tree(
    net: Network, inst: MulticastInstance, cfg: SolverConfig = SolverConfig()
) -> MulticastTree:
    """Approximate Steiner tree over the terminals (unit hop weights), rooted at the source."""
    inst.check_against(net)
    g = IndexedGraph.from_edges(net.nodes, net.edges)
    st = steiner_tree_approx(g, inst.terminals, cfg.steiner_algorithm)
    return tree_from_edges(inst.source, st.edges)


def mnt_tree(net: Network, inst: MulticastInstance) -> MulticastTree:
    """Grow a tree that keeps the number of forwarding nodes small.

    Each round runs a node-weighted shortest-path search out of the current
    tree, where the cost of a path is the number of nodes that would newly
    become forwarders: intermediate hops always count, the attachment point
    counts unless it already forwards.  The uncovered terminal with the
    cheapest path (then fewest hops, then smallest id) is attached, and the
    loop repeats until every terminal is in the tree.
    """
    inst.check_against(net)
    _require_reachable(_bfs_dist(net, inst.source), inst.terminals)
    s = inst.source
    parent: dict[int, int] = {}
    in_tree = {s}
    forwarders: set[int] = set()
    uncovered = set(inst.terminals) - {s}
    while uncovered:
        label: dict[int, tuple[int, int]] = {}
        prev: dict[int, int] = {}
        heap = []
        for t in in_tree:
            label[t] = (0 if t in forwarders else 1, 0)
            heap.append((*label[t], t))
        heapq.heapify(heap)
        best = None
        done = set()
        while heap:
            cost, hops, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            if best is not None and (cost, hops + 1) > best[:2]:
                break
            for y in net.neighbors(x):
                if y in in_tree:
                    continue
                if y in uncovered:
                    cand = (cost, hops + 1, y, x)
                    if best is None or cand < best:
                        best = cand
                nxt = (cost + 1, hops + 1)
                if y not in label or nxt < label[y]:
                    label[y] = nxt
                    prev[y] = x
                    heapq.heappush(heap, (*nxt, y))
        _, _, m, x = best
        path = [m, x]
        while path[-1] not in in_tree:
            path.append(prev[path[-1]])
        for child, par in zip(path, path[1:]):
            if child not in in_tree:
                parent[child] = par
        for node in path[1:]:
            forwarders.add(node)
        in_tree.update(path)
        uncovered.difference_update(path)
    return MulticastTree(s, parent)


def schedule_tree(tree: MulticastTree, net: Network) -> dict[int, frozenset[int]]:
    """Greedy hitting set over the children's active slots, per forwarder."""
    views = tree_views(tree)
    return {
        u: greedy_hitting_set([net.active(v) for v in views.child[u]], net.K)
        for u in sorted(views.nl)
    }


_BUILDERS = {
    BaselineKind.SPT: lambda net, inst, cfg: spt_tree(net, inst),
    BaselineKind.AMST: amst_tree,
    BaselineKind.MNT: lambda net, inst, cfg: mnt_tree(net, inst),
}


def run_baseline(
    kind: BaselineKind | str,
    net: Network,
    inst: MulticastInstance,
    model: EnergyModel | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> MulticastPlan:
    tree = _BUILDERS[BaselineKind(kind)](net, inst, cfg)
    return MulticastPlan(tree, schedule_tree(tree, net))
