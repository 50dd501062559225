"""Exhaustive references for small instances.

Everything here is brute force on purpose: subsets are enumerated in
increasing size and lexicographic order, so the first hit is both optimal
and canonical.  Budgets guard every exponential loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .extended import ExtendedGraph, ExtNode
from .graphs import IndexedGraph
from .model import (
    BudgetExceededError,
    EnergyModel,
    InfeasibleInstanceError,
    MulticastInstance,
    MulticastPlan,
    MulticastTree,
    Network,
    tree_from_edges,
)
from .solver import SatelliteBridge

__all__ = [
    "OracleBudget",
    "exact_min_hitting_set",
    "exact_min_satellite_cover",
    "exact_steiner_edges",
    "exact_msb",
    "iter_trees_spanning",
    "xi_of_tree",
    "upsilon",
    "exact_mist_xi",
    "exact_memtcs",
    "star_reduction_instance",
    "decode_star_instance",
    "harmonic",
]


@dataclass(frozen=True)
class OracleBudget:
    max_nodes: int = 9
    max_K: int = 5
    max_subsets: int = 5_000_000

    def __post_init__(self):
        if min(self.max_nodes, self.max_K, self.max_subsets) <= 0:
            raise ValueError("budget limits must be positive")

    def check(self, net: Network) -> None:
        if len(net.nodes) > self.max_nodes:
            raise BudgetExceededError(f"|V|={len(net.nodes)} exceeds max_nodes={self.max_nodes}")
        if net.K > self.max_K:
            raise BudgetExceededError(f"K={net.K} exceeds max_K={self.max_K}")


DEFAULT_BUDGET = OracleBudget()


class _Counter:
    def __init__(self, budget: OracleBudget):
        self.left = budget.max_subsets

    def tick(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BudgetExceededError("enumeration exceeded max_subsets")


def harmonic(n: int) -> Fraction:
    """n-th harmonic number as an exact fraction."""
    if n < 1:
        raise ValueError("harmonic number needs n >= 1")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


@lru_cache(maxsize=1 << 16)
def _mhs(collection: tuple[frozenset[int], ...], max_subsets: int) -> frozenset[int]:
    universe = sorted(set().union(*collection)) if collection else []
    counter = _Counter(OracleBudget(max_subsets=max_subsets))
    for k in range(len(universe) + 1):
        for combo in combinations(universe, k):
            counter.tick()
            chosen = set(combo)
            if all(chosen & c for c in collection):
                return frozenset(combo)
    raise AssertionError("unreachable: the full universe always hits")


def exact_min_hitting_set(
    collection: Iterable[Iterable[int]], budget: OracleBudget = DEFAULT_BUDGET
) -> frozenset[int]:
    """Minimum hitting set; the lexicographically smallest among optima."""
    sets = tuple(sorted({frozenset(c) for c in collection}, key=sorted))
    if any(not c for c in sets):
        raise ValueError("collection contains an empty set")
    return _mhs(sets, budget.max_subsets)


def _bit_connected(mask: int, adj: Sequence[int]) -> bool:
    if mask == 0:
        return False
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        nbrs = adj[low.bit_length() - 1] & mask & ~seen
        seen |= nbrs
        frontier |= nbrs
    return seen == mask


def exact_min_satellite_cover(
    g: ExtendedGraph, terminals: Iterable[int], budget: OracleBudget = DEFAULT_BUDGET
) -> frozenset[ExtNode]:
    """Smallest set of satellites adjacent to every terminal (no connectivity required)."""
    budget.check(g.base)
    terms = sorted(set(terminals))
    bit = {m: 1 << k for k, m in enumerate(terms)}
    full = (1 << len(terms)) - 1
    cands = []
    for w in g.satellites:
        mask = 0
        for m in g.nuclear_neighbors(w):
            mask |= bit.get(m, 0)
        if mask:
            cands.append((w, mask))
    counter = _Counter(budget)
    for k in range(1, len(cands) + 1):
        for combo in combinations(cands, k):
            counter.tick()
            acc = 0
            for _, mask in combo:
                acc |= mask
            if acc == full:
                return frozenset(w for w, _ in combo)
    raise InfeasibleInstanceError("terminals cannot be covered by satellites")


def exact_msb(
    g: ExtendedGraph, terminals: Iterable[int], budget: OracleBudget = DEFAULT_BUDGET
) -> SatelliteBridge:
    """Minimum satellite bridge by exhaustive search over satellite subsets."""
    budget.check(g.base)
    terms = sorted(set(terminals))
    sats = g.satellites
    pos = {w: k for k, w in enumerate(sats)}
    bit = {m: 1 << k for k, m in enumerate(terms)}
    full = (1 << len(terms)) - 1
    cover = []
    adj = []
    for w in sats:
        mask = 0
        for m in g.nuclear_neighbors(w):
            mask |= bit.get(m, 0)
        cover.append(mask)
        a = 0
        for x in g.neighbors(w):
            if x.is_satellite:
                a |= 1 << pos[x]
        adj.append(a)
    reachable = 0
    for c in cover:
        reachable |= c
    if reachable != full:
        raise InfeasibleInstanceError("some terminal has no satellite neighbour")
    counter = _Counter(budget)
    for k in range(1, len(sats) + 1):
        for combo in combinations(range(len(sats)), k):
            counter.tick()
            acc = 0
            for i in combo:
                acc |= cover[i]
            if acc != full:
                continue
            mask = 0
            for i in combo:
                mask |= 1 << i
            if _bit_connected(mask, adj):
                return _bridge_from_indices(combo, sats, adj)
    raise InfeasibleInstanceError("no connected satellite set covers the terminals")


def _bridge_from_indices(combo, sats, adj) -> SatelliteBridge:
    members = set(combo)
    root = combo[0]
    seen = {root}
    order = [root]
    edges = set()
    for u in order:
        for v in combo:
            if v not in seen and adj[u] >> v & 1:
                seen.add(v)
                order.append(v)
                edges.add((sats[u], sats[v]))
    assert seen == members
    return SatelliteBridge(frozenset(sats[i] for i in combo), frozenset(edges))


def exact_steiner_edges(
    graph: IndexedGraph, terminals: Iterable, budget: OracleBudget = DEFAULT_BUDGET
) -> int:
    """Edge count of a minimum Steiner tree in a unit-weight graph."""
    terms = sorted(set(terminals))
    n = len(graph)
    idx = [graph.index[t] for t in terms]
    adj = [0] * n
    for i in range(n):
        for j in graph.neighbor_indices(i):
            adj[i] |= 1 << int(j)
    base = 0
    for i in idx:
        base |= 1 << i
    others = [i for i in range(n) if not base >> i & 1]
    counter = _Counter(budget)
    for k in range(len(others) + 1):
        for combo in combinations(others, k):
            counter.tick()
            mask = base
            for i in combo:
                mask |= 1 << i
            if _bit_connected(mask, adj):
                return len(terms) + k - 1
    raise InfeasibleInstanceError("terminals are disconnected")


def _spanning_trees(edges: list[tuple[int, int]], nodes: list[int]) -> Iterator[tuple]:
    need = len(nodes) - 1
    if need == 0:
        yield ()
        return
    pos = {u: k for k, u in enumerate(nodes)}
    m = len(edges)

    def find(parent, x):
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(i, parent, chosen):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if m - i < need - len(chosen):
            return
        u, v = edges[i]
        ru, rv = find(parent, pos[u]), find(parent, pos[v])
        if ru != rv:
            p2 = list(parent)
            p2[max(ru, rv)] = min(ru, rv)
            chosen.append(edges[i])
            yield from rec(i + 1, p2, chosen)
            chosen.pop()
        yield from rec(i + 1, parent, chosen)

    yield from rec(0, list(range(len(nodes))), [])


def iter_trees_spanning(
    net: Network, terminals: Iterable[int], budget: OracleBudget = DEFAULT_BUDGET
) -> Iterator[frozenset[tuple[int, int]]]:
    """Every subtree of G whose node set contains all ``terminals``, as edge sets.

    The single-node tree is yielded as an empty edge set when only one
    terminal is given.
    """
    budget.check(net)
    terms = sorted(set(terminals))
    others = [u for u in net.nodes if u not in set(terms)]
    counter = _Counter(budget)
    pos = {u: k for k, u in enumerate(net.nodes)}
    adj = [0] * len(net.nodes)
    for u, v in net.edges:
        adj[pos[u]] |= 1 << pos[v]
        adj[pos[v]] |= 1 << pos[u]
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            counter.tick()
            nodes = sorted(terms + list(extra))
            mask = 0
            for u in nodes:
                mask |= 1 << pos[u]
            if not _bit_connected(mask, adj):
                continue
            sub_edges = sorted((u, v) for u, v in net.edges if mask >> pos[u] & 1 and mask >> pos[v] & 1)
            for tree in _spanning_trees(sub_edges, nodes):
                counter.tick()
                yield frozenset(tree) if tree else frozenset()


def _tree_adjacency(edges: Iterable[tuple[int, int]]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return adj


def upsilon(net: Network, edges: Iterable[tuple[int, int]], u: int,
            budget: OracleBudget = DEFAULT_BUDGET) -> frozenset[int]:
    """Minimum hitting set of the active sets of ``u``'s tree neighbours."""
    nbrs = _tree_adjacency(edges).get(u, [])
    return exact_min_hitting_set([net.active(v) for v in nbrs], budget)


def xi_of_tree(net: Network, edges: Iterable[tuple[int, int]],
               budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Sum over tree nodes of degree > 1 of their neighbour minimum hitting set size."""
    adj = _tree_adjacency(edges)
    return sum(
        len(exact_min_hitting_set([net.active(v) for v in nbrs], budget))
        for u, nbrs in adj.items()
        if len(nbrs) > 1
    )


def exact_mist_xi(
    net: Network, terminals: Iterable[int], budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[int, MulticastTree]:
    """Minimum of ``xi_of_tree`` over all trees spanning the terminals, with a witness.

    The witness is rooted at the smallest terminal; ties go to the
    lexicographically smallest sorted edge list.
    """
    terms = sorted(set(terminals))
    best = None
    for edges in iter_trees_spanning(net, terms, budget):
        key = (xi_of_tree(net, edges, budget), sorted(edges))
        if best is None or key < best:
            best = key
    if best is None:
        raise InfeasibleInstanceError("no tree spans the terminals")
    return best[0], tree_from_edges(terms[0], best[1])


def exact_memtcs(
    net: Network,
    inst: MulticastInstance,
    model: EnergyModel,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> MulticastPlan:
    """Optimal plan: every spanning tree, each forwarder scheduled with an exact hitting set."""
    best = None
    for edges in iter_trees_spanning(net, inst.terminals, budget):
        tree = tree_from_edges(inst.source, edges)
        sched = {}
        children: dict[int, list[int]] = {}
        for c, p in tree.parent.items():
            children.setdefault(p, []).append(c)
        for u, cs in children.items():
            sched[u] = exact_min_hitting_set([net.active(v) for v in cs], budget)
        cost = sum(len(b) for b in sched.values()) * model.e_s + len(edges) * model.e_r
        key = (cost, sorted(edges))
        if best is None or key < best[0]:
            best = (key, tree, sched)
    if best is None:
        raise InfeasibleInstanceError("no tree spans the terminals")
    return MulticastPlan(best[1], best[2])


def star_reduction_instance(
    collection: Sequence[Iterable[int]],
) -> tuple[Network, MulticastInstance, EnergyModel]:
    """Star network encoding a minimum hitting set instance.

    Hub ``0`` is the source; leaf ``j`` (1-based) is awake exactly in the
    slots listed by the ``j``-th subset.  With e_s=1 and e_r=0 the optimal
    energy equals the minimum hitting set size.
    """
    subsets = [frozenset(c) for c in collection]
    if not subsets or any(not c for c in subsets):
        raise ValueError("need a nonempty collection of nonempty subsets")
    if min(min(c) for c in subsets) < 1:
        raise ValueError("elements must be positive slot numbers")
    K = max(max(c) for c in subsets)
    q = len(subsets)
    schedule = {0: {1}}
    schedule.update({j: subsets[j - 1] for j in range(1, q + 1)})
    net = Network(range(q + 1), [(0, j) for j in range(1, q + 1)], K, schedule)
    inst = MulticastInstance(range(q + 1), source=0)
    return net, inst, EnergyModel(1, 0)


def decode_star_instance(net: Network) -> list[frozenset[int]]:
    """Recover the subset collection from a star built by :func:`star_reduction_instance`."""
    return [net.active(j) for j in sorted(net.neighbors(0))]
