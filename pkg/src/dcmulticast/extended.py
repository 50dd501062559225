"""The extended graph: nuclear nodes plus one satellite per candidate transmit slot.

For each node ``u`` a satellite ``λ(u, i)`` exists for every slot ``i`` in
which at least one neighbour of ``u`` is awake.  Satellites of one node form
a clique with it; across an edge ``(u, v)`` a satellite ``λ(u, i)`` touches
``v`` exactly when ``i`` is one of ``v``'s active slots.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .graphs import IndexedGraph
from .model import Network

__all__ = [
    "ExtNode",
    "ExtendedGraph",
    "build_extended_graph",
    "satellite_coverage",
    "induced_satellite_subgraph",
]


class ExtNode(NamedTuple):
    """Extended-graph node id: ``slot == 0`` marks the nuclear node itself."""

    node: int
    slot: int = 0

    @property
    def is_satellite(self) -> bool:
        return self.slot > 0

    def __str__(self):
        return f"λ({self.node},{self.slot})" if self.slot else str(self.node)


class ExtendedGraph:
    """Immutable extended graph over a base :class:`Network`.

    ``graph`` is the flat indexed view (CSR adjacency) used by the
    shortest-path and Steiner routines; ``ids`` lists :class:`ExtNode` in
    index order, which is sorted by ``(node, slot)``.
    """

    def __init__(self, base: Network, psi: dict[int, tuple[int, ...]], graph: IndexedGraph):
        self.base = base
        self.psi = psi
        self.graph = graph
        self.ids: tuple[ExtNode, ...] = graph.labels
        self.node_of = np.fromiter((x.node for x in self.ids), dtype=np.int64, count=len(self.ids))
        self.slot_of = np.fromiter((x.slot for x in self.ids), dtype=np.int64, count=len(self.ids))
        self._satellite_graph: IndexedGraph | None = None

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    @property
    def satellites(self) -> list[ExtNode]:
        return [x for x in self.ids if x.slot]

    def index(self, x: ExtNode) -> int:
        return self.graph.index[x]

    def __contains__(self, x) -> bool:
        return x in self.graph.index

    def neighbors(self, x: ExtNode) -> list[ExtNode]:
        return self.graph.neighbors(x)

    def adjacent(self, x: ExtNode, y: ExtNode) -> bool:
        return self.graph.has_edge(x, y)

    def nuclear_neighbors(self, x: ExtNode) -> frozenset[int]:
        nbr = self.graph.neighbor_indices(self.graph.index[x])
        return frozenset(int(u) for u in self.node_of[nbr[self.slot_of[nbr] == 0]])

    def satellite_neighbors(self, u: int) -> list[ExtNode]:
        """Satellites adjacent to nuclear node ``u`` (the ones that can cover it)."""
        nbr = self.graph.neighbor_indices(self.graph.index[ExtNode(u)])
        return [self.ids[j] for j in nbr]

    def edges(self) -> list[tuple[ExtNode, ExtNode]]:
        return self.graph.edges()

    def dump(self) -> str:
        """Deterministic edge list, one ``a -- b`` line per edge."""
        return "".join(f"{a} -- {b}\n" for a, b in self.edges())

    def satellite_graph(self) -> IndexedGraph:
        if self._satellite_graph is None:
            self._satellite_graph = induced_satellite_subgraph(self)
        return self._satellite_graph


def build_extended_graph(net: Network) -> ExtendedGraph:
    psi: dict[int, tuple[int, ...]] = {}
    for u in net.nodes:
        slots: set[int] = set()
        for v in net.neighbors(u):
            slots |= net.active(v)
        psi[u] = tuple(sorted(slots))

    ids: list[ExtNode] = []
    sat_index: dict[int, np.ndarray] = {}
    nuc_index: dict[int, int] = {}
    for u in net.nodes:
        nuc_index[u] = len(ids)
        ids.append(ExtNode(u))
        lookup = np.full(net.K + 1, -1, dtype=np.int64)
        for i in psi[u]:
            lookup[i] = len(ids)
            ids.append(ExtNode(u, i))
        sat_index[u] = lookup

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    # clique over Psi(u) + {u}
    for u in net.nodes:
        k = len(psi[u]) + 1
        if k > 1:
            a, b = np.triu_indices(k, 1)
            rows.append(a + nuc_index[u])
            cols.append(b + nuc_index[u])
    # cross edges for (u, v): λ(u,i)-λ(v,j), λ(u,i)-v, u-λ(v,j) for i in Γ(v), j in Γ(u)
    gamma = {u: np.array(sorted(net.active(u)), dtype=np.int64) for u in net.nodes}
    for u, v in sorted(net.edges):
        iu = sat_index[u][gamma[v]]
        jv = sat_index[v][gamma[u]]
        rows.append(np.repeat(iu, len(jv)))
        cols.append(np.tile(jv, len(iu)))
        rows.append(iu)
        cols.append(np.full(len(iu), nuc_index[v]))
        rows.append(np.full(len(jv), nuc_index[u]))
        cols.append(jv)
    r = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    c = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    graph = IndexedGraph.from_index_pairs(ids, r, c)
    return ExtendedGraph(net, psi, graph)


def satellite_coverage(g: ExtendedGraph, w: ExtNode) -> frozenset[int]:
    """Nuclear neighbours of satellite ``w``: the base nodes it can reach."""
    if not w.is_satellite:
        raise ValueError(f"{w} is a nuclear node, not a satellite")
    return g.nuclear_neighbors(w)


def induced_satellite_subgraph(g: ExtendedGraph) -> IndexedGraph:
    """Subgraph induced by the satellites (unit weights)."""
    keep = np.flatnonzero(g.slot_of > 0)
    sub = g.graph.adj[keep][:, keep].tocsr()
    sub.sort_indices()
    return IndexedGraph([g.ids[k] for k in keep], sub)
