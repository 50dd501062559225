"""2-approximate Steiner trees on unit-weight graphs (Kou-Markowsky-Berman, Mehlhorn)."""

from __future__ import annotations

from typing import Hashable, Iterable, NamedTuple

import numpy as np
from scipy import sparse

from .graphs import IndexedGraph, spanning_tree_bfs
from .model import InfeasibleInstanceError

__all__ = ["SteinerTree", "steiner_tree_approx", "STEINER_RATIO"]

# documented approximation ratio of both supported algorithms
STEINER_RATIO = {"kmb": 2, "mehlhorn": 2}


class SteinerTree(NamedTuple):
    nodes: frozenset
    edges: frozenset  # label pairs, each sorted


class _DSU:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[max(ra, rb)] = min(ra, rb)
        return True


def _walk(pred_row: np.ndarray, target: int) -> list[int]:
    path = [target]
    while pred_row[path[-1]] >= 0:
        path.append(int(pred_row[path[-1]]))
    return path


def _kruskal(n: int, weighted: Iterable[tuple]) -> list[tuple]:
    dsu = _DSU(n)
    out = []
    for item in sorted(weighted):
        _, a, b = item[:3]
        if dsu.union(a, b):
            out.append(item)
    return out


def _kmb_edges(g: IndexedGraph, term: list[int]) -> set[tuple[int, int]]:
    dist, pred = g.shortest_paths(term)
    t = len(term)
    closure = []
    for a in range(t):
        for b in range(a + 1, t):
            d = dist[a, term[b]]
            if not np.isfinite(d):
                raise InfeasibleInstanceError(
                    f"terminals {g.labels[term[a]]} and {g.labels[term[b]]} are disconnected"
                )
            closure.append((int(d), a, b))
    edges: set[tuple[int, int]] = set()
    for _, a, b in _kruskal(t, closure):
        path = _walk(pred[a], term[b])
        for x, y in zip(path, path[1:]):
            edges.add((min(x, y), max(x, y)))
    return edges


def _mehlhorn_edges(g: IndexedGraph, term: list[int]) -> set[tuple[int, int]]:
    dist, pred, src = g.shortest_paths(term, min_only=True)
    pos = {v: k for k, v in enumerate(term)}
    if np.any(~np.isfinite(dist[term])) or len(set(g.components()[term])) > 1:
        raise InfeasibleInstanceError("terminals lie in different components")
    upper = sparse.triu(g.adj, k=1).tocoo()
    u, v = upper.row, upper.col
    ok = (src[u] >= 0) & (src[v] >= 0) & (src[u] != src[v])
    u, v = u[ok], v[ok]
    best: dict[tuple[int, int], tuple] = {}
    for x, y in zip(u.tolist(), v.tolist()):
        a, b = pos[int(src[x])], pos[int(src[y])]
        if a > b:
            a, b, x, y = b, a, y, x
        cand = (int(dist[x] + dist[y]) + 1, x, y)
        if (a, b) not in best or cand < best[(a, b)]:
            best[(a, b)] = cand
    weighted = [(w, a, b, x, y) for (a, b), (w, x, y) in best.items()]
    edges: set[tuple[int, int]] = set()
    for _, _, _, x, y in _kruskal(len(term), weighted):
        path = _walk(pred, x)[::-1] + _walk(pred, y)
        for p, q in zip(path, path[1:]):
            edges.add((min(p, q), max(p, q)))
    return edges


def _prune(adj: dict[int, set[int]], keep: set[int]) -> None:
    leaves = [u for u, n in adj.items() if len(n) <= 1 and u not in keep]
    while leaves:
        u = leaves.pop()
        if u not in adj or u in keep:
            continue
        for v in adj.pop(u):
            adj[v].discard(u)
            if len(adj[v]) <= 1 and v not in keep:
                leaves.append(v)


def steiner_tree_approx(
    graph: IndexedGraph, terminals: Iterable[Hashable], algorithm: str = "kmb"
) -> SteinerTree:
    """Approximate minimum Steiner tree connecting ``terminals`` in ``graph``.

    Both algorithms build a terminal distance graph (the full metric closure
    for KMB, Voronoi bridge edges for Mehlhorn), take its MST, expand the MST
    edges back into shortest paths, re-span the union with a BFS tree and
    strip non-terminal leaves.  Edge count is at most twice the optimum.
    """
    if algorithm not in STEINER_RATIO:
        raise ValueError(f"unknown Steiner algorithm {algorithm!r}")
    labels = sorted(set(terminals))
    if not labels:
        raise ValueError("need at least one terminal")
    missing = [x for x in labels if x not in graph.index]
    if missing:
        raise InfeasibleInstanceError(f"terminals not in graph: {missing}")
    term = [graph.index[x] for x in labels]
    if len(term) == 1:
        return SteinerTree(frozenset(labels), frozenset())

    if algorithm == "kmb":
        union = _kmb_edges(graph, term)
    else:
        union = _mehlhorn_edges(graph, term)

    adj: dict[int, set[int]] = {}
    for x, y in union:
        adj.setdefault(x, set()).add(y)
        adj.setdefault(y, set()).add(x)
    parent = spanning_tree_bfs(term[0], adj)
    tree: dict[int, set[int]] = {term[0]: set()}
    for c, p in parent.items():
        tree.setdefault(c, set()).add(p)
        tree.setdefault(p, set()).add(c)
    _prune(tree, set(term))

    lab = graph.labels
    nodes = frozenset(lab[i] for i in tree)
    edges = frozenset(
        tuple(sorted((lab[x], lab[y]))) for x, ns in tree.items() for y in ns if x < y
    )
    return SteinerTree(nodes, edges)
