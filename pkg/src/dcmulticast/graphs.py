"""Unit-weight undirected graphs over arbitrary sortable labels, CSR-backed."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = ["IndexedGraph", "spanning_tree_bfs"]


class IndexedGraph:
    """Simple undirected graph with unit edge weights.

    Labels are kept in sorted order and mapped to dense indices; the
    adjacency is a symmetric CSR matrix with sorted column indices so that
    every traversal is deterministic.
    """

    def __init__(self, labels: Sequence[Hashable], adj: sparse.csr_matrix):
        self.labels = tuple(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.adj = adj

    @classmethod
    def from_index_pairs(cls, labels, rows, cols) -> "IndexedGraph":
        n = len(labels)
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        keep = rows != cols
        rows, cols = rows[keep], cols[keep]
        a = np.minimum(rows, cols)
        b = np.maximum(rows, cols)
        code = np.unique(a * n + b) if n else np.empty(0, dtype=np.int64)
        a, b = code // max(n, 1), code % max(n, 1)
        r = np.concatenate([a, b])
        c = np.concatenate([b, a])
        m = sparse.csr_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
        m.sort_indices()
        return cls(labels, m)

    @classmethod
    def from_edges(cls, labels: Iterable[Hashable], edges: Iterable[tuple]) -> "IndexedGraph":
        labels = sorted(set(labels))
        index = {lab: i for i, lab in enumerate(labels)}
        rows, cols = [], []
        for u, v in edges:
            rows.append(index[u])
            cols.append(index[v])
        return cls.from_index_pairs(labels, rows, cols)

    def __len__(self):
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return self.adj.nnz // 2

    def neighbor_indices(self, i: int) -> np.ndarray:
        return self.adj.indices[self.adj.indptr[i] : self.adj.indptr[i + 1]]

    def neighbors(self, label) -> list:
        return [self.labels[j] for j in self.neighbor_indices(self.index[label])]

    def edges(self) -> list[tuple]:
        upper = sparse.triu(self.adj, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return [(self.labels[upper.row[k]], self.labels[upper.col[k]]) for k in order]

    def has_edge(self, u, v) -> bool:
        i, j = self.index[u], self.index[v]
        row = self.neighbor_indices(i)
        k = np.searchsorted(row, j)
        return k < len(row) and row[k] == j

    def shortest_paths(self, sources: Sequence[int], min_only: bool = False):
        """Hop distances and predecessor arrays from index ``sources``."""
        return csgraph.dijkstra(
            self.adj,
            directed=True,
            indices=list(sources),
            unweighted=True,
            return_predecessors=True,
            min_only=min_only,
        )

    def components(self) -> np.ndarray:
        _, lab = csgraph.connected_components(self.adj, directed=False)
        return lab


def spanning_tree_bfs(root, adjacency: dict) -> dict:
    """Parent map of a BFS tree over a dict adjacency, neighbours in sorted order."""
    parent = {}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(adjacency.get(u, ())):
            if v not in seen:
                seen.add(v)
                parent[v] = u
                queue.append(v)
    return parent
