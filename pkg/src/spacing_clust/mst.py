"""
Minimum spanning tree primitives shared by single-linkage and the
spacing-graph criteria.

Edges are compared by (weight, smaller endpoint, larger endpoint), a strict
total order, so the tree is unique even when weights tie.
"""

from typing import Callable, Tuple

import numpy as np


class UnionFind:
    """Disjoint sets over 0..n−1 with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return int(root)

    def union(self, a: int, b: int) -> int:
        """Join the sets of a and b (which must differ); return the new root."""
        ra, rb = self.find(a), self.find(b)
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def roots(self) -> np.ndarray:
        return np.array([self.find(x) for x in range(self.parent.size)], dtype=np.int64)


def prim_tree(n: int, row: Callable[[int], np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Dense Prim's algorithm over a complete graph given by rows.

    Args:
        n: Vertex count (≥ 2)
        row: row(u) returns the weights from u to every vertex

    Returns:
        (lo, hi, w) arrays of the n−1 tree edges, lo < hi, in the order
        Prim added them
    """
    idx = np.arange(n, dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    best_w = np.full(n, np.inf)
    best_src = np.full(n, -1, dtype=np.int64)

    edge_lo = np.empty(n - 1, dtype=np.int64)
    edge_hi = np.empty(n - 1, dtype=np.int64)
    edge_w = np.empty(n - 1, dtype=np.float64)

    u = 0
    in_tree[u] = True
    for step in range(n - 1):
        d = np.asarray(row(u), dtype=np.float64)
        lo_new, hi_new = np.minimum(u, idx), np.maximum(u, idx)
        lo_old, hi_old = np.minimum(best_src, idx), np.maximum(best_src, idx)
        lex_smaller = (lo_new < lo_old) | ((lo_new == lo_old) & (hi_new < hi_old))
        better = ~in_tree & ((d < best_w) | ((d == best_w) & lex_smaller))
        best_w[better] = d[better]
        best_src[better] = u

        masked = np.where(in_tree, np.inf, best_w)
        m = masked.min()
        ties = np.flatnonzero(masked == m)
        if ties.size > 1:
            lo = np.minimum(best_src[ties], ties)
            hi = np.maximum(best_src[ties], ties)
            v = int(ties[np.lexsort((hi, lo))[0]])
        else:
            v = int(ties[0])

        src = int(best_src[v])
        edge_lo[step], edge_hi[step], edge_w[step] = min(src, v), max(src, v), m
        in_tree[v] = True
        u = v

    return edge_lo, edge_hi, edge_w


def sort_edges(lo: np.ndarray, hi: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Order edges by (weight, lo, hi)."""
    order = np.lexsort((hi, lo, w))
    return lo[order], hi[order], w[order]
