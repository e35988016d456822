"""Filtered clique complexes of node-weighted graphs.

A graph with real node weights induces a nested family of simplicial
complexes: every clique enters at the maximum weight of its vertices
(the lower-star convention), so raising the threshold grows the complex
monotonically. This module builds the clique expansion up to a dimension
cap and orders it into a valid filtration.

Simplices are plain tuples of node identifiers in strictly ascending
order; node identifiers must be mutually comparable (all strings or all
ints).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

Simplex = tuple

__all__ = [
    "WeightedGraph",
    "FilteredComplex",
    "clique_expand",
    "lower_star_filtration",
    "sublevel_complex",
]


class WeightedGraph:
    """Undirected graph with a real weight on every node.

    Parameters
    ----------
    node_weights : mapping node -> float
        Total on the node set; defines the filtration function.
    edges : iterable of node pairs
        Unordered, no self-loops, no duplicates.
    """

    def __init__(self, node_weights: Mapping, edges: Iterable = ()):
        self.node_weight = dict(node_weights)
        self.nodes = tuple(sorted(self.node_weight))
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on node {u!r}")
            if u not in self.node_weight or v not in self.node_weight:
                raise ValueError(f"edge ({u!r}, {v!r}) has an endpoint outside the node set")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise ValueError(f"duplicate edge {e!r}")
            norm.add(e)
        self.edges = frozenset(norm)
        for w in self.node_weight.values():
            if not np.isfinite(w):
                raise ValueError("node weights must be finite")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def adjacency(self) -> dict:
        """Neighbor sets keyed by node."""
        adj = {v: set() for v in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def __repr__(self):
        return f"WeightedGraph(n_nodes={len(self.nodes)}, n_edges={len(self.edges)})"


class FilteredComplex:
    """Simplices in filtration order with their entry values.

    ``simplices[i]`` enters the complex at ``values[i]``; the order is
    non-decreasing in value and every face appears before its cofaces.
    ``max_dimension`` is the expansion cap, not necessarily attained.
    """

    def __init__(self, simplices: list, values: np.ndarray, max_dimension: int):
        self.simplices = list(simplices)
        self.values = np.asarray(values, dtype=float)
        self.max_dimension = int(max_dimension)
        if len(self.simplices) != len(self.values):
            raise ValueError("simplices and values must have equal length")
        self._index = {s: i for i, s in enumerate(self.simplices)}

    def __len__(self):
        return len(self.simplices)

    def index_of(self, simplex) -> int:
        return self._index[simplex]

    def validate(self) -> None:
        """Raise ValueError unless faces precede cofaces and values are sorted."""
        if np.any(np.diff(self.values) < 0):
            raise ValueError("filtration values are not non-decreasing")
        for i, s in enumerate(self.simplices):
            if len(s) == 1:
                continue
            for face in combinations(s, len(s) - 1):
                j = self._index.get(face)
                if j is None or j >= i:
                    raise ValueError(f"face {face!r} missing or after coface {s!r}")

    def __repr__(self):
        return f"FilteredComplex(n={len(self)}, max_dimension={self.max_dimension})"


def clique_expand(graph: WeightedGraph, max_dim: int) -> list:
    """Enumerate all cliques of ``graph`` up to dimension ``max_dim``.

    Returns every vertex tuple (sorted ascending) whose induced subgraph
    is complete, with ``len(tuple) <= max_dim + 1``. Exact enumeration by
    incremental neighbor intersection: a k-clique is extended only by
    common neighbors larger than its last vertex, so each clique is
    produced exactly once.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    adj = graph.adjacency()
    out = [(v,) for v in graph.nodes]
    frontier = [((v,), adj[v]) for v in graph.nodes]
    for _ in range(max_dim):
        nxt = []
        for clique, common in frontier:
            last = clique[-1]
            for v in sorted(common):
                if v > last:
                    ext = clique + (v,)
                    out.append(ext)
                    nxt.append((ext, common & adj[v]))
        if not nxt:
            break
        frontier = nxt
    return out


def lower_star_filtration(graph: WeightedGraph, max_dim: int) -> FilteredComplex:
    """Clique-expand ``graph`` and order simplices by lower-star value.

    Each simplex enters at the maximum weight of its vertices. Ties are
    broken by (dimension, lexicographic vertex tuple), which guarantees
    faces precede cofaces and makes the order reproducible.
    """
    w = graph.node_weight
    simplices = clique_expand(graph, max_dim)
    keyed = sorted((max(w[v] for v in s), len(s), s) for s in simplices)
    ordered = [s for _, _, s in keyed]
    values = np.array([k[0] for k in keyed], dtype=float)
    return FilteredComplex(ordered, values, max_dim)


def sublevel_complex(fc: FilteredComplex, t: float) -> list:
    """Simplices with filtration value at most ``t``.

    The filtration order sorts by value, so the sublevel set is a prefix
    and is automatically closed under faces.
    """
    k = int(np.searchsorted(fc.values, t, side="right"))
    return fc.simplices[:k]
