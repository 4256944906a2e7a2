"""Immutable directed graphs in CSR form, plus the distance-based metrics."""

from __future__ import annotations

import threading
from collections import deque
from typing import Iterable

import numpy as np

from . import _kernels
from .state import ColorState


class Graph:
    """Directed graph on nodes ``0..n-1``.

    Out-neighbour lists are sorted and duplicate-free, self-loops are absent.
    The reverse adjacency is built on the first in-neighbour query; the build
    is guarded by a lock so concurrent readers are safe.
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, undirected: bool = False):
        self.n = int(n)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self.undirected = bool(undirected)
        self._lock = threading.Lock()
        self._reverse = None
        self._diameter = None

    # --- adjacency -----------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.indices.shape[0])

    @property
    def out_degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def in_degrees(self) -> np.ndarray:
        return np.diff(self.reverse[0])

    @property
    def max_out_degree(self) -> int:
        return int(self.out_degrees.max()) if self.n else 0

    @property
    def reverse(self) -> tuple[np.ndarray, np.ndarray]:
        if self._reverse is None:
            with self._lock:
                if self._reverse is None:
                    self._reverse = _transpose(self.n, self.indptr, self.indices)
        return self._reverse

    def _check(self, v):
        if not 0 <= v < self.n:
            raise IndexError(f"node {v} out of range for n={self.n}")

    def out_neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        rp, ri = self.reverse
        return ri[rp[v]:rp[v + 1]]

    def neighborhood(self, v: int, direction: str = "out") -> np.ndarray:
        if direction == "out":
            return self.out_neighbors(v)
        if direction == "in":
            return self.in_neighbors(v)
        raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")

    def degree(self, v: int, direction: str = "out") -> int:
        return int(self.neighborhood(v, direction).shape[0])

    def has_edge(self, v: int, u: int) -> bool:
        nb = self.out_neighbors(v)
        i = np.searchsorted(nb, u)
        return bool(i < nb.shape[0] and nb[i] == u)

    def edges(self) -> np.ndarray:
        """(m, 2) array of (source, target) pairs in CSR order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degrees)
        return np.column_stack([src, self.indices])

    def kernel_arrays(self):
        rp, ri = self.reverse
        return self.indptr, self.indices, rp, ri

    # --- metrics ---------------------------------------------------------

    @property
    def diameter(self) -> int:
        if self._diameter is None:
            with self._lock:
                if self._diameter is None:
                    self._diameter = _diameter(self)
        return self._diameter

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.undirected == other.undirected
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.n, self.indices.tobytes(), self.indptr.tobytes()))

    def __repr__(self):
        kind = "undirected" if self.undirected else "directed"
        return f"Graph(n={self.n}, m={self.m}, {kind})"


def _transpose(n, indptr, indices):
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    order = np.lexsort((src, indices))
    rindices = np.ascontiguousarray(src[order])
    counts = np.bincount(indices, minlength=n)
    rindptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=rindptr[1:])
    rindptr.setflags(write=False)
    rindices.setflags(write=False)
    return rindptr, rindices


def build_graph(edge_pairs: Iterable[tuple[int, int]], n: int, undirected: bool = False) -> Graph:
    """Build a :class:`Graph` from (source, target) pairs.

    Duplicate pairs are merged and self-loops dropped. With ``undirected``
    every edge is mirrored.
    """
    if n <= 0:
        raise ValueError("graph must have at least one node")
    pairs = np.asarray(list(edge_pairs) if not isinstance(edge_pairs, np.ndarray) else edge_pairs,
                       dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
        raise ValueError(f"edge endpoint out of range for n={n}")
    if undirected:
        pairs = np.concatenate([pairs, pairs[:, ::-1]])
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    if pairs.size:
        pairs = np.unique(pairs, axis=0)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(pairs[:, 0], minlength=n), out=indptr[1:])
    g = Graph(n, indptr, pairs[:, 1].copy(), undirected=undirected)
    if not undirected and pairs.size:
        # flag graphs that happen to be symmetric
        rev = pairs[:, ::-1]
        rev = rev[np.lexsort((rev[:, 1], rev[:, 0]))]
        g.undirected = bool(np.array_equal(rev, pairs))
    return g


def bfs_distances(graph: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source`` along out-edges, -1 where unreachable."""
    graph._check(source)
    dist = np.empty(graph.n, dtype=np.int64)
    queue = np.empty(graph.n, dtype=np.int64)
    _kernels.bfs(graph.indptr, graph.indices, source, dist, queue)
    return dist


def _diameter(graph: Graph) -> int:
    _, _, ecc = _kernels.all_sources_distance_summary(graph.indptr, graph.indices)
    return int(ecc.max()) if graph.n else 0


def diameter(graph: Graph) -> int:
    """Longest shortest-path length over reachable ordered pairs; 0 if none."""
    return graph.diameter


def s_out_neighborhood_size(graph: Graph, v: int, s: int) -> int:
    """Number of nodes within distance ``s`` of ``v`` (``v`` included)."""
    if s < 0:
        raise ValueError("s must be non-negative")
    dist = bfs_distances(graph, v)
    return int(np.count_nonzero((dist >= 0) & (dist <= s)))


def eventually_colorable(graph: Graph, state: ColorState) -> set[int]:
    """Uncoloured nodes with a directed path to some coloured node."""
    if state.n != graph.n:
        raise ValueError("state size does not match graph")
    colors = state.colors
    rp, ri = graph.reverse
    seen = colors != 0
    queue = deque(np.flatnonzero(seen).tolist())
    out = set()
    while queue:
        w = queue.popleft()
        for v in ri[rp[w]:rp[w + 1]].tolist():
            if not seen[v]:
                seen[v] = True
                out.add(v)
                queue.append(v)
    return out
