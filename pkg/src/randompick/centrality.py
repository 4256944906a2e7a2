"""Node rankings and communities used by the baseline seed selectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import rng as _rng
from .errors import ConvergenceError
from .graph import Graph


@dataclass(frozen=True)
class ScoreVector:
    values: np.ndarray
    measure: str

    def __len__(self):
        return self.values.shape[0]

    def ranking(self, nodes=None) -> np.ndarray:
        """Nodes by decreasing score, lower id first on ties."""
        nodes = np.arange(len(self)) if nodes is None else np.asarray(nodes, dtype=np.int64)
        order = np.lexsort((nodes, -self.values[nodes]))
        return nodes[order]

    def rows(self):
        return [(v, float(s)) for v, s in enumerate(self.values)]


def pagerank(graph: Graph, damping: float = 0.85, tol: float = 1e-10, max_iter: int = 100_000) -> ScoreVector:
    """Power iteration; mass of nodes without out-edges is spread uniformly."""
    if not 0 < damping < 1:
        raise ValueError("damping must be in (0, 1)")
    n = graph.n
    deg = graph.out_degrees
    dangling = deg == 0
    inv = np.where(dangling, 0.0, 1.0 / np.maximum(deg, 1))
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        flow = np.bincount(graph.indices, weights=np.repeat(x * inv, deg), minlength=n)
        new = damping * (flow + x[dangling].sum() / n) + (1.0 - damping) / n
        new /= new.sum()
        change = np.abs(new - x).sum()
        x = new
        if change < tol:
            return ScoreVector(x, "pagerank")
    raise ConvergenceError(f"pagerank did not converge in {max_iter} iterations")


def closeness(graph: Graph) -> ScoreVector:
    """(r-1)^2 / ((n-1) * sum of distances) over the r nodes v reaches; 0 if none."""
    reach, total, _ = _kernels.all_sources_distance_summary(graph.indptr, graph.indices)
    n = graph.n
    scores = np.zeros(n)
    ok = total > 0
    scores[ok] = (reach[ok] - 1.0) ** 2 / ((n - 1.0) * total[ok])
    return ScoreVector(scores, "closeness")


def betweenness(graph: Graph) -> ScoreVector:
    """Unnormalised shortest-path betweenness; unordered pairs on undirected graphs."""
    bc = _kernels.brandes(graph.indptr, graph.indices)
    if graph.undirected:
        bc = bc / 2.0
    return ScoreVector(bc, "betweenness")


def degree_scores(graph: Graph, direction: str = "out") -> ScoreVector:
    if direction == "out":
        return ScoreVector(graph.out_degrees.astype(np.float64), "outdegree")
    if direction == "in":
        return ScoreVector(graph.in_degrees.astype(np.float64), "indegree")
    raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")


# --- communities -----------------------------------------------------------------

def _undirected_lists(graph: Graph, nodes=None) -> list[np.ndarray]:
    rp, ri = graph.reverse
    keep = None
    if nodes is not None:
        keep = np.zeros(graph.n, dtype=bool)
        keep[nodes] = True
    out = []
    for v in (range(graph.n) if nodes is None else nodes):
        nb = np.union1d(graph.indices[graph.indptr[v]:graph.indptr[v + 1]], ri[rp[v]:rp[v + 1]])
        if keep is not None:
            nb = nb[keep[nb]]
        out.append(nb)
    return out


def _propagate(nbrs: list[np.ndarray], gen: np.random.Generator, max_sweeps: int = 1000) -> np.ndarray:
    """Asynchronous label propagation on local ids; returns raw labels."""
    n = len(nbrs)
    labels = np.arange(n)
    for _ in range(max_sweeps):
        changed = False
        for v in gen.permutation(n).tolist():
            nb = nbrs[v]
            if nb.size == 0:
                continue
            vals, counts = np.unique(labels[nb], return_counts=True)
            tied = vals[counts == counts.max()]
            if labels[v] in tied:
                continue
            labels[v] = tied[0]
            changed = True
        if not changed:
            break
    return labels


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Relabel so community ids follow the order of their smallest member."""
    _, first = np.unique(labels, return_index=True)
    remap = np.empty(labels.max() + 1, dtype=np.int64)
    remap[labels[np.sort(first)]] = np.arange(first.size)
    return remap[labels]


def label_propagation_communities(graph: Graph, seed: int, min_communities: int = 1) -> np.ndarray:
    """Community id per node, with at least ``min_communities`` communities.

    Label propagation ignores edge direction. A node keeps its label when it
    is among the most frequent neighbour labels, otherwise it takes the
    smallest of them. Nodes are visited in a fresh seeded random order each
    sweep until no label changes. On a shortfall the largest community is
    re-partitioned by propagation restricted to it; if that yields a single
    community, its highest-id node is split off as a singleton.
    """
    n = graph.n
    if min_communities > n:
        raise ValueError(f"cannot form {min_communities} communities from {n} nodes")
    nbrs = _undirected_lists(graph)
    labels = _canonical(_propagate(nbrs, _rng.generator(seed, 0, 0)))
    attempt = 0
    while labels.max() + 1 < min_communities:
        attempt += 1
        sizes = np.bincount(labels)
        big = int(np.argmax(sizes))
        members = np.flatnonzero(labels == big)
        local = {v: i for i, v in enumerate(members.tolist())}
        sub = [np.array([local[u] for u in nb.tolist() if u in local], dtype=np.int64)
               for nb in _undirected_lists(graph, members)]
        sublabels = _canonical(_propagate(sub, _rng.generator(seed, 0, attempt)))
        fresh = labels.max() + 1
        if sublabels.max() > 0:
            labels[members] = np.where(sublabels == 0, big, fresh + sublabels - 1)
        else:
            labels[members[-1]] = fresh
        labels = _canonical(labels)
    return labels
