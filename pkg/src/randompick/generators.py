"""Synthetic graphs: preferential attachment and the extremal constructions."""

from __future__ import annotations

import math
from enum import Enum
from typing import Sequence

import numpy as np

from . import rng as _rng
from .graph import Graph, build_graph
from .state import ColorState


def generate_ba(n: int, m_attach: int, seed: int) -> Graph:
    """Undirected Barabási–Albert graph with exactly ``m_attach * (n - m_attach)`` edges.

    Nodes ``0..m_attach-1`` start without edges; node ``m_attach`` links to all
    of them, and every later node links to ``m_attach`` distinct existing
    nodes drawn with probability proportional to degree.
    """
    if m_attach < 1 or n <= m_attach:
        raise ValueError(f"need n > m_attach >= 1, got n={n}, m_attach={m_attach}")
    gen = _rng.generator(seed)
    edges = []
    # one entry per edge endpoint, so uniform draws are degree-proportional
    pool = np.empty(2 * m_attach * (n - m_attach), dtype=np.int64)
    size = 0
    targets = list(range(m_attach))
    for source in range(m_attach, n):
        edges.extend((source, t) for t in targets)
        pool[size:size + m_attach] = targets
        pool[size + m_attach:size + 2 * m_attach] = source
        size += 2 * m_attach
        chosen: list[int] = []
        while len(chosen) < m_attach:
            for x in pool[gen.integers(0, size, size=2 * m_attach)].tolist():
                if x not in chosen and len(chosen) < m_attach:
                    chosen.append(x)
        targets = sorted(chosen)
    return build_graph(edges, n, undirected=True)


class ConstructionKind(str, Enum):
    STAR = "star"
    BIPARTITE_TIGHTNESS = "bipartite"
    PATH_BACKEDGES = "pathback"
    M_TIGHTNESS = "mtight"


def star(n: int, seed: int = 0) -> tuple[Graph, ColorState]:
    """Undirected star, centre 0; ``n//2 - 1`` randomly chosen leaves are blue."""
    if n < 2:
        raise ValueError("star needs n >= 2")
    g = build_graph([(0, i) for i in range(1, n)], n, undirected=True)
    blue = _rng.generator(seed).choice(np.arange(1, n), size=n // 2 - 1, replace=False)
    return g, ColorState.from_sets(n, blue=sorted(blue.tolist()))


def bipartite_tightness(n: int) -> tuple[Graph, ColorState]:
    """Nodes ``0..n/2-1`` (V1) point to every node of V2 ``n/2..n-2`` and to ``v = n-1``.

    Only ``v`` is coloured (red).
    """
    if n < 4 or n % 2:
        raise ValueError("bipartite tightness needs an even n >= 4")
    half = n // 2
    edges = [(a, b) for a in range(half) for b in range(half, n)]
    return build_graph(edges, n), ColorState.from_sets(n, red=[n - 1])


def path_backedges(n: int) -> tuple[Graph, ColorState]:
    """Path 0->1->...->n-1 where every node also points to all earlier nodes."""
    if n < 2:
        raise ValueError("path construction needs n >= 2")
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(i, j) for i in range(1, n) for j in range(i)]
    return build_graph(edges, n), ColorState.uncolored(n)


def m_tightness(n: int) -> tuple[Graph, ColorState]:
    """Path w_0 <- w_1 <- ... <- w_{n/2} (nodes 0..n/2) plus W' (n/2+1..n-1).

    Every w_i points to all of W'; only w_0 is coloured (red).
    """
    if n < 4 or n % 2:
        raise ValueError("m-bound tightness needs an even n >= 4")
    half = n // 2
    edges = [(i, i - 1) for i in range(1, half + 1)]
    edges += [(i, w) for i in range(half + 1) for w in range(half + 1, n)]
    return build_graph(edges, n), ColorState.from_sets(n, red=[0])


def generate_construction(kind: ConstructionKind | str, n: int, seed: int = 0) -> tuple[Graph, ColorState]:
    kind = ConstructionKind(kind)
    if kind is ConstructionKind.STAR:
        return star(n, seed)
    if kind is ConstructionKind.BIPARTITE_TIGHTNESS:
        return bipartite_tightness(n)
    if kind is ConstructionKind.PATH_BACKEDGES:
        return path_backedges(n)
    return m_tightness(n)


def m_tightness_chain(n: int) -> list[int]:
    """The chain w_0..w_{n/2} of :func:`m_tightness`."""
    return list(range(n // 2 + 1))


def max_coverage_transform(subsets: Sequence[set], h: int, k: int, eps: float) -> tuple[Graph, int]:
    """Maximum Coverage instance -> adoption-maximisation graph with budget ``k``.

    Elements are ``0..h-1``. Node layout: subset nodes ``0..l-1``, element
    nodes ``l..l+h-1``, then ``ceil(1/eps) - 1`` leaves per element in element
    order. Element node o_i points to subset node s_j iff i is in S_j; each
    leaf points to its element node. The state is all-uncoloured.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    l = len(subsets)
    covered = set().union(*subsets) if subsets else set()
    for s in subsets:
        if any(not 0 <= e < h for e in s):
            raise ValueError("subset element out of range")
    if covered != set(range(h)):
        raise ValueError("every element must appear in at least one subset")
    leaves = math.ceil(1 / eps) - 1
    edges = [(l + i, j) for j, s in enumerate(subsets) for i in s]
    nxt = l + h
    for i in range(h):
        for _ in range(leaves):
            edges.append((nxt, l + i))
            nxt += 1
    return build_graph(edges, nxt), k
