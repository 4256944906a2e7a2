import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randompick import exact, generators
from randompick.graph import (bfs_distances, build_graph, diameter, eventually_colorable,
                              s_out_neighborhood_size)
from randompick.state import ColorState

from _util import random_digraph, random_state


def _bfs_oracle(n, edges, s):
    adj = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
    dist = {s: 0}
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def test_build_examples():
    g = build_graph([], 3)
    assert g.n == 3 and g.m == 0
    assert build_graph([(0, 1), (1, 2), (0, 1)], 3).m == 2
    u = build_graph([(0, 1)], 2, undirected=True)
    assert u.m == 2 and u.has_edge(0, 1) and u.has_edge(1, 0)


def test_self_loops_dropped_and_errors():
    g = build_graph([(0, 0), (0, 1), (1, 1)], 2)
    assert g.m == 1
    with pytest.raises(ValueError):
        build_graph([(0, 3)], 3)
    with pytest.raises(ValueError):
        build_graph([], 0)
    with pytest.raises(IndexError):
        g.out_neighbors(5)


edge_lists = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=30)))


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_rebuild_is_identity(case):
    n, edges = case
    g = build_graph(edges, n)
    again = build_graph([tuple(e) for e in g.edges().tolist()], n)
    assert again == g
    assert np.array_equal(again.indptr, g.indptr) and np.array_equal(again.indices, g.indices)


def test_degrees_and_neighborhoods():
    g, _ = generators.star(7, seed=1)
    assert g.degree(0, "out") == 6
    p = build_graph([(0, 1), (1, 2)], 3)
    assert p.degree(1, "in") == 1 and p.degree(1, "out") == 1
    assert p.neighborhood(2, "in").tolist() == [1]
    b, _ = generators.bipartite_tightness(8)
    assert all(b.degree(v) == 4 for v in range(4))


@pytest.mark.parametrize("L", range(1, 21))
def test_path_diameter(L):
    edges = [(i, i + 1) for i in range(L)]
    g = build_graph(edges, L + 1)
    brute = max(max(_bfs_oracle(L + 1, edges, s).values()) for s in range(L + 1))
    assert diameter(g) == L == brute


def test_diameter_examples():
    assert diameter(build_graph([(0, 1), (1, 2)], 3)) == 2
    assert diameter(build_graph([], 2)) == 0
    assert generators.bipartite_tightness(64)[0].diameter == 1


def test_diameter_matches_bfs_oracle_on_random_graphs():
    gen = np.random.default_rng(5)
    for _ in range(50):
        n = int(gen.integers(1, 12))
        g = random_digraph(gen, n, 0.25)
        edges = [tuple(e) for e in g.edges().tolist()]
        brute = max(max(_bfs_oracle(n, edges, s).values()) for s in range(n))
        assert g.diameter == brute
        for s in range(n):
            d = bfs_distances(g, s)
            oracle = _bfs_oracle(n, edges, s)
            assert all(d[v] == oracle.get(v, -1) for v in range(n))


def test_s_out_neighborhood():
    p = build_graph([(0, 1), (1, 2)], 3)
    assert s_out_neighborhood_size(p, 1, 0) == 1
    assert s_out_neighborhood_size(p, 0, 1) == 2
    assert s_out_neighborhood_size(p, 0, 5) == 3


def test_eventually_colorable_examples():
    g = build_graph([(0, 1)], 2)
    assert eventually_colorable(g, ColorState.from_sets(2, red=[0, 1])) == set()
    assert eventually_colorable(g, ColorState.from_sets(2, red=[1])) == {0}
    assert eventually_colorable(build_graph([(1, 0)], 2), ColorState.from_sets(2, red=[1])) == set()


def test_eventually_colorable_matches_transition_support():
    gen = np.random.default_rng(17)
    for _ in range(40):
        n = int(gen.integers(1, 7))
        g = random_digraph(gen, n, 0.3)
        s = random_state(gen, n)
        model = exact.markov_model(g, s)
        ever = set()
        for code in model.states.tolist():
            ever |= set(np.flatnonzero(model.index.digits(code) != 0).tolist())
        assert ever - set(s.colored_nodes().tolist()) == eventually_colorable(g, s)


@pytest.mark.parametrize("n,edges", [(300, 891), (500, 1491)])
def test_ba_edge_counts(n, edges):
    g = generators.generate_ba(n, 3, seed=n)
    assert g.undirected and g.m == 2 * edges
    assert g == generators.generate_ba(n, 3, seed=n)
    assert g != generators.generate_ba(n, 3, seed=n + 1)


def test_ba_is_connected_and_simple():
    g = generators.generate_ba(300, 3, seed=1)
    assert np.all(bfs_distances(g, 0) >= 0)
    assert np.all(g.out_degrees[3:] >= 3) and np.all(g.out_degrees[:3] >= 1)


def test_ba_smallest_case():
    # edge count m_attach * (n - m_attach): node 3 links to the three seed nodes
    g = generators.generate_ba(4, 3, seed=0)
    assert g.m == 2 * 3
    assert g.out_neighbors(3).tolist() == [0, 1, 2]
    with pytest.raises(ValueError):
        generators.generate_ba(3, 3, seed=0)


def test_construction_metrics():
    g, s = generators.bipartite_tightness(8)
    assert (g.max_out_degree, g.diameter, g.m) == (4, 1, 16)
    assert s.red().tolist() == [7] and s.uncolored_count == 7
    assert g.in_degrees[7] == 4

    g, s = generators.m_tightness(8)
    assert [g.degree(v) for v in range(1, 5)] == [4, 4, 4, 4]
    assert g.degree(0) == 3
    assert g.m == 4 + 5 * 3
    assert s.red().tolist() == [0]

    g, s = generators.star(7, seed=3)
    assert s.blue_count == 2 and 0 not in s.blue().tolist() and s.red_count == 0
    assert g.diameter == 2 and g.max_out_degree == 6

    g, s = generators.path_backedges(6)
    assert g.m == 5 + 15 and g.diameter == 5 and s.uncolored_count == 6
    assert g.out_neighbors(3).tolist() == [0, 1, 2, 4]

    for kind, n in (("star", 9), ("bipartite", 10), ("pathback", 5), ("mtight", 12)):
        g, s = generators.generate_construction(kind, n, seed=2)
        assert g.n == n == s.n
    with pytest.raises(ValueError):
        generators.bipartite_tightness(7)
    with pytest.raises(ValueError):
        generators.m_tightness(2)


def test_max_coverage_transform_examples():
    g, k = generators.max_coverage_transform([{0, 1}, {1, 2}], 3, 2, 1.0)
    assert (g.n, g.m, k) == (5, 4, 2)
    assert g.has_edge(2, 0) and g.has_edge(3, 0) and g.has_edge(3, 1) and g.has_edge(4, 1)
    g, _ = generators.max_coverage_transform([{0, 1}, {1, 2}], 3, 1, 0.5)
    assert g.n == 8 and g.m == 7
    g, _ = generators.max_coverage_transform([{0}], 1, 1, 1.0)
    assert g.n == 2 and g.edges().tolist() == [[1, 0]]
    with pytest.raises(ValueError):
        generators.max_coverage_transform([{0}], 2, 1, 1.0)
    with pytest.raises(ValueError):
        generators.max_coverage_transform([{0}], 1, 1, 0.0)


def test_leaves_per_element():
    for eps in (1.0, 0.5, 0.3, 0.1):
        g, _ = generators.max_coverage_transform([{0, 1}], 2, 1, eps)
        assert g.n == 1 + 2 + 2 * (math.ceil(1 / eps) - 1)


def test_graph_equality_and_hash():
    a = build_graph([(0, 1)], 2)
    b = build_graph([(0, 1)], 2)
    assert a == b and hash(a) == hash(b)
    assert a != build_graph([(0, 1), (1, 0)], 2)
