import itertools
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from randompick import exact, generators
from randompick.errors import SizeLimitError
from randompick.graph import build_graph
from randompick.state import ColorState

from _util import random_digraph, random_state


def _brute_successors(g, colors):
    """Enumerate every pick combination of the uncoloured nodes (exact fractions)."""
    unc = [v for v in range(g.n) if colors[v] == 0 and g.out_degrees[v] > 0]
    out = defaultdict(Fraction)
    opts = [g.out_neighbors(v).tolist() for v in unc]
    weight = Fraction(1, int(np.prod([len(o) for o in opts]))) if opts else Fraction(1)
    for combo in itertools.product(*opts):
        new = list(colors)
        for v, p in zip(unc, combo):
            new[v] = colors[p]
        out[tuple(new)] += weight
    return out


def _distribution_iteration(g, state, rounds=400):
    """Expected final red count and expected stabilisation time by pushing the
    whole distribution forward round by round."""
    dist = {tuple(state.colors.tolist()): 1.0}
    red = 0.0
    time = 0.0
    stable_cache = {}
    for t in range(rounds):
        nxt = defaultdict(float)
        for s, p in dist.items():
            if s not in stable_cache:
                succ = _brute_successors(g, s)
                stable_cache[s] = list(succ) == [s]
            if stable_cache[s]:
                red += p * s.count(1)
                time += p * t
                continue
            for s2, q in _brute_successors(g, s).items():
                nxt[s2] += p * float(q)
        dist = nxt
        if sum(dist.values()) < 1e-14:
            break
    return red, time


def test_transition_examples():
    g = build_graph([(0, 1), (1, 0)], 2)
    s = ColorState.from_sets(2, red=[0], blue=[1])
    assert exact.transition_distribution(g, s) == [(s, 1.0)]

    g = build_graph([(0, 1), (0, 2)], 3)
    dist = exact.transition_distribution(g, ColorState.from_sets(3, red=[1], blue=[2]))
    assert [(d.colors.tolist(), p) for d, p in dist] == [([1, 1, 2], 0.5), ([2, 1, 2], 0.5)]

    # nodes 0 and 1 each point to a red node and to an uncoloured node
    g = build_graph([(0, 2), (0, 3), (1, 2), (1, 3)], 4)
    dist = exact.transition_distribution(g, ColorState.from_sets(4, red=[2]))
    assert len(dist) == 4 and all(p == 0.25 for _, p in dist)


def test_transitions_match_brute_force():
    gen = np.random.default_rng(8)
    for _ in range(60):
        n = int(gen.integers(1, 7))
        g = random_digraph(gen, n, 0.4)
        s = random_state(gen, n)
        brute = _brute_successors(g, tuple(s.colors.tolist()))
        got = {tuple(d.colors.tolist()): p for d, p in exact.transition_distribution(g, s)}
        assert set(got) == set(brute)
        for k, p in got.items():
            assert abs(p - float(brute[k])) < 1e-12
        assert abs(sum(got.values()) - 1) < 1e-12


def test_expected_red_examples():
    g = build_graph([(0, 1), (1, 2)], 3)
    assert exact.exact_expected_red(g, ColorState.from_sets(3, red=[0, 1, 2])) == 3
    assert exact.exact_expected_red(build_graph([(0, 1)], 2), ColorState.from_sets(2, red=[1])) == 2
    g = build_graph([(0, 1), (0, 2)], 3)
    assert exact.exact_expected_red(g, ColorState.from_sets(3, red=[1], blue=[2])) == pytest.approx(1.5, abs=1e-12)


def test_expected_time_examples():
    g = build_graph([(0, 1), (0, 2)], 3)
    assert exact.exact_expected_convergence_time(g, ColorState.uncolored(3)) == 0
    assert exact.exact_expected_convergence_time(g, ColorState.from_sets(3, red=[1])) == pytest.approx(2.0, abs=1e-12)
    path = build_graph([(0, 1), (1, 2), (2, 3)], 4, undirected=True)
    assert exact.exact_expected_convergence_time(path, ColorState.from_sets(4, red=[1, 2])) == 1.0


def test_against_distribution_iteration():
    gen = np.random.default_rng(21)
    for _ in range(25):
        n = int(gen.integers(1, 6))
        g = random_digraph(gen, n, float(gen.uniform(0.3, 0.8)))
        s = random_state(gen, n)
        red, time = _distribution_iteration(g, s)
        assert exact.exact_expected_red(g, s) == pytest.approx(red, abs=1e-9)
        assert exact.exact_expected_convergence_time(g, s) == pytest.approx(time, abs=1e-9)


def test_star_values():
    g, s = generators.star(7, seed=0)
    assert exact.exact_F(g, s, []) == 0.0
    assert exact.exact_F(g, s, [0]) == 5.0
    leaf = int(s.uncolored_nodes()[1])
    assert exact.exact_F(g, s, [leaf]) == pytest.approx(7 / 3, abs=1e-12)
    assert exact.exact_best_seed(g, s, 1) == ((0,), 5.0)


def test_best_seed_edge_cases():
    g, s = generators.star(7, seed=0)
    assert exact.exact_best_seed(g, s, 0) == ((), exact.exact_expected_red(g, s))
    best, val = exact.exact_best_seed(g, s, 10)
    assert best == tuple(s.uncolored_nodes().tolist())
    assert val == exact.exact_F(g, s, s.uncolored_nodes()) == 5.0
    with pytest.raises(ValueError):
        exact.exact_best_seed(g, s, -1)


def test_best_seed_matches_brute_force_and_ties():
    gen = np.random.default_rng(4)
    for _ in range(30):
        n = int(gen.integers(2, 7))
        g = random_digraph(gen, n, 0.4)
        s = random_state(gen, n)
        for k in (1, 2):
            pool = [v for v in range(n) if s.colors[v] != 2]
            best = max(exact.exact_F(g, s, A) for r in range(k + 1) for A in itertools.combinations(pool, r))
            got, val = exact.exact_best_seed(g, s, k)
            assert val == pytest.approx(best, abs=1e-9)
    # all leaves of a symmetric star score the same, so the smallest wins
    g = build_graph([(0, i) for i in range(1, 5)], 5, undirected=True)
    assert exact.exact_best_seed(g, ColorState.from_sets(5, red=[0]), 1)[0] == (1,)


def test_size_limit():
    g = build_graph([(i, i + 1) for i in range(13)], 14)
    with pytest.raises(SizeLimitError):
        exact.exact_expected_red(g, ColorState.uncolored(14))
    g13 = build_graph([(i, i + 1) for i in range(12)], 13)
    assert exact.exact_expected_red(g13, ColorState.from_sets(13, red=[12])) == 13


def test_markov_model_structure():
    g, s = generators.bipartite_tightness(6)
    model = exact.markov_model(g, s)
    counts = [int(np.count_nonzero(model.index.digits(c))) for c in model.states.tolist()]
    assert counts == sorted(counts, reverse=True)
    assert model.stable.sum() == 1
    for code in model.transient.tolist():
        codes, probs = model.successors[code]
        assert abs(probs.sum() - 1) < 1e-12
    idx = exact.StateIndex(4)
    st = ColorState([0, 1, 2, 1])
    assert idx.decode(idx.encode(st)) == st
