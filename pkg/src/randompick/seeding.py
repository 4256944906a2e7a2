"""Seed selection: Monte Carlo greedy, centrality and community baselines,
and the paired comparison experiment."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from . import centrality as _c
from . import rng as _rng
from .dynamics import default_max_rounds
from .errors import InfeasibleError
from .graph import Graph
from .state import ColorState

PRACTICAL_REPS = 300
MEASURES = ("pagerank", "closeness", "betweenness", "indegree", "outdegree")
ALGORITHMS = ("greedy",) + MEASURES + ("community",)


def guarantee_reps(n: int, k: int, epsilon: float) -> int:
    """Replications giving the (1 - 1/e - eps) guarantee w.h.p.: 27 n k^2 ln(n^3) / eps^2."""
    return math.ceil(27 * n * k * k * math.log(n ** 3) / epsilon ** 2)


@dataclass
class GreedyConfig:
    """Greedy parameters.

    ``shared_streams`` makes every candidate of every step reuse the pick
    streams of replicates 0..R-1 (common random numbers). Estimates are then
    non-decreasing step over step on every sample path and candidates are
    compared on identical randomness; with ``False`` each (step, candidate)
    estimate draws its own independent streams.
    """

    k: int
    seed: int
    epsilon: float = 0.1
    reps: int = PRACTICAL_REPS
    guarantee: bool = False
    max_rounds: int | None = None
    shared_streams: bool = True
    stream: tuple = ()  # spawn path below ``seed``

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.seed is None:
            raise ValueError("an explicit seed is required")

    def replications(self, n: int) -> int:
        return guarantee_reps(n, self.k, self.epsilon) if self.guarantee else self.reps


@dataclass
class SeedSelection:
    seeds: tuple[int, ...]
    estimates: list[float]  # estimated spread after each insertion
    simulations: int
    capped: int = 0
    wall_time: float = field(default=0.0, compare=False)


def _blue_check(state, A):
    A = np.asarray(list(A), dtype=np.int64)
    if A.size and np.any(state.colors[A] == 2):
        raise InfeasibleError("seed set intersects the blue set")
    return A


def spread_statistics(graph: Graph, state: ColorState, A: Iterable[int], R: int, seed: int,
                      max_rounds: int | None = None, stream: Sequence[int] = ()) -> tuple[float, float, int]:
    """(mean, sample std, capped runs) of the final red count over ``R`` runs."""
    if R < 1:
        raise ValueError("R must be >= 1")
    A = _blue_check(state, A)
    start = state.with_red(A.tolist())
    cap = default_max_rounds(graph) if max_rounds is None else max_rounds
    key = np.uint64(_rng.master_key(seed, *stream))
    total, total_sq, capped = _kernels.final_red_batch(*graph.kernel_arrays(), start.colors, key, R, cap)
    mean = total / R
    var = max(total_sq - R * mean * mean, 0.0) / (R - 1) if R > 1 else 0.0
    return mean, math.sqrt(var), int(capped)


def estimate_spread(graph: Graph, state: ColorState, A: Iterable[int], R: int, seed: int,
                    max_rounds: int | None = None) -> float:
    """Monte Carlo estimate of the expected final red count with ``A`` made red."""
    return spread_statistics(graph, state, A, R, seed, max_rounds)[0]


def greedy_select(graph: Graph, state: ColorState, config: GreedyConfig) -> SeedSelection:
    """Insert, ``k`` times, the non-blue node with the largest estimated spread.

    Ties go to the lower node id.
    """
    t0 = time.perf_counter()
    feasible = np.flatnonzero(state.colors != 2)
    if config.k > feasible.size:
        raise InfeasibleError(f"k={config.k} exceeds the {feasible.size} non-blue nodes")
    R = config.replications(graph.n)
    cap = default_max_rounds(graph) if config.max_rounds is None else config.max_rounds
    master = _rng.master_key(config.seed, *config.stream)
    arrays = graph.kernel_arrays()
    chosen: list[int] = []
    estimates: list[float] = []
    sims = 0
    capped = 0
    cur = state.colors.copy()
    for step in range(config.k):
        cand = np.setdiff1d(feasible, chosen)
        if config.shared_streams:
            sums, _, cap_n = _kernels.greedy_sweep_shared(*arrays, cur, cand, np.uint64(master), R, cap)
        else:
            keys = np.array([_rng.derive(master, step, c) for c in cand.tolist()], dtype=np.uint64)
            sums, _, cap_n = _kernels.greedy_sweep(*arrays, cur, cand, keys, R, cap)
        best = int(np.argmax(sums))
        v = int(cand[best])
        chosen.append(v)
        estimates.append(float(sums[best] / R))
        sims += R * cand.size
        capped += int(cap_n.sum())
        cur[v] = 1
    return SeedSelection(tuple(chosen), estimates, sims, capped, time.perf_counter() - t0)


def measure_scores(graph: Graph, measure: str) -> _c.ScoreVector:
    if measure == "pagerank":
        return _c.pagerank(graph)
    if measure == "closeness":
        return _c.closeness(graph)
    if measure == "betweenness":
        return _c.betweenness(graph)
    if measure == "indegree":
        return _c.degree_scores(graph, "in")
    if measure == "outdegree":
        return _c.degree_scores(graph, "out")
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def available_measures(graph: Graph) -> tuple[str, ...]:
    """Measures that are distinct on ``graph`` (in-degree equals out-degree when undirected)."""
    return tuple(m for m in MEASURES if not (graph.undirected and m == "indegree"))


def baseline_select(graph: Graph, state: ColorState, k: int, measure: str,
                    scores: _c.ScoreVector | None = None) -> tuple[int, ...]:
    """Top-``k`` uncoloured nodes by ``measure``; lower id first on ties."""
    pool = state.uncolored_nodes()
    if k > pool.size:
        raise InfeasibleError(f"k={k} exceeds the {pool.size} uncoloured nodes")
    if scores is None:
        scores = measure_scores(graph, measure)
    return tuple(int(v) for v in scores.ranking(pool)[:k])


def community_select(graph: Graph, state: ColorState, k: int, seed: int,
                     labels: np.ndarray | None = None, stream: Sequence[int] = ()) -> tuple[int, ...]:
    """One random uncoloured node from each of the ``k`` communities with fewest blue nodes.

    Communities come from label propagation asked for at least ``2k`` of
    them. They are sorted by blue count (ties: smaller id) and communities
    without uncoloured nodes are skipped.
    """
    if labels is None:
        labels = _c.label_propagation_communities(graph, seed, min(2 * k, graph.n))
    labels = np.asarray(labels)
    colors = state.colors
    n_comm = int(labels.max()) + 1 if labels.size else 0
    blue = np.bincount(labels[colors == 2], minlength=n_comm)
    free = np.bincount(labels[colors == 0], minlength=n_comm)
    order = [int(c) for c in np.lexsort((np.arange(n_comm), blue)) if free[c] > 0]
    if len(order) < k:
        raise InfeasibleError(f"only {len(order)} communities contain uncoloured nodes, need {k}")
    gen = _rng.generator(seed, 1, *stream)
    picks = []
    for c in order[:k]:
        members = np.flatnonzero((labels == c) & (colors == 0))
        picks.append(int(members[gen.integers(members.size)]))
    return tuple(picks)


# --- comparison experiment ----------------------------------------------------------

@dataclass
class CompareRow:
    algorithm: str
    k: int
    b0: int
    mean_red_ratio: float
    std: float
    trials: int
    capped: int

    HEADER = ("algorithm", "k", "b0", "mean_red_ratio", "std", "trials", "capped")

    def values(self):
        return (self.algorithm, self.k, self.b0, f"{self.mean_red_ratio:.6f}", f"{self.std:.6f}",
                self.trials, self.capped)


@dataclass
class CompareResult:
    rows: list[CompareRow]
    ratios: dict  # (algorithm, k) -> per-trial red ratios

    def row(self, algorithm: str, k: int) -> CompareRow:
        for r in self.rows:
            if r.algorithm == algorithm and r.k == k:
                return r
        raise KeyError((algorithm, k))


def compare_experiment(graph: Graph, b0: int, k_values: Sequence[int], algorithms: Sequence[str],
                       trials: int, seed: int, reps: int = PRACTICAL_REPS,
                       max_rounds: int | None = None) -> CompareResult:
    """Average final red fraction per (algorithm, k) over ``trials`` paired trials.

    In each trial ``b0`` blue nodes are drawn uniformly; every algorithm and
    every k sees the same blue set, and the evaluation run after seeding uses
    the same pick streams for all of them.
    """
    n = graph.n
    k_values = list(k_values)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if b0 < 0 or any(k < 0 for k in k_values) or b0 + max(k_values, default=0) > n:
        raise InfeasibleError(f"b0={b0} plus k={max(k_values, default=0)} exceeds n={n}")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
    cap = default_max_rounds(graph) if max_rounds is None else max_rounds
    scores = {a: measure_scores(graph, a) for a in algorithms if a in MEASURES}
    labels = {}
    arrays = graph.kernel_arrays()
    ratios = {(a, k): [] for a in algorithms for k in k_values}
    capped = {(a, k): 0 for a in algorithms for k in k_values}
    for t in range(trials):
        blue = _rng.generator(seed, 1, t).choice(n, size=b0, replace=False)
        state = ColorState.from_sets(n, blue=blue.tolist())
        eval_key = np.uint64(_rng.master_key(seed, 3, t))
        for k in k_values:
            for a in algorithms:
                if k == 0:
                    seeds: tuple = ()
                elif a == "greedy":
                    cfg = GreedyConfig(k=k, seed=seed, reps=reps, max_rounds=max_rounds, stream=(2, t, k))
                    seeds = greedy_select(graph, state, cfg).seeds
                elif a == "community":
                    if k not in labels:
                        labels[k] = _c.label_propagation_communities(graph, seed, min(2 * k, n))
                    seeds = community_select(graph, state, k, seed, labels[k], stream=(t, k))
                else:
                    seeds = baseline_select(graph, state, k, a, scores[a])
                start = state.with_red(seeds)
                total, _, c = _kernels.final_red_batch(*arrays, start.colors, eval_key, 1, cap)
                ratios[(a, k)].append(total / n)
                capped[(a, k)] += int(c)
    rows = []
    for k in k_values:
        for a in algorithms:
            r = np.asarray(ratios[(a, k)])
            std = float(r.std(ddof=1)) if r.size > 1 else 0.0
            rows.append(CompareRow(a, k, b0, float(r.mean()), std, trials, capped[(a, k)]))
    return CompareResult(rows, {key: np.asarray(v) for key, v in ratios.items()})
