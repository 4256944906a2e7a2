"""Convergence-time experiments and audits against the known upper bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from . import rng as _rng
from .dynamics import default_max_rounds
from .graph import Graph
from .state import ColorState

DEFAULT_TRIALS = 300
VIOLATION_FLAG_RATE = 0.001


def diameter_round_bound(n: int, diameter: int, max_out_degree: int) -> float:
    """4 * D * Delta+ * log2(n): w.h.p. cap on the convergence time."""
    return 4.0 * diameter * max_out_degree * math.log2(n) if n > 1 else 0.0


def undirected_round_bound(n: int) -> float:
    """20 * n * log2(n): w.h.p. cap for undirected graphs."""
    return 20.0 * n * math.log2(n) if n > 1 else 0.0


def edge_round_bound(m: int, beta: float) -> float:
    """m / beta: exceeded with probability at most beta."""
    if not 0 < beta < 1:
        raise ValueError("beta must be in (0, 1)")
    return m / beta


@dataclass
class ConvergenceStats:
    node_means: np.ndarray  # nan where a node has no converged run
    trials: int
    unconverged: int
    bound_diameter: float
    bound_undirected: float | None
    rounds: np.ndarray = field(repr=False)  # (n, trials); -1 marks capped runs

    @property
    def min(self) -> float:
        return float(np.nanmin(self.node_means))

    @property
    def max(self) -> float:
        return float(np.nanmax(self.node_means))

    @property
    def mean(self) -> float:
        """Mean over nodes of the per-node mean rounds."""
        return float(np.nanmean(self.node_means))

    def observed(self) -> np.ndarray:
        r = self.rounds.ravel()
        return r[r >= 0]

    def rows(self):
        return [(v, float(m)) for v, m in enumerate(self.node_means)]


def per_node_convergence(graph: Graph, trials: int = DEFAULT_TRIALS, seed: int = 0,
                         max_rounds: int | None = None) -> ConvergenceStats:
    """Rounds to stability when only node v starts coloured, ``trials`` runs per v."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cap = default_max_rounds(graph) if max_rounds is None else max_rounds
    key = np.uint64(_rng.master_key(seed))
    rounds, conv = _kernels.per_node_rounds(*graph.kernel_arrays(), key, trials, cap)
    rounds = np.where(conv, rounds, -1)
    counts = conv.sum(axis=1)
    sums = np.where(conv, rounds, 0).sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
    return ConvergenceStats(
        node_means=means,
        trials=trials,
        unconverged=int((~conv).sum()),
        bound_diameter=diameter_round_bound(graph.n, graph.diameter, graph.max_out_degree),
        bound_undirected=undirected_round_bound(graph.n) if graph.undirected else None,
        rounds=rounds,
    )


def convergence_rounds(graph: Graph, state: ColorState, runs: int, seed: int,
                       max_rounds: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(rounds, converged) for ``runs`` independent runs from ``state``."""
    cap = default_max_rounds(graph) if max_rounds is None else max_rounds
    key = np.uint64(_rng.master_key(seed))
    return _kernels.rounds_batch(*graph.kernel_arrays(), state.colors, key, 0, runs, cap)


# --- q-random states -----------------------------------------------------------------

def q_random_state(n: int, q: float, gen: np.random.Generator) -> ColorState:
    """Each node red independently with probability q (the colour does not affect timing)."""
    if not 0 < q < 1:
        raise ValueError("q must be in (0, 1)")
    return ColorState((gen.random(n) < q).astype(np.int8))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample correlation; nan when fewer than two points or a variance is zero."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("xs and ys must have equal length")
    if x.size < 2:
        return math.nan
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return math.nan
    return float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))


@dataclass
class QBenchResult:
    rows: list[tuple[float, float, float, int, int]]  # (q, mean, std, converged trials, capped)
    r: float

    HEADER = ("q", "mean", "std", "trials", "capped")


def q_sweep(graph: Graph, q_list: Sequence[float], trials: int = DEFAULT_TRIALS, seed: int = 0,
            max_rounds: int | None = None) -> QBenchResult:
    """Mean convergence time from fresh q-random states for every q, and its correlation with q."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    for q in q_list:
        if not 0 < q < 1:
            raise ValueError(f"q must be in (0, 1), got {q}")
    cap = default_max_rounds(graph) if max_rounds is None else max_rounds
    arrays = graph.kernel_arrays()
    rows = []
    for i, q in enumerate(q_list):
        times = []
        capped = 0
        for j in range(trials):
            state = q_random_state(graph.n, q, _rng.generator(seed, 0, i, j))
            key = np.uint64(_rng.master_key(seed, 1, i, j))
            r, c = _kernels.rounds_batch(*arrays, state.colors, key, 0, 1, cap)
            if c[0]:
                times.append(int(r[0]))
            else:
                capped += 1
        t = np.asarray(times, dtype=np.float64)
        mean = float(t.mean()) if t.size else math.nan
        std = float(t.std(ddof=1)) if t.size > 1 else 0.0
        rows.append((float(q), mean, std, int(t.size), capped))
    return QBenchResult(rows, pearson([r[0] for r in rows], [r[1] for r in rows]))


# --- bound audit -----------------------------------------------------------------------

@dataclass
class BoundReport:
    observations: int
    bound_diameter: float
    bound_undirected: float | None
    bound_edges: float | None
    violations_diameter: int
    violations_undirected: int
    violations_edges: int

    @property
    def rate_diameter(self) -> float:
        return self.violations_diameter / self.observations if self.observations else 0.0

    @property
    def rate_edges(self) -> float:
        return self.violations_edges / self.observations if self.observations else 0.0

    @property
    def flagged(self) -> bool:
        """True when the w.h.p. bounds fail more often than the tolerated rate."""
        rate_u = self.violations_undirected / self.observations if self.observations else 0.0
        return self.rate_diameter > VIOLATION_FLAG_RATE or rate_u > VIOLATION_FLAG_RATE

    def rows(self):
        out = [("4*D*Delta*log2(n)", self.bound_diameter, self.violations_diameter, self.observations)]
        if self.bound_undirected is not None:
            out.append(("20*n*log2(n)", self.bound_undirected, self.violations_undirected, self.observations))
        if self.bound_edges is not None:
            out.append(("m/beta", self.bound_edges, self.violations_edges, self.observations))
        return out


def bound_report(graph: Graph, observed_rounds: Sequence[int], beta: float | None = None) -> BoundReport:
    """Count observations above each bound.

    The m/beta bound may be exceeded by a beta fraction of runs; the other two
    hold with high probability. ``m`` is the number of directed edges, so an
    undirected edge counts twice.
    """
    obs = np.asarray(observed_rounds, dtype=np.float64)
    bd = diameter_round_bound(graph.n, graph.diameter, graph.max_out_degree)
    bu = undirected_round_bound(graph.n) if graph.undirected else None
    be = edge_round_bound(graph.m, beta) if beta is not None else None
    return BoundReport(
        observations=int(obs.size),
        bound_diameter=bd,
        bound_undirected=bu,
        bound_edges=be,
        violations_diameter=int(np.count_nonzero(obs > bd)),
        violations_undirected=int(np.count_nonzero(obs > bu)) if bu is not None else 0,
        violations_edges=int(np.count_nonzero(obs > be)) if be is not None else 0,
    )
