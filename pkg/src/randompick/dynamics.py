"""The Random Pick process.

Each round every uncoloured node picks one out-neighbour uniformly at random
and copies its colour if that neighbour is coloured; coloured nodes never
change. Picks come from the counter-based stream in :mod:`randompick.rng`,
so the pick of node ``v`` in round ``t`` of replicate ``r`` is fixed by
``(seed, r, t, v)`` alone. The fast kernel only draws picks for uncoloured
nodes that have a coloured out-neighbour (the others cannot change), yet it
sees exactly the same picks as a full profile replay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from . import rng as _rng
from .graph import Graph
from .state import Color, ColorState

NO_PICK = -1


def default_max_rounds(graph: Graph) -> int:
    """Round cap: ten times the high-probability bound 4·D·Δ+·log2(n), plus slack."""
    n = graph.n
    bound = 4 * graph.diameter * graph.max_out_degree * (math.log2(n) if n > 1 else 0.0)
    return 10 * (math.ceil(bound) + 1)


@dataclass
class RunResult:
    final_state: ColorState
    rounds: int
    converged: bool
    trajectory: np.ndarray = field(repr=False)  # rows: (r_t, b_t, u_t) for t = 0..rounds
    color_round: np.ndarray = field(repr=False, default=None)  # per node; 0 initial, -1 never

    def newly_colored(self, t: int) -> np.ndarray:
        """Nodes coloured in round ``t``."""
        return np.flatnonzero(self.color_round == t)


@dataclass
class PickProfile:
    """picks[v, t-1] is the out-neighbour node v picks in round t (NO_PICK if d+(v) = 0)."""

    picks: np.ndarray

    def __post_init__(self):
        self.picks = np.asarray(self.picks, dtype=np.int64).reshape(len(self.picks), -1)

    @property
    def horizon(self) -> int:
        return self.picks.shape[1]

    def round(self, t: int) -> np.ndarray:
        """Picks of round ``t`` (1-based)."""
        if not 1 <= t <= self.horizon:
            raise ValueError(f"round {t} outside profile horizon {self.horizon}")
        return self.picks[:, t - 1]

    def validate(self, graph: Graph) -> None:
        if self.picks.shape[0] != graph.n:
            raise ValueError("profile has wrong number of nodes")
        for t in range(1, self.horizon + 1):
            _check_picks(graph, self.round(t))


def _check_picks(graph, picks):
    picks = np.asarray(picks, dtype=np.int64)
    if picks.shape != (graph.n,):
        raise ValueError("round picks must have one entry per node")
    for v in np.flatnonzero(picks != NO_PICK).tolist():
        if not graph.has_edge(v, int(picks[v])):
            raise ValueError(f"pick {int(picks[v])} of node {v} is not an out-neighbour")
    return picks


def _counts(colors):
    c = np.bincount(colors, minlength=3)
    return c[1], c[2], c[0]


def is_stable(graph: Graph, state: ColorState) -> bool:
    """True iff no uncoloured node has a coloured out-neighbour."""
    colors = state.colors
    src = np.repeat(colors == 0, graph.out_degrees)
    return not bool(np.any(src & (colors[graph.indices] != 0)))


def step_with_picks(graph: Graph, state: ColorState, round_picks) -> ColorState:
    """One synchronous round driven by explicit picks."""
    picks = _check_picks(graph, round_picks)
    colors = state.colors
    new = colors.copy()
    mask = (colors == 0) & (picks != NO_PICK)
    new[mask] = colors[picks[mask]]
    return ColorState(new)


def round_picks(graph: Graph, key: int, t: int, replicate: int = 0, nodes=None) -> np.ndarray:
    """Picks of round ``t`` for ``nodes`` (default all) from stream ``key``."""
    nodes = np.arange(graph.n) if nodes is None else np.asarray(nodes, dtype=np.int64)
    out = np.full(graph.n, NO_PICK, dtype=np.int64)
    deg = graph.out_degrees[nodes]
    nodes = nodes[deg > 0]
    deg = deg[deg > 0]
    if nodes.size:
        offs = _rng.pick_offsets(key, replicate, t, nodes, deg)
        out[nodes] = graph.indices[graph.indptr[nodes] + offs]
    return out


def step(graph: Graph, state: ColorState, seed: int, t: int = 1, replicate: int = 0) -> tuple[ColorState, bool]:
    """Round ``t`` of the process seeded by ``seed``; returns (new_state, any_change)."""
    key = _rng.master_key(seed)
    colors = state.colors
    uncolored = np.flatnonzero(colors == 0)
    new = step_with_picks(graph, state, round_picks(graph, key, t, replicate, uncolored))
    return new, new != state


def run(graph: Graph, state: ColorState, seed: int, max_rounds: int | None = None,
        replicate: int = 0) -> RunResult:
    """Run until stable or ``max_rounds`` rounds (default :func:`default_max_rounds`)."""
    if state.n != graph.n:
        raise ValueError("state size does not match graph")
    if max_rounds is None:
        max_rounds = default_max_rounds(graph)
    if max_rounds < 0:
        raise ValueError("max_rounds must be >= 0")
    key = np.uint64(_rng.master_key(seed))
    col, t, conv, deltas, times = _kernels.simulate(*graph.kernel_arrays(), state.colors.copy(),
                                             key, replicate, max_rounds, True)
    traj = np.empty((t + 1, 3), dtype=np.int64)
    r0, b0, _ = _counts(state.colors)
    traj[:, 0] = r0 + np.cumsum(deltas[:, 0])
    traj[:, 1] = b0 + np.cumsum(deltas[:, 1])
    traj[:, 2] = graph.n - traj[:, 0] - traj[:, 1]
    return RunResult(ColorState(col), int(t), bool(conv), traj, times)


def sample_profile(graph: Graph, T: int, seed: int, replicate: int = 0) -> PickProfile:
    """Full pick profile for rounds 1..T; identical to the picks :func:`run` uses."""
    if T < 0:
        raise ValueError("horizon must be >= 0")
    key = _rng.master_key(seed)
    picks = np.empty((graph.n, T), dtype=np.int64)
    for t in range(1, T + 1):
        picks[:, t - 1] = round_picks(graph, key, t, replicate)
    return PickProfile(picks)


def replay(graph: Graph, state: ColorState, profile: PickProfile, max_rounds: int | None = None) -> RunResult:
    """Deterministic run driven by a recorded profile.

    Stops when stable or when the profile (or ``max_rounds``) is exhausted.
    """
    profile.validate(graph)
    limit = profile.horizon if max_rounds is None else min(max_rounds, profile.horizon)
    cur = state
    rows = [_counts(cur.colors)]
    times = np.where(state.colors != 0, 0, -1)
    t = 0
    while t < limit and not is_stable(graph, cur):
        t += 1
        nxt = step_with_picks(graph, cur, profile.round(t))
        times[(nxt.colors != 0) & (cur.colors == 0)] = t
        cur = nxt
        rows.append(_counts(cur.colors))
    return RunResult(cur, t, is_stable(graph, cur), np.array(rows, dtype=np.int64).reshape(-1, 3), times)


# --- extended sequences ------------------------------------------------------

def extended_sequences(graph: Graph, profile: PickProfile, t: int) -> list[list[int]]:
    """es^t(v) for every node v.

    es^0(v) = [v] and es^t(v) = es^{t-1}(v) + es^{t-1}(v') with v' the pick of
    v in round t. A node without out-neighbours keeps es^{t-1}(v).
    """
    if t < 0 or t > profile.horizon:
        raise ValueError(f"t={t} outside profile horizon {profile.horizon}")
    seqs = [[v] for v in range(graph.n)]
    for r in range(1, t + 1):
        picks = profile.round(r)
        seqs = [seqs[v] + seqs[p] if p != NO_PICK else seqs[v] for v, p in enumerate(picks.tolist())]
    return seqs


def extended_sequence(graph: Graph, profile: PickProfile, v: int, t: int) -> list[int]:
    graph._check(v)
    return extended_sequences(graph, profile, t)[v]


def final_color_via_es(graph: Graph, state0: ColorState, profile: PickProfile, v: int, t: int) -> Color:
    """Colour of the first initially-coloured node of es^t(v) (uncoloured if none)."""
    colors = state0.colors
    for w in extended_sequence(graph, profile, v, t):
        if colors[w] != 0:
            return Color(int(colors[w]))
    return Color.UNCOLORED


def es_final_colors(picks: np.ndarray, states: np.ndarray, t: int) -> np.ndarray:
    """Batched form of :func:`final_color_via_es` over many profiles and states.

    ``picks`` has shape (P, n, T) with NO_PICK sentinels and ``states`` shape
    (S, n). Returns an int8 array (P, S, n): the colour every node gets from
    its extended sequence es^t under each (profile, initial state) pair.
    Sequences of nodes without a pick are padded with -1 (never coloured).
    """
    picks = np.asarray(picks, dtype=np.int64)
    P, n, _ = picks.shape
    seq = np.broadcast_to(np.arange(n)[None, :, None], (P, n, 1)).copy()
    rows = np.arange(P)[:, None]
    for r in range(t):
        p = picks[:, :, r]
        tail = seq[rows, np.where(p == NO_PICK, 0, p)]
        tail[p == NO_PICK] = -1
        seq = np.concatenate([seq, tail], axis=2)
    states = np.asarray(states, dtype=np.int8)
    padded = np.concatenate([states, np.zeros((states.shape[0], 1), np.int8)], axis=1)
    seq = np.where(seq < 0, n, seq)
    vals = padded[:, seq]  # (S, P, n, L)
    first = np.argmax(vals != 0, axis=3)
    out = np.take_along_axis(vals, first[..., None], axis=3)[..., 0]
    return np.transpose(out, (1, 0, 2))


def replay_batch(picks: np.ndarray, states: np.ndarray, t: int) -> np.ndarray:
    """State after ``t`` replayed rounds for every (profile, initial state) pair, shape (P, S, n)."""
    picks = np.asarray(picks, dtype=np.int64)
    P, n, _ = picks.shape
    cur = np.broadcast_to(np.asarray(states, dtype=np.int8)[None], (P,) + np.shape(states)).copy()
    prow = np.arange(P)[:, None, None]
    srow = np.arange(cur.shape[1])[None, :, None]
    for r in range(t):
        p = picks[:, :, r][:, None, :]
        safe = np.where(p == NO_PICK, np.arange(n)[None, None, :], p)
        picked = cur[prow, srow, np.broadcast_to(safe, cur.shape)]
        cur = np.where((cur == 0) & (p != NO_PICK), picked, cur)
    return cur


# --- traversed chains ----------------------------------------------------------

def _check_chain(graph, chain):
    chain = np.asarray(chain, dtype=np.int64)
    if chain.ndim != 1 or chain.size == 0:
        raise ValueError("chain must be a non-empty node list")
    for i in range(1, chain.size):
        if not graph.has_edge(int(chain[i]), int(chain[i - 1])):
            raise ValueError(f"chain edge ({int(chain[i])}, {int(chain[i - 1])}) missing")
    return chain


def chain_traversal_time(graph: Graph, chain: Sequence[int], seed: int, replicate: int = 0) -> int:
    """Rounds until w_1 picks w_0, then w_2 picks w_1, ..., then w_h picks w_{h-1}."""
    return int(chain_traversal_times(graph, chain, seed, 1, replicate)[0])


def chain_traversal_times(graph: Graph, chain: Sequence[int], seed: int, runs: int, first_replicate: int = 0) -> np.ndarray:
    chain = _check_chain(graph, chain)
    key = np.uint64(_rng.master_key(seed))
    return _kernels.chain_times(graph.indptr, graph.indices, chain, key, first_replicate, runs)
