"""Exact oracles for small graphs via the absorbing Markov chain on colourings.

States are packed base-3 integers (digit of node v: 0 uncoloured, 1 red,
2 blue). Only states reachable from the start are enumerated. Every
transition either keeps the state or strictly grows the coloured set, so
sweeping states in decreasing coloured-count order makes a Gauss-Seidel
pass exact; a second pass confirms the residual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError
from .graph import Graph
from .state import ColorState

MAX_NODES = 13
_TOL = 1e-12


class StateIndex:
    """Bijection between :class:`ColorState` and base-3 codes for ``n <= 13``."""

    def __init__(self, n: int):
        if n > MAX_NODES:
            raise SizeLimitError(f"exact oracles support n <= {MAX_NODES}, got n={n}")
        self.n = n
        self.powers = 3 ** np.arange(n, dtype=np.int64)

    def encode(self, state: ColorState) -> int:
        return int(state.colors.astype(np.int64) @ self.powers)

    def decode(self, code: int) -> ColorState:
        return ColorState(self.digits(code))

    def digits(self, code: int) -> np.ndarray:
        return (code // self.powers % 3).astype(np.int8)


@dataclass
class MarkovModel:
    """Reachable part of the chain from one start state."""

    graph: Graph
    index: StateIndex
    states: np.ndarray  # codes, sorted by decreasing coloured count
    successors: dict  # code -> (codes, probs); self-loop included
    stable: np.ndarray  # bool per entry of ``states``

    @property
    def transient(self) -> np.ndarray:
        return self.states[~self.stable]


class ExactSolver:
    """Memoised transitions and values for one graph.

    Sharing a solver across calls (e.g. all seed sets examined by
    :func:`exact_best_seed`) reuses every state already solved.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.index = StateIndex(graph.n)
        self._succ: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._red: dict[int, float] = {}
        self._time: dict[int, float] = {}
        self._nbrs = [graph.out_neighbors(v) for v in range(graph.n)]

    # --- transitions ----------------------------------------------------------

    def successors(self, code: int) -> tuple[np.ndarray, np.ndarray]:
        hit = self._succ.get(code)
        if hit is not None:
            return hit
        digits = self.index.digits(code)
        codes = np.array([code], dtype=np.int64)
        probs = np.ones(1)
        for v in np.flatnonzero(digits == 0).tolist():
            nb = self._nbrs[v]
            if nb.size == 0:
                continue
            counts = np.bincount(digits[nb], minlength=3)
            if counts[0] == nb.size:
                continue
            keep = np.flatnonzero(counts)
            delta = keep * self.index.powers[v]
            p = counts[keep] / nb.size
            codes = (codes[:, None] + delta[None, :]).ravel()
            probs = (probs[:, None] * p[None, :]).ravel()
        self._succ[code] = (codes, probs)
        return codes, probs

    def is_stable(self, code: int) -> bool:
        succ = self.successors(code)[0]
        return succ.size == 1 and int(succ[0]) == code

    def model(self, start: int) -> MarkovModel:
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for c in frontier:
                for s in self.successors(c)[0].tolist():
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        codes = np.fromiter(seen, dtype=np.int64, count=len(seen))
        colored = np.array([np.count_nonzero(self.index.digits(c)) for c in codes.tolist()])
        order = np.lexsort((codes, -colored))
        codes = codes[order]
        stable = np.array([self.is_stable(c) for c in codes.tolist()], dtype=bool)
        return MarkovModel(self.graph, self.index, codes,
                           {c: self._succ[c] for c in codes.tolist()}, stable)

    # --- value iteration --------------------------------------------------------

    def _solve(self, start: int, memo: dict, terminal, step_cost: float) -> float:
        if start in memo:
            return memo[start]
        model = self.model(start)
        codes = model.states.tolist()
        vals = {c: memo.get(c, 0.0) for c in codes}
        for c, st in zip(codes, model.stable.tolist()):
            if st:
                vals[c] = terminal(c)
        pending = [c for c, st in zip(codes, model.stable.tolist()) if not st and c not in memo]
        while True:
            resid = 0.0
            for c in pending:
                succ, p = model.successors[c]
                self_p = 0.0
                acc = step_cost
                for s, q in zip(succ.tolist(), p.tolist()):
                    if s == c:
                        self_p = q
                    else:
                        acc += q * vals[s]
                new = acc / (1.0 - self_p)
                resid = max(resid, abs(new - vals[c]))
                vals[c] = new
            if resid < _TOL:
                break
        memo.update(vals)
        return vals[start]

    def expected_red(self, state: ColorState) -> float:
        return self._solve(self.index.encode(state), self._red,
                           lambda c: float(np.count_nonzero(self.index.digits(c) == 1)), 0.0)

    def expected_time(self, state: ColorState) -> float:
        return self._solve(self.index.encode(state), self._time, lambda c: 0.0, 1.0)


_solvers: dict[Graph, ExactSolver] = {}


def _solver(graph: Graph) -> ExactSolver:
    if graph.n > MAX_NODES:
        raise SizeLimitError(f"exact oracles support n <= {MAX_NODES}, got n={graph.n}")
    s = _solvers.get(graph)
    if s is None:
        if len(_solvers) > 64:
            _solvers.clear()
        s = _solvers[graph] = ExactSolver(graph)
    return s


def _check_state(graph, state):
    if state.n != graph.n:
        raise ValueError("state size does not match graph")


def transition_distribution(graph: Graph, state: ColorState) -> list[tuple[ColorState, float]]:
    """One-round successor distribution, ordered by state code."""
    _check_state(graph, state)
    solver = _solver(graph)
    codes, probs = solver.successors(solver.index.encode(state))
    order = np.argsort(codes)
    return [(solver.index.decode(int(codes[i])), float(probs[i])) for i in order]


def markov_model(graph: Graph, state: ColorState) -> MarkovModel:
    _check_state(graph, state)
    solver = _solver(graph)
    return solver.model(solver.index.encode(state))


def exact_expected_red(graph: Graph, state: ColorState) -> float:
    """Expected number of red nodes once the process is stable."""
    _check_state(graph, state)
    return _solver(graph).expected_red(state)


def exact_expected_convergence_time(graph: Graph, state: ColorState) -> float:
    """Expected number of rounds until a stable state (0 if already stable)."""
    _check_state(graph, state)
    return _solver(graph).expected_time(state)


def exact_F(graph: Graph, state: ColorState, A) -> float:
    """Expected final red count after recolouring ``A`` red."""
    _check_state(graph, state)
    return exact_expected_red(graph, state.with_red(A))


def exact_best_seed(graph: Graph, state: ColorState, k: int) -> tuple[tuple[int, ...], float]:
    """Best seed set of size at most ``k`` by exhaustive search.

    Recolouring an already red node changes nothing and blue nodes are not
    allowed, so candidates are the uncoloured nodes and, F being monotone,
    sets of exactly ``min(k, #uncoloured)`` nodes suffice. Ties go to the
    lexicographically smallest set.
    """
    _check_state(graph, state)
    if k < 0:
        raise ValueError("k must be >= 0")
    solver = _solver(graph)
    pool = state.uncolored_nodes().tolist()
    size = min(k, len(pool))
    best, best_val = (), -np.inf
    for A in itertools.combinations(pool, size):
        val = solver.expected_red(state.with_red(A))
        if val > best_val + 1e-12:
            best, best_val = A, val
    return best, float(best_val)
