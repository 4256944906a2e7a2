"""numba kernels for the Random Pick process and BFS-based graph metrics.

Graphs arrive as CSR arrays (``indptr``, ``indices``) plus the reverse CSR
(``rindptr``, ``rindices``). Colours are int8: 0 uncoloured, 1 red, 2 blue.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S32 = np.uint64(32)
_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def _mix(x):
    x = (x ^ (x >> _S30)) * _M1
    x = (x ^ (x >> _S27)) * _M2
    return x ^ (x >> _S31)


@njit(cache=True, inline="always")
def _round_key(key, rep, t):
    return _mix(_mix(key + np.uint64(rep + 1) * _GOLDEN) + np.uint64(t) * _GOLDEN)


@njit(cache=True, inline="always")
def _offset(rk, v, d):
    u = _mix(rk + np.uint64(v + 1) * _GOLDEN)
    return np.int64(((u >> _S32) * np.uint64(d)) >> _S32)


@njit(cache=True)
def derive(key, i):
    return _mix(key + np.uint64(i + 1) * _GOLDEN)


@njit(cache=True)
def _initial_active(rindptr, rindices, colors0, active, stamp, run_id):
    n_active = 0
    for w in range(colors0.shape[0]):
        if colors0[w] != 0:
            for j in range(rindptr[w], rindptr[w + 1]):
                v = rindices[j]
                if colors0[v] == 0 and stamp[v] != run_id:
                    stamp[v] = run_id
                    active[n_active] = v
                    n_active += 1
    return n_active


@njit(cache=True)
def _run(indptr, indices, rindptr, rindices, col, key, rep, max_rounds,
         active, n_active, stamp, run_id, newly, newcol, traj, times):
    """Advance ``col`` in place until stable or ``max_rounds``.

    ``active`` holds the uncoloured nodes with a coloured out-neighbour.
    Returns (rounds, converged, red_gained). When ``traj`` has rows, the
    per-round (red, blue) increments are written to it; when ``times`` is
    non-empty the round in which each node is coloured is written to it.
    """
    t = 0
    gained_red = 0
    record = traj.shape[0] > 0
    timed = times.shape[0] > 0
    while n_active > 0 and t < max_rounds:
        t += 1
        rk = _round_key(key, rep, t)
        n_new = 0
        for i in range(n_active):
            v = active[i]
            s = indptr[v]
            w = indices[s + _offset(rk, v, indptr[v + 1] - s)]
            c = col[w]
            if c != 0:
                newly[n_new] = v
                newcol[n_new] = c
                n_new += 1
        red_now = 0
        for j in range(n_new):
            col[newly[j]] = newcol[j]
            if newcol[j] == 1:
                red_now += 1
            if timed:
                times[newly[j]] = t
        gained_red += red_now
        if record:
            traj[t, 0] = red_now
            traj[t, 1] = n_new - red_now
        k = 0
        for i in range(n_active):
            v = active[i]
            if col[v] == 0:
                active[k] = v
                k += 1
        n_active = k
        for j in range(n_new):
            w = newly[j]
            for q in range(rindptr[w], rindptr[w + 1]):
                v = rindices[q]
                if col[v] == 0 and stamp[v] != run_id:
                    stamp[v] = run_id
                    active[n_active] = v
                    n_active += 1
    return t, n_active == 0, gained_red


@njit(cache=True)
def simulate(indptr, indices, rindptr, rindices, colors0, key, rep, max_rounds, record):
    n = colors0.shape[0]
    col = colors0.copy()
    active = np.empty(n, np.int64)
    stamp = np.zeros(n, np.int64)
    newly = np.empty(n, np.int64)
    newcol = np.empty(n, np.int8)
    rows = max_rounds + 1 if record else 0
    traj = np.zeros((rows, 2), np.int64)
    times = np.full(n, -1, np.int64)
    for v in range(n):
        if colors0[v] != 0:
            times[v] = 0
    n_active = _initial_active(rindptr, rindices, colors0, active, stamp, 1)
    t, conv, _ = _run(indptr, indices, rindptr, rindices, col, key, rep, max_rounds,
                      active, n_active, stamp, 1, newly, newcol, traj, times)
    return col, t, conv, traj[: t + 1] if record else traj, times


@njit(cache=True)
def final_red_batch(indptr, indices, rindptr, rindices, colors0, key, R, max_rounds):
    """Sum and sum of squares of the final red count over replicates 0..R-1."""
    n = colors0.shape[0]
    red0 = 0
    for v in range(n):
        if colors0[v] == 1:
            red0 += 1
    col = np.empty(n, np.int8)
    active0 = np.empty(n, np.int64)
    active = np.empty(n, np.int64)
    stamp0 = np.zeros(n, np.int64)
    stamp = np.zeros(n, np.int64)
    newly = np.empty(n, np.int64)
    newcol = np.empty(n, np.int8)
    traj = np.zeros((0, 2), np.int64)
    n0 = _initial_active(rindptr, rindices, colors0, active0, stamp0, 1)
    total = 0.0
    total_sq = 0.0
    capped = 0
    for rep in range(R):
        col[:] = colors0
        active[:n0] = active0[:n0]
        run_id = rep + 1
        for i in range(n0):
            stamp[active0[i]] = run_id
        _, conv, g = _run(indptr, indices, rindptr, rindices, col, key, rep, max_rounds,
                          active, n0, stamp, run_id, newly, newcol, traj, np.zeros(0, np.int64))
        r = red0 + g
        total += r
        total_sq += r * r
        if not conv:
            capped += 1
    return total, total_sq, capped


@njit(cache=True)
def greedy_sweep(indptr, indices, rindptr, rindices, colors0, candidates, keys, R, max_rounds):
    """Final-red sums for each candidate added (as red) to ``colors0``."""
    m = candidates.shape[0]
    sums = np.empty(m, np.float64)
    sqs = np.empty(m, np.float64)
    capped = np.empty(m, np.int64)
    col = colors0.copy()
    for i in range(m):
        c = candidates[i]
        col[c] = 1
        s, q, k = final_red_batch(indptr, indices, rindptr, rindices, col, keys[i], R, max_rounds)
        col[c] = colors0[c]
        sums[i] = s
        sqs[i] = q
        capped[i] = k
    return sums, sqs, capped


@njit(cache=True)
def rounds_batch(indptr, indices, rindptr, rindices, colors0, key, rep0, R, max_rounds):
    """Convergence rounds for replicates rep0..rep0+R-1."""
    n = colors0.shape[0]
    rounds = np.empty(R, np.int64)
    conv = np.empty(R, np.bool_)
    col = np.empty(n, np.int8)
    active0 = np.empty(n, np.int64)
    active = np.empty(n, np.int64)
    stamp0 = np.zeros(n, np.int64)
    stamp = np.zeros(n, np.int64)
    newly = np.empty(n, np.int64)
    newcol = np.empty(n, np.int8)
    traj = np.zeros((0, 2), np.int64)
    n0 = _initial_active(rindptr, rindices, colors0, active0, stamp0, 1)
    for i in range(R):
        col[:] = colors0
        active[:n0] = active0[:n0]
        run_id = i + 1
        for j in range(n0):
            stamp[active0[j]] = run_id
        t, c, _ = _run(indptr, indices, rindptr, rindices, col, key, rep0 + i, max_rounds,
                       active, n0, stamp, run_id, newly, newcol, traj, np.zeros(0, np.int64))
        rounds[i] = t
        conv[i] = c
    return rounds, conv


@njit(cache=True)
def per_node_rounds(indptr, indices, rindptr, rindices, key, trials, max_rounds):
    """Rounds matrix (n, trials) for the single-red-node start at every node."""
    n = indptr.shape[0] - 1
    out = np.empty((n, trials), np.int64)
    conv = np.empty((n, trials), np.bool_)
    colors0 = np.zeros(n, np.int8)
    for v in range(n):
        colors0[v] = 1
        r, c = rounds_batch(indptr, indices, rindptr, rindices, colors0, derive(key, v), 0, trials, max_rounds)
        out[v] = r
        conv[v] = c
        colors0[v] = 0
    return out, conv


@njit(cache=True)
def chain_times(indptr, indices, chain, key, rep0, R):
    """Rounds until w1 picks w0, then w2 picks w1, ... for each replicate."""
    out = np.empty(R, np.int64)
    for i in range(R):
        rep = rep0 + i
        t = 0
        for h in range(1, chain.shape[0]):
            v = chain[h]
            target = chain[h - 1]
            s = indptr[v]
            d = indptr[v + 1] - s
            while True:
                t += 1
                if indices[s + _offset(_round_key(key, rep, t), v, d)] == target:
                    break
        out[i] = t
    return out


@njit(cache=True)
def bfs(indptr, indices, source, dist, queue):
    """Unweighted BFS from ``source``; fills ``dist`` (-1 unreachable), returns visit count."""
    dist[:] = -1
    dist[source] = 0
    head = 0
    tail = 1
    queue[0] = source
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for j in range(indptr[v], indptr[v + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True)
def all_sources_distance_summary(indptr, indices):
    """Per source: (reached count incl. source, sum of distances, eccentricity)."""
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    reach = np.empty(n, np.int64)
    total = np.empty(n, np.int64)
    ecc = np.empty(n, np.int64)
    for s in range(n):
        cnt = bfs(indptr, indices, s, dist, queue)
        tot = 0
        mx = 0
        for i in range(cnt):
            d = dist[queue[i]]
            tot += d
            if d > mx:
                mx = d
        reach[s] = cnt
        total[s] = tot
        ecc[s] = mx
    return reach, total, ecc


@njit(cache=True)
def brandes(indptr, indices):
    """Shortest-path betweenness over ordered pairs (unnormalised)."""
    n = indptr.shape[0] - 1
    bc = np.zeros(n, np.float64)
    dist = np.empty(n, np.int64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    order = np.empty(n, np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        # dependency accumulation over DAG successors, in reverse BFS order
        for i in range(tail - 1, -1, -1):
            v = order[i]
            acc = 0.0
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] == dist[v] + 1:
                    acc += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            delta[v] = acc
            if v != s:
                bc[v] += acc
    return bc


_NEVER = np.int64(1) << np.int64(62)


@njit(cache=True)
def greedy_sweep_shared(indptr, indices, rindptr, rindices, colors0, candidates, key, R, max_rounds):
    """Final-red sums for each candidate added to ``colors0``, all candidates
    sharing the pick streams of replicates 0..R-1.

    Per replicate the process is run once from ``colors0`` recording the
    round each node is coloured. Under a fixed pick profile, adding a red
    node c only changes the nodes whose colour ends up traced back to c, so
    for each candidate only that region is propagated: a node still
    uncoloured at round t joins it iff its round-t pick already belongs to
    it. The result equals a full run from ``colors0`` plus c with the same
    stream, bit for bit.
    """
    n = colors0.shape[0]
    m = candidates.shape[0]
    sums = np.zeros(m, np.float64)
    sqs = np.zeros(m, np.float64)
    capped = np.zeros(m, np.int64)
    red0 = 0
    for v in range(n):
        if colors0[v] == 1:
            red0 += 1
    col = np.empty(n, np.int8)
    times = np.empty(n, np.int64)
    active0 = np.empty(n, np.int64)
    active = np.empty(n, np.int64)
    stamp0 = np.zeros(n, np.int64)
    stamp = np.zeros(n, np.int64)
    newly = np.empty(n, np.int64)
    newcol = np.empty(n, np.int8)
    traj = np.zeros((0, 2), np.int64)
    joined = np.zeros(n, np.int64)  # region id the node belongs to
    jtime = np.empty(n, np.int64)
    watched = np.zeros(n, np.int64)
    watch = np.empty(n, np.int64)
    fresh = np.empty(n, np.int64)
    table = np.empty((0, n), np.int64)
    rk = np.uint64(0)
    region = 0
    n0 = _initial_active(rindptr, rindices, colors0, active0, stamp0, 1)
    for rep in range(R):
        col[:] = colors0
        times[:] = _NEVER
        for v in range(n):
            if colors0[v] != 0:
                times[v] = 0
        active[:n0] = active0[:n0]
        run_id = rep + 1
        for i in range(n0):
            stamp[active0[i]] = run_id
        rounds, conv, g = _run(indptr, indices, rindptr, rindices, col, key, rep, max_rounds,
                               active, n0, stamp, run_id, newly, newcol, traj, times)
        base_red = red0 + g
        # picks of the first rounds, shared by every candidate's propagation
        horizon = min(max_rounds, rounds + 16)
        if table.shape[0] < horizon:
            table = np.empty((horizon, n), np.int64)
        for t in range(1, horizon + 1):
            rk = _round_key(key, rep, t)
            for v in range(n):
                s = indptr[v]
                d = indptr[v + 1] - s
                table[t - 1, v] = indices[s + _offset(rk, v, d)] if d > 0 else -1
        for ci in range(m):
            c = candidates[ci]
            if colors0[c] != 0:
                sums[ci] += base_red
                sqs[ci] += base_red * base_red
                if not conv:
                    capped[ci] += 1
                continue
            region += 1
            joined[c] = region
            jtime[c] = 0
            gain = 0 if col[c] == 1 else 1
            n_watch = 0
            for q in range(rindptr[c], rindptr[c + 1]):
                v = rindices[q]
                if colors0[v] == 0 and joined[v] != region and watched[v] != region and times[v] > 0:
                    watched[v] = region
                    watch[n_watch] = v
                    n_watch += 1
            t = 0
            while n_watch > 0 and t < max_rounds:
                t += 1
                tabled = t <= horizon
                if not tabled:
                    rk = _round_key(key, rep, t)
                n_fresh = 0
                k = 0
                for i in range(n_watch):
                    v = watch[i]
                    if times[v] < t:
                        continue  # coloured earlier, outside the region
                    if tabled:
                        w = table[t - 1, v]
                    else:
                        s = indptr[v]
                        w = indices[s + _offset(rk, v, indptr[v + 1] - s)]
                    if joined[w] == region and jtime[w] < t:
                        fresh[n_fresh] = v
                        n_fresh += 1
                    else:
                        watch[k] = v
                        k += 1
                n_watch = k
                for j in range(n_fresh):
                    u = fresh[j]
                    joined[u] = region
                    jtime[u] = t
                    if col[u] != 1:
                        gain += 1
                for j in range(n_fresh):
                    u = fresh[j]
                    for q in range(rindptr[u], rindptr[u + 1]):
                        v = rindices[q]
                        if (colors0[v] == 0 and joined[v] != region and watched[v] != region
                                and times[v] > t):
                            watched[v] = region
                            watch[n_watch] = v
                            n_watch += 1
            r = base_red + gain
            sums[ci] += r
            sqs[ci] += r * r
            if n_watch > 0 or not conv:
                capped[ci] += 1
    return sums, sqs, capped
