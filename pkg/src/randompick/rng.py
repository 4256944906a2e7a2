"""Counter-based random streams.

Every random pick in a simulation is a pure function of
``(key, replicate, round, node)``, so results do not depend on the order in
which nodes are visited or on how replicates are split across workers. The
mixing function is the splitmix64 finalizer; master seeds are expanded into
64-bit keys with :class:`numpy.random.SeedSequence`.

The same arithmetic is implemented three times (pure Python ints, numpy
``uint64`` arrays and the numba kernels in :mod:`randompick._kernels`); the
test-suite checks that they agree bit-for-bit.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer on a Python int."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def derive(key: int, *ids: int) -> int:
    """Fold integer ids into ``key``; distinct id paths give independent keys."""
    for i in ids:
        key = mix64(key + (int(i) + 1) * GOLDEN)
    return key


def master_key(seed: int, *path: int) -> int:
    """64-bit stream key for a master seed and an optional spawn path."""
    if seed is None:
        raise ValueError("an explicit seed is required")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generator(seed: int, *path: int) -> np.random.Generator:
    """numpy Generator for the non-pick randomness (blue draws, q-states, ...)."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path)))


def round_key(key: int, replicate: int, t: int) -> int:
    return mix64(mix64(key + (replicate + 1) * GOLDEN) + t * GOLDEN)


def pick_offsets(key: int, replicate: int, t: int, nodes, degrees) -> np.ndarray:
    """Offsets into each node's sorted out-neighbour list for round ``t`` (1-based).

    Vectorised numpy mirror of the kernel's pick; ``degrees`` must be > 0.
    """
    nodes = np.asarray(nodes, dtype=np.uint64)
    degrees = np.asarray(degrees, dtype=np.uint64)
    rk = np.uint64(round_key(key, replicate, t))
    with np.errstate(over="ignore"):
        x = rk + (nodes + np.uint64(1)) * np.uint64(GOLDEN)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
        x = x ^ (x >> np.uint64(31))
        return (((x >> np.uint64(32)) * degrees) >> np.uint64(32)).astype(np.int64)
