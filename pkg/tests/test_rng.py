import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from randompick import _kernels, rng
from randompick.dynamics import round_picks
from randompick.graph import build_graph

u64 = st.integers(min_value=0, max_value=(1 << 64) - 1)


def test_mix64_reference_values():
    # splitmix64 stream from state 0: outputs are mix64(k * GOLDEN)
    assert rng.mix64(rng.GOLDEN) == 0xE220A8397B1DCDAF
    assert rng.mix64(2 * rng.GOLDEN & rng.MASK64) == 0x6E789E6AA1B965F4


@settings(max_examples=200, deadline=None)
@given(key=u64, rep=st.integers(0, 10_000), t=st.integers(1, 10_000),
       nodes=st.lists(st.integers(0, 1 << 20), min_size=1, max_size=20),
       deg=st.integers(1, 1000))
def test_python_numpy_and_kernel_offsets_agree(key, rep, t, nodes, deg):
    degrees = np.full(len(nodes), deg)
    vec = rng.pick_offsets(key, rep, t, nodes, degrees)
    rk = rng.round_key(key, rep, t)
    assert np.uint64(rk) == _kernels._round_key(np.uint64(key), rep, t)
    for v, off in zip(nodes, vec.tolist()):
        x = rng.mix64(rk + (v + 1) * rng.GOLDEN)
        assert off == ((x >> 32) * deg) >> 32
        assert off == _kernels._offset(np.uint64(rk), v, deg)
        assert 0 <= off < deg


@settings(max_examples=100, deadline=None)
@given(key=u64, a=st.integers(0, 1000))
def test_derive_matches_kernel(key, a):
    assert rng.derive(key, a) == int(_kernels.derive(np.uint64(key), a))


def test_master_key_is_deterministic_and_path_sensitive():
    assert rng.master_key(7) == rng.master_key(7)
    keys = {rng.master_key(7), rng.master_key(8), rng.master_key(7, 0), rng.master_key(7, 1), rng.master_key(7, 1, 0)}
    assert len(keys) == 5


def test_generator_streams():
    a = rng.generator(3, 1, 2).random(5)
    assert np.array_equal(a, rng.generator(3, 1, 2).random(5))
    assert not np.array_equal(a, rng.generator(3, 2, 1).random(5))


def test_picks_do_not_depend_on_visited_subset():
    g = build_graph([(a, b) for a in range(6) for b in range(6) if a != b], 6)
    key = rng.master_key(11)
    full = round_picks(g, key, 4, 2)
    part = round_picks(g, key, 4, 2, nodes=[1, 4])
    assert part[1] == full[1] and part[4] == full[4]
    assert part[0] == -1


def test_offsets_are_uniform():
    deg = 5
    offs = rng.pick_offsets(rng.master_key(1), 0, 1, np.arange(50_000), np.full(50_000, deg))
    counts = np.bincount(offs, minlength=deg)
    expected = 50_000 / deg
    sigma = np.sqrt(50_000 * (1 / deg) * (1 - 1 / deg))
    assert np.all(np.abs(counts - expected) < 5 * sigma)
