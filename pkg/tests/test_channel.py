import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desco.channel import ErasurePattern, apply, periodic_burst, single_burst, spaced_bursts
from desco.stream import Stream


def make_stream(horizon, seed=0):
    rng = np.random.default_rng(seed)
    return Stream(rng.integers(0, 256, (horizon, 3)), rng.integers(0, 256, (horizon, 2)))


def test_single_burst():
    assert single_burst(2, 2, 6).erased == {2, 3}
    assert single_burst(0, 0, 5).erased == frozenset()
    assert single_burst(0, 8, 26).erased == set(range(8))


@pytest.mark.parametrize("j,b,h", [(-1, 2, 5), (4, 2, 5), (0, -1, 5)])
def test_single_burst_out_of_range(j, b, h):
    with pytest.raises(ValueError):
        single_burst(j, b, h)


def test_periodic_burst():
    assert periodic_burst(2, 5, 15).erased == {0, 1, 5, 6, 10, 11}
    assert periodic_burst(0, 5, 15).erased == frozenset()
    with pytest.raises(ValueError):
        periodic_burst(6, 5, 15)


@pytest.mark.parametrize("e,p", [(2, 5), (3, 7), (4, 6)])
def test_periodic_erasure_fraction(e, p):
    horizon = 1000 * p
    assert len(periodic_burst(e, p, horizon).erased) / horizon == pytest.approx(e / p)


def test_apply_examples():
    stream = make_stream(6)
    assert not apply(ErasurePattern(frozenset(), 6), stream).erased.any()
    full = apply(ErasurePattern(frozenset(range(6)), 6), stream)
    assert full.erased.all()
    got = apply(single_burst(2, 2, 6), stream)
    assert [got[t] is None for t in range(6)] == [False, False, True, True, False, False]
    assert got[0] == stream[0] and got[5] == stream[5]


def test_json_round_trip():
    pat = spaced_bursts([(1, 2), (7, 3)], 12)
    assert pat.to_json() == "[[1, 2], [7, 3]]"
    assert ErasurePattern.from_json(pat.to_json(), 12) == pat


def test_pattern_outside_horizon_rejected():
    with pytest.raises(ValueError):
        ErasurePattern(frozenset({5}), 5)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 29)), st.sets(st.integers(0, 29)))
def test_apply_preserves_unerased_and_commutes(a, b):
    b = b - a
    stream = make_stream(30, seed=len(a))
    pa, pb = ErasurePattern(frozenset(a), 30), ErasurePattern(frozenset(b), 30)
    one = apply(pa | pb, stream)
    two = apply(pb | pa, stream)
    assert np.array_equal(one.erased, two.erased)
    assert np.array_equal(one.source, two.source) and np.array_equal(one.parity, two.parity)
    keep = ~one.erased
    assert np.array_equal(one.source[keep], stream.source[keep])
    assert np.array_equal(one.parity[keep], stream.parity[keep])
    assert set(np.flatnonzero(one.erased)) == a | b
