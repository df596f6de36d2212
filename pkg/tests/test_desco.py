import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desco.channel import apply, single_burst
from desco.desco import (
    DescoCode,
    decode_user1,
    decode_user2,
    desco_construct,
    desco_encode,
    expose_parities,
    recursive_nonurgent_decode,
    t2_star,
)
from desco.harness import smallest_passing_spacing, sweep, two_burst_ok
from desco.oracle import oracle_decode
from desco.sco import sco_parity
from desco.stream import Tap


def received(code, j, b, horizon, seed=0):
    stream = code.transmit(code.random_source(horizon, seed))
    return stream, apply(single_burst(j, b, horizon), stream)


@pytest.mark.parametrize("B,T,alpha,delta,t2", [(1, 2, 2, 3, 5), (4, 7, 2, 11, 18), (2, 3, 2, 5, 8)])
def test_construct_parameters(B, T, alpha, delta, t2):
    code = desco_construct(B, T, alpha)
    assert (code.delta, code.T2, code.B2) == (delta, t2, alpha * B)
    assert code.c1.certified and code.c2.certified
    assert code.c2.ell == alpha - 1


def test_t2_star():
    assert t2_star(1, 2, 2) == 5
    assert t2_star(4, 7, 2) == 18
    assert t2_star(1, 2, 3) == 7
    with pytest.raises(ValueError):
        t2_star(1, 2, 1)


def test_construct_domain():
    with pytest.raises(ValueError):
        desco_construct(3, 2, 2)
    with pytest.raises(ValueError):
        desco_construct(1, 2, 1)


def test_table_2b_taps(desco122):
    # q[i] = s_1[i-2] + s_2[i-1] + s_1[i-4] + s_2[i-5]
    assert set(desco122.taps[0]) == {Tap(2, 1, 1), Tap(1, 2, 1), Tap(4, 1, 1), Tap(5, 2, 1)}


def test_encode_impulse(desco122):
    history = np.zeros((8, 2), dtype=int)
    history[0, 0] = 1
    q = [desco_encode(desco122, history, i).q.checks[0] for i in range(8)]
    assert q == [0, 0, 1, 0, 1, 0, 0, 0]
    zero = np.zeros((8, 2), dtype=int)
    assert all(desco_encode(desco122, zero, i).q.checks == (0,) for i in range(8))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_combined_parity_identity(seed):
    code = desco_construct(2, 3, 2)
    src = code.random_source(25, seed)
    parity = code.encode(src)
    for t in range(25):
        pa = sco_parity(code.c1, src, t).checks
        pb = sco_parity(code.c2, src, t - code.delta).checks
        assert tuple(int(v) for v in parity[t]) == tuple(a ^ b for a, b in zip(pa, pb))
        assert desco_encode(code, src, t).q.checks == tuple(int(v) for v in parity[t])


def test_user1_single_erasure(desco122):
    i = 6
    stream, rx = received(desco122, i, 1, 20)
    rep = decode_user1(desco122, rx)
    assert max(rep.recovered_at.values()) == i + 2
    assert rep.worst_delay == 2 and not rep.check_values(stream.source)


def test_user1_nothing_erased(desco122):
    _, rx = received(desco122, 0, 0, 10)
    rep = decode_user1(desco122, rx)
    assert rep.erased == () and rep.success


def test_user1_rejects_long_burst(desco122):
    _, rx = received(desco122, 3, 2, 20)
    with pytest.raises(ValueError):
        decode_user1(desco122, rx)


def test_user2_rejects_long_burst(desco122):
    _, rx = received(desco122, 3, 3, 20)
    with pytest.raises(ValueError):
        decode_user2(desco122, rx)


def test_user2_table_schedule(desco122):
    # s[i-1], s[i] erased: s_1[i] from q[i+2], s_1[i-1] from q[i+3],
    # then s_2[i-1], s_2[i] from q[i+4], q[i+5]
    i = 7
    stream, rx = received(desco122, i - 1, 2, 30)
    rep = decode_user2(desco122, rx)
    assert rep.recovered_at == {(i, 1): i + 2, (i - 1, 1): i + 3, (i - 1, 2): i + 4, (i, 2): i + 5}
    assert not rep.check_values(stream.source)
    oracle = oracle_decode(desco122, rx)
    assert all(oracle.recovered_at[s] <= at for s, at in rep.recovered_at.items())
    assert oracle.worst_delay == 5


def test_recursion_loop_is_empty_when_t_is_b_plus_one(desco122):
    _, rx = received(desco122, 4, 2, 30)
    state = expose_parities(desco122, rx)
    trace = recursive_nonurgent_decode(desco122, state)
    assert [e.stage for e in trace if e.stage.startswith("4")] == []
    assert [(e.stage, e.kind, e.index) for e in trace if e.kind != "pA"] == [("1", "B", 4), ("3", "A", 5)]


@pytest.mark.parametrize("B,T,alpha", [(2, 3, 2), (2, 5, 3), (3, 6, 3), (1, 4, 3)])
def test_structural_recovery_never_beats_oracle(B, T, alpha):
    code = desco_construct(B, T, alpha)
    for j in (0, 3, code.sweep_period - 1):
        h = code.sweep_horizon(j, 2)
        stream, rx = received(code, j, code.B2, h, seed=j)
        rep = decode_user2(code, rx)
        oracle = oracle_decode(code, rx)
        assert rep.within(code.T2), rep.failure
        assert all(oracle.recovered_at[s] <= at for s, at in rep.recovered_at.items())
        assert not rep.check_values(stream.source)
        # non-urgent rows strictly before the urgent deadline window closes
        tau = j + code.T2
        assert all(at < tau for (t, r), at in rep.recovered_at.items() if r <= T - B)


def test_fig3_nonurgent_bookkeeping(desco472):
    # Fig. 3 burst [-8, -1] shifted to [0, 7]; slot 9 there is slot 17 here
    _, rx = received(desco472, 0, 8, 26)
    rep = decode_user2(desco472, rx)
    nonurgent = [at for (t, r), at in rep.recovered_at.items() if r <= 3]
    assert max(nonurgent) - 8 <= 9  # the figure's claim, stronger than < tau = 10
    assert rep.worst_delay <= 18


@pytest.mark.parametrize("B,T,alpha", [(1, 2, 2), (2, 3, 2), (1, 3, 3)])
def test_user_sweeps_certify(B, T, alpha):
    code = desco_construct(B, T, alpha)
    for user in (1, 2):
        rep = sweep(code, user)
        assert rep.certified, rep.failures()[:2]
        assert rep.dominance_violations == 0
        assert rep.worst_delay == code.contract(user)[1]


@pytest.mark.parametrize("B,T,alpha", [(1, 2, 2), (2, 3, 2), (1, 2, 3)])
def test_two_bursts_at_guard_spacing(B, T, alpha):
    code = desco_construct(B, T, alpha)
    gap = code.T2 + code.B2
    for start in range(code.T + code.B):
        assert two_burst_ok(code, 2, (start, code.B2), (start + gap, code.B2))
        assert two_burst_ok(code, 1, (start, code.B), (start + gap, code.B))
    smallest = smallest_passing_spacing(code, 2)
    assert smallest is not None and smallest <= gap


def test_dict_round_trip(desco232):
    assert DescoCode.from_dict(desco232.to_dict()) == desco232
