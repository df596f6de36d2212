from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desco.channel import apply, single_burst
from desco.harness import sweep
from desco.sco import (
    MAIN,
    OPPOSITE,
    ConstructionError,
    ScoCode,
    choose_coefficients,
    diagonal_main,
    diagonal_opposite,
    sco_decode_burst,
    sco_for,
    sco_parity,
    verify_code,
)
from desco.stream import StreamCode, Tap


def test_diagonal_main_examples():
    assert diagonal_main(-1, 7).entries == tuple((-1 + k, k + 1) for k in range(7))
    assert diagonal_main(0, 1).entries == ((0, 1),)
    assert diagonal_main(3, 2).entries == ((3, 1), (4, 2))


def test_diagonal_opposite_examples():
    assert diagonal_opposite(-1, 7, 1).entries == tuple((-1 - k, k + 1) for k in range(7))
    assert diagonal_opposite(0, 1, 3).entries == ((0, 1),)
    assert diagonal_opposite(0, 3, 2).entries == ((0, 1), (-2, 2), (-4, 3))


def test_diagonal_rejects_bad_sizes():
    with pytest.raises(ValueError):
        diagonal_main(0, 0)
    with pytest.raises(ValueError):
        diagonal_opposite(0, 2, 0)


def test_table_1a_taps(sco12):
    # p[i] = s_1[i-2] + s_2[i-1]
    assert sco12.coeffs == ((1, 1),)
    assert set(sco12.taps[0]) == {Tap(2, 1, 1), Tap(1, 2, 1)}
    assert sco12.rate == Fraction(2, 3)


def test_table_1b_taps(sco24):
    # p[i] = s_1[i-4] + s_2[i-2]
    assert set(sco24.taps[0]) == {Tap(4, 1, 1), Tap(2, 2, 1)}
    assert (sco24.burst, sco24.delay) == (2, 4)


def test_parity_examples(sco12):
    history = np.array([[1, 0], [0, 1], [0, 0]])
    assert sco_parity(sco12, history, 2).checks == (0,)
    opp = ScoCode(1, 2, OPPOSITE, 1, ((1, 1),), m=1)
    assert sco_parity(opp, history, 2).checks == (0,)  # s_2[0] + s_1[1]
    assert sco_parity(sco12, np.zeros((5, 2), dtype=int), 4).checks == (0,)


def test_parity_accepts_mapping_and_callable(sco12):
    # p[3] = s_1[1] + s_2[2]; missing times read as zero
    assert sco_parity(sco12, {1: (1, 0)}, 3).checks == (1,)
    assert sco_parity(sco12, lambda t: (t % 2, t % 2), 3).checks == (1,)


@pytest.mark.parametrize("B,T,orientation,ell", [
    (1, 2, MAIN, 1), (2, 3, MAIN, 1), (2, 3, OPPOSITE, 2), (3, 5, OPPOSITE, 1), (2, 4, MAIN, 2),
])
def test_direct_parity_matches_tap_encoder(B, T, orientation, ell):
    code = choose_coefficients(B, T, orientation, ell)
    rng = np.random.default_rng(B * 10 + T)
    source = code.random_source(30, rng)
    parity = code.encode(source)
    for i in range(30):
        assert sco_parity(code, source, i).checks == tuple(int(v) for v in parity[i])


def test_decode_single_erasure_schedule(sco12):
    stream = sco12.transmit(sco12.random_source(12, 3))
    rep = sco_decode_burst(sco12, apply(single_burst(5, 1, 12), stream))
    assert rep.recovered_at == {(5, 1): 7, (5, 2): 6}
    assert rep.worst_delay == 2
    assert not rep.check_values(stream.source)


def test_decode_nothing_erased(sco12):
    stream = sco12.transmit(sco12.random_source(8, 0))
    rep = sco_decode_burst(sco12, apply(single_burst(0, 0, 8), stream))
    assert rep.erased == () and rep.recovered_at == {} and rep.success


def test_interleaved_code_boxed_cell(sco24):
    i = 6
    stream = sco24.transmit(sco24.random_source(16, 4))
    rep = sco_decode_burst(sco24, apply(single_burst(i - 1, 2, 16), stream))
    assert rep.recovered_at[(i - 1, 1)] == i + 3
    assert rep.worst_delay == 4


def test_uncertified_code_reports_deadline():
    weak = ScoCode(1, 3, MAIN, 1, ((1, 1, 1),), m=1)
    stream = weak.transmit(weak.random_source(12, 0))
    rep = sco_decode_burst(weak, apply(single_burst(4, 3, 12), stream))
    assert not rep.success
    assert "deadline" in rep.failure


class _SameLagCode(StreamCode):
    """p[i] = s_1[i-1] + s_2[i-1]: one equation per erased slot, two unknowns."""

    B, T, burst, delay, sweep_period = 1, 2, 1, 2, 3
    n_source = 2

    def __init__(self):
        from desco.gf import field
        self.gf = field(1)

    @property
    def taps(self):
        return ((Tap(1, 1, 1), Tap(1, 2, 1)),)


def test_verify_examples(sco12):
    assert verify_code(sco12).certified
    assert verify_code(sco12).worst_delay == 2
    bad = verify_code(_SameLagCode())
    assert not bad.certified and bad.counterexample is not None
    assert verify_code(ScoCode(0, 2)).certified


@pytest.mark.parametrize("T", [1, 2, 3, 4])
def test_b1_xor_codes_always_certify(T):
    code = choose_coefficients(1, T, MAIN, 1, m=1)
    assert code.coeffs == ((1,) * T,)
    assert code.certified


def test_choose_is_deterministic():
    a = choose_coefficients(2, 3, MAIN, 1, 8)
    assert a == choose_coefficients(2, 3, MAIN, 1, 8)
    assert a.certified and verify_code(a).certified


def test_choose_failure_and_domain():
    with pytest.raises(ConstructionError):
        choose_coefficients(2, 4, MAIN, 1, m=1, budget=2)
    with pytest.raises(ValueError):
        choose_coefficients(3, 2)


def test_sco_for_reduces_by_gcd():
    code = sco_for(2, 4)
    assert (code.B, code.T, code.ell) == (1, 2, 2)
    assert (code.burst, code.delay) == (2, 4)


def test_dict_round_trip():
    code = choose_coefficients(2, 5, OPPOSITE, 2)
    assert ScoCode.from_dict(code.to_dict()) == code


@pytest.mark.parametrize("B,T,orientation,ell", [
    (1, 1, MAIN, 1), (1, 3, OPPOSITE, 1), (2, 2, MAIN, 1), (2, 5, MAIN, 1),
    (2, 5, OPPOSITE, 2), (3, 4, MAIN, 1), (3, 6, OPPOSITE, 1), (2, 3, OPPOSITE, 2),
])
def test_structural_decoder_meets_delay_everywhere(B, T, orientation, ell):
    code = choose_coefficients(B, T, orientation, ell)
    rep = sweep(code, 1)
    assert rep.certified, rep.failures()[:3]
    assert rep.worst_delay <= ell * T
    assert rep.dominance_violations == 0


codes = st.sampled_from([(1, 2, MAIN, 1), (2, 3, MAIN, 1), (2, 3, OPPOSITE, 2), (1, 3, OPPOSITE, 1)])


@settings(max_examples=50, deadline=None)
@given(codes, st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_causality_and_time_invariance(params, seed, cut):
    code = choose_coefficients(*params)
    rng = np.random.default_rng(seed)
    src = code.random_source(24, rng)
    parity = code.encode(src)
    changed = src.copy()
    changed[cut:] = code.random_source(24 - cut, rng)
    assert np.array_equal(code.encode(changed)[: cut + 1], parity[: cut + 1])
    shifted = np.vstack([np.zeros((3, code.T), dtype=src.dtype), src])
    assert np.array_equal(code.encode(shifted)[3:], parity)
    assert code.n_source + code.n_parity == code.T + code.B


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 8), st.integers(1, 2))
def test_decoding_is_linear(seed, j, b):
    code = choose_coefficients(2, 3, MAIN, 1)
    rng = np.random.default_rng(seed)
    h = 16
    x, y = code.random_source(h, rng), code.random_source(h, rng)
    pat = single_burst(j, b, h)
    rx, ry, rxy = (sco_decode_burst(code, apply(pat, code.transmit(s))) for s in (x, y, x ^ y))
    for sym in rxy.erased:
        assert rxy.values[sym] == rx.values[sym] ^ ry.values[sym]
