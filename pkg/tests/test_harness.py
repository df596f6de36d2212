from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from desco.channel import apply, single_burst, spaced_bursts
from desco.desco import desco_construct
from desco.harness import CSV_COLUMNS, converse_experiment, run_scenario, sweep
from desco.oracle import oracle_decode


def test_oracle_single_erasure(sco12):
    stream = sco12.transmit(sco12.random_source(12, 0))
    rep = oracle_decode(sco12, apply(single_burst(5, 1, 12), stream))
    # p[6] = s_1[4] + s_2[5], p[7] = s_1[5] + s_2[6]
    assert rep.recovered_at == {(5, 2): 6, (5, 1): 7}
    assert not rep.check_values(stream.source)


def test_oracle_desco_two_slot_burst(desco122):
    i = 7
    stream = desco122.transmit(desco122.random_source(30, 2))
    rep = oracle_decode(desco122, apply(single_burst(i - 1, 2, 30), stream))
    # q[i+1] ties s_1[i-1] to s_2[i]; q[i+3] gives s_1[i-1]; q[i+4] gives s_2[i-1]
    assert rep.recovered_at == {(i, 1): i + 2, (i - 1, 1): i + 3, (i, 2): i + 3, (i - 1, 2): i + 4}
    assert rep.worst_delay == 5
    assert max(rep.recovered_at.values()) <= i + 5


def test_oracle_nothing_erased(sco12):
    stream = sco12.transmit(sco12.random_source(6, 0))
    rep = oracle_decode(sco12, apply(single_burst(0, 0, 6), stream))
    assert rep.erased == () and rep.worst_delay == 0


def test_oracle_partial_window_is_prefix(desco232):
    stream = desco232.transmit(desco232.random_source(40, 5))
    rx = apply(single_burst(3, 4, 40), stream)
    full = oracle_decode(desco232, rx)
    part = oracle_decode(desco232, rx, until=12)
    assert all(full.recovered_at[s] == at for s, at in part.recovered_at.items())
    assert all(at <= 12 for at in part.recovered_at.values())
    assert set(part.recovered_at) <= set(full.recovered_at)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 20), st.integers(1, 4), st.integers(0, 20), st.integers(1, 4))
def test_oracle_values_always_true(seed, j1, b1, gap, b2):
    code = desco_construct(2, 3, 2)
    h = j1 + b1 + gap + b2 + 30
    stream = code.transmit(code.random_source(h, seed))
    rx = apply(spaced_bursts([(j1, b1), (j1 + b1 + gap, b2)], h), stream)
    rep = oracle_decode(code, rx)
    assert not rep.check_values(stream.source)


def test_sweep_examples(desco122, desco472, cc1224):
    rep = sweep(desco122, 2)
    assert rep.certified and rep.worst_delay_user2 == 5 and rep.worst_delay_user1 is None
    rep = sweep(desco472, 1)
    assert rep.certified and rep.worst_delay_user1 == 7
    assert sweep(cc1224, 1).certified and sweep(cc1224, 2).certified
    assert sweep(cc1224, 2).rate == Fraction(1, 2)


def test_sweep_covers_every_offset_and_length(desco122):
    rep = sweep(desco122, 2)
    assert {(sc.offset, sc.burst_len) for sc in rep.scenarios} == {
        (j, b) for j in range(desco122.sweep_period) for b in (1, 2)
    }


def test_sweep_csv_deterministic(desco122):
    a = sweep(desco122, 1).to_csv()
    b = sweep(desco122, 1).to_csv()
    assert a == b
    lines = a.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert {line.rsplit(",", 1)[1] for line in lines[1:]} == {"structural", "oracle"}


def test_sweep_parallel_matches_serial(desco122):
    assert sweep(desco122, 2, workers=2).to_csv() == sweep(desco122, 2).to_csv()


def test_short_horizon_reports_failure(desco122):
    rep = sweep(desco122, 2, horizon=9)
    assert not rep.certified and rep.failures()


def test_scenario_result_fields(desco232):
    sc = run_scenario(desco232, 2, 4, 3)
    assert sc.ok and sc.value_errors == 0 and not sc.dominance_violations


def test_converse_examples():
    assert not converse_experiment(1, 2, 2, 4).feasible
    assert converse_experiment(1, 2, 2, 4).bound == Fraction(3, 5)
    boundary = converse_experiment(1, 2, 2, 5)
    assert boundary.feasible and boundary.period == 6
    assert converse_experiment(1, 2, 2, 6).feasible


def test_converse_clamps_erasures_to_period():
    rep = converse_experiment(2, 3, 2, 1)
    assert rep.erasures_per_period == rep.period == 3
    assert not rep.feasible
