"""Earliest-recovery linear decoder.

Walks the received stream slot by slot, turning every parity sub-symbol into
an equation over the erased source sub-symbols, and records the first slot
at which each unknown is pinned down. No linear decoder can recover a
symbol earlier, so this bounds every structural decoder from below.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import LinearSystem
from .stream import DecodeReport, ReceivedStream, StreamCode, Symbol, erased_symbols


@dataclass
class OracleState:
    system: LinearSystem
    first_determined: dict[Symbol, int] = dc_field(default_factory=dict)
    values: dict[Symbol, int] = dc_field(default_factory=dict)

    def settle(self, t: int) -> None:
        for sym, value in self.system.determined().items():
            if sym not in self.first_determined:
                self.first_determined[sym] = t
                self.values[sym] = value

    @property
    def complete(self) -> bool:
        return len(self.first_determined) == len(self.system.unknowns)


def _tap_arrays(code: StreamCode):
    out = []
    for row_taps in code.taps:
        if row_taps:
            lags, rows, coeffs = (np.array(x, dtype=np.int64) for x in zip(*row_taps))
        else:
            lags = rows = coeffs = np.zeros(0, dtype=np.int64)
        out.append((lags, rows - 1, coeffs))
    return out


def oracle_decode(
    code: StreamCode,
    received: ReceivedStream,
    until: int | None = None,
) -> DecodeReport:
    """Recover every erased sub-symbol at the earliest slot it is determined.

    Slots are consumed up to ``until`` (inclusive; default the whole stream),
    stopping early once every unknown is determined.
    """
    unknowns = erased_symbols(received, code.n_source)
    times = received.erased_times
    scenario = (times[0], times[-1] - times[0] + 1) if times else (0, 0)
    report = DecodeReport(scenario, unknowns, decoder="oracle")
    if not unknowns:
        return report

    horizon = len(received)
    last = horizon - 1 if until is None else min(until, horizon - 1)
    col = np.full((horizon, code.n_source), -1, dtype=np.int64)
    for k, (t, r) in enumerate(unknowns):
        col[t, r - 1] = k
    # parity of the known part; the remainder is carried by the unknowns
    rhs = received.parity ^ code.encode(received.source)
    state = OracleState(LinearSystem(unknowns, code.gf))
    n = len(unknowns)
    taps = _tap_arrays(code)

    for t in range(times[0], last + 1):
        if received.erased[t]:
            continue
        for k, (lags, rows, coeffs) in enumerate(taps):
            src = t - lags
            ok = (src >= 0) & (src < horizon)
            cols = col[src[ok], rows[ok]]
            hit = cols >= 0
            if not hit.any():
                continue
            v = np.zeros(n + 1, dtype=np.int64)
            np.bitwise_xor.at(v, cols[hit], coeffs[ok][hit])
            v[n] = rhs[t, k]
            state.system._insert(v)
        state.settle(t)
        if state.complete:
            break

    report.recovered_at = dict(state.first_determined)
    report.values = dict(state.values)
    if not report.success:
        missing = [s for s in unknowns if s not in state.first_determined]
        report.failure = f"unrecovered {missing[0]} and {len(missing) - 1} more"
    return report
