"""Exhaustive delay sweeps, the converse experiment and multi-burst checks.

A code taking part in a sweep provides ``contract(user) -> (burst, delay)``,
``decode(received, user) -> DecodeReport`` (its structural decoder),
``sweep_period`` and optionally ``sweep_horizon(j, user)``.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .channel import apply, periodic_burst, single_burst, spaced_bursts
from .desco import desco_construct, t2_star
from .musco import converse_rate_bound
from .oracle import oracle_decode
from .stream import DecodeReport, Symbol

CSV_COLUMNS = ("offset", "burst_len", "symbol_time", "sub_row", "recovered_at", "delay", "decoder")


@dataclass
class ScenarioResult:
    offset: int
    burst_len: int
    structural: DecodeReport
    oracle: DecodeReport
    value_errors: int
    deadline: int

    @property
    def ok(self) -> bool:
        return self.structural.within(self.deadline) and self.value_errors == 0

    @property
    def dominance_violations(self) -> list[Symbol]:
        s, o = self.structural.recovered_at, self.oracle.recovered_at
        return [sym for sym, at in s.items() if sym not in o or o[sym] > at]


@dataclass
class SweepReport:
    code: dict
    user: int
    contract: tuple[int, int]
    rate: Fraction
    scenarios: list[ScenarioResult] = dc_field(default_factory=list)

    def _worst(self, decoder: str) -> int | None:
        worst = 0
        for sc in self.scenarios:
            rep = getattr(sc, decoder)
            if rep.worst_delay is None:
                return None
            worst = max(worst, rep.worst_delay)
        return worst

    @property
    def worst_delay(self) -> int | None:
        return self._worst("structural")

    @property
    def oracle_worst_delay(self) -> int | None:
        return self._worst("oracle")

    @property
    def worst_delay_user1(self) -> int | None:
        return self.worst_delay if self.user == 1 else None

    @property
    def worst_delay_user2(self) -> int | None:
        return self.worst_delay if self.user == 2 else None

    @property
    def certified(self) -> bool:
        return bool(self.scenarios) and all(sc.ok for sc in self.scenarios)

    @property
    def dominance_violations(self) -> int:
        return sum(len(sc.dominance_violations) for sc in self.scenarios)

    @property
    def tight(self) -> bool:
        """Some sub-symbol needs exactly the contractual delay, even for the oracle."""
        return self.oracle_worst_delay == self.contract[1]

    def failures(self) -> list[tuple[int, int, str]]:
        out = []
        for sc in self.scenarios:
            if not sc.ok:
                why = sc.structural.failure or f"missed {sc.structural.missed(sc.deadline)[:1]}"
                out.append((sc.offset, sc.burst_len, why))
        return out

    def rows(self) -> Iterable[tuple]:
        for sc in self.scenarios:
            for name in ("structural", "oracle"):
                rep = getattr(sc, name)
                for sym in rep.erased:
                    at = rep.recovered_at.get(sym)
                    yield (sc.offset, sc.burst_len, sym[0], sym[1],
                           "" if at is None else at, "" if at is None else at - sym[0], name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(self.rows())
        return buf.getvalue()


def run_scenario(code, user: int, j: int, b: int, horizon: int | None = None, seed: int = 0) -> ScenarioResult:
    burst, deadline = code.contract(user)
    if horizon is None:
        horizon = code.sweep_horizon(j, user) if hasattr(code, "sweep_horizon") else j + burst + deadline + code.max_lag + 1
    rng = np.random.default_rng([seed, j, b, user])
    stream = code.transmit(code.random_source(horizon, rng))
    received = apply(single_burst(j, b, horizon), stream)
    structural = code.decode(received, user)
    oracle = oracle_decode(code, received)
    errors = len(structural.check_values(stream.source)) + len(oracle.check_values(stream.source))
    return ScenarioResult(j, b, structural, oracle, errors, deadline)


def _offset_batch(args) -> list[ScenarioResult]:
    code, user, j, horizon, seed = args
    burst, _ = code.contract(user)
    return [run_scenario(code, user, j, b, horizon, seed) for b in range(1, burst + 1)]


def sweep(code, user: int, horizon: int | None = None, seed: int = 0, workers: int = 1) -> SweepReport:
    """Every burst start in one structural period, every length up to the user's burst."""
    contract = code.contract(user)
    report = SweepReport(code.to_dict(), user, contract, code.rate)
    jobs = [(code, user, j, horizon, seed) for j in range(code.sweep_period)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            batches = list(pool.map(_offset_batch, jobs))
    else:
        batches = [_offset_batch(job) for job in jobs]
    for batch in batches:
        report.scenarios.extend(batch)
    return report


@dataclass
class ConverseReport:
    B: int
    T: int
    alpha: int
    T2: int
    bound: Fraction
    rate: Fraction
    period: int
    erasures_per_period: int
    checked: int
    unrecovered: list[Symbol]

    @property
    def feasible(self) -> bool:
        return not self.unrecovered


def converse_experiment(
    B: int, T: int, alpha: int, T2: int, horizon: int | None = None, m: int = 8, seed: int = 0, code=None
) -> ConverseReport:
    """Run the rate-T/(T+B) code over the periodic channel and count misses at delay T2.

    Each period of (alpha-1)B + T2 slots opens with alpha*B erasures (all
    of them if the period is shorter). Symbols whose deadline falls beyond
    the horizon are not judged.
    """
    code = code or desco_construct(B, T, alpha, m)
    period = (alpha - 1) * B + T2
    erasures = min(alpha * B, period)
    horizon = horizon or 3 * period + 1
    stream = code.transmit(code.random_source(horizon, seed))
    received = apply(periodic_burst(erasures, period, horizon), stream)
    report = oracle_decode(code, received)
    judged = [s for s in report.erased if s[0] + T2 < horizon]
    missed = set(report.missed(T2))
    wrong = report.check_values(stream.source)
    if wrong:
        raise AssertionError(f"oracle produced wrong values for {wrong[:3]}")
    return ConverseReport(
        B, T, alpha, T2, converse_rate_bound(B, T2, alpha), code.rate, period, erasures,
        len(judged), [s for s in judged if s in missed],
    )


def two_burst_ok(code, user: int, first: tuple[int, int], second: tuple[int, int], seed: int = 0) -> bool:
    """Both bursts corrected within the user's deadline by the oracle decoder."""
    _, deadline = code.contract(user)
    end = second[0] + second[1] + deadline + code.max_lag + 1
    stream = code.transmit(code.random_source(end, seed))
    received = apply(spaced_bursts([first, second], end), stream)
    report = oracle_decode(code, received)
    return report.within(deadline) and not report.check_values(stream.source)


def smallest_passing_spacing(code, user: int = 2, limit: int | None = None, start: int = 0) -> int | None:
    """Smallest gap g (start-to-start) such that every gap in [g, limit] passes.

    Both bursts take the full length for the user; ``limit`` defaults to
    T2 + burst.
    """
    burst, deadline = code.contract(user)
    limit = limit or deadline + burst
    best = None
    for gap in range(limit, burst, -1):
        if two_burst_ok(code, user, (start, burst), (start + gap, burst)):
            best = gap
        else:
            break
    return best


__all__ = [
    "CSV_COLUMNS", "ConverseReport", "ScenarioResult", "SweepReport", "converse_experiment",
    "converse_rate_bound", "run_scenario", "smallest_passing_spacing", "sweep", "t2_star",
    "two_burst_ok",
]
