"""Burst-erasure channel models.

A pattern erases whole channel symbols; a received slot is either the
transmitted symbol, bit for bit, or an erasure mark.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .stream import ReceivedStream, Stream


@dataclass(frozen=True)
class ErasurePattern:
    erased: frozenset[int]
    horizon: int

    def __post_init__(self):
        bad = [t for t in self.erased if not 0 <= t < self.horizon]
        if bad:
            raise ValueError(f"erasures {sorted(bad)} outside [0, {self.horizon})")

    def __or__(self, other: "ErasurePattern") -> "ErasurePattern":
        return ErasurePattern(self.erased | other.erased, max(self.horizon, other.horizon))

    def mask(self) -> np.ndarray:
        m = np.zeros(self.horizon, dtype=bool)
        m[list(self.erased)] = True
        return m

    def runs(self) -> list[tuple[int, int]]:
        """Maximal bursts as (start, length), in time order."""
        out: list[tuple[int, int]] = []
        for t in sorted(self.erased):
            if out and out[-1][0] + out[-1][1] == t:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((t, 1))
        return out

    def to_json(self) -> str:
        return json.dumps([list(run) for run in self.runs()])

    @classmethod
    def from_runs(cls, runs: Iterable[tuple[int, int]], horizon: int) -> "ErasurePattern":
        erased: set[int] = set()
        for start, length in runs:
            erased.update(range(start, start + length))
        return cls(frozenset(erased), horizon)

    @classmethod
    def from_json(cls, text: str, horizon: int) -> "ErasurePattern":
        return cls.from_runs([(int(s), int(n)) for s, n in json.loads(text)], horizon)


def single_burst(j: int, b: int, horizon: int) -> ErasurePattern:
    """Erase slots j .. j+b-1."""
    if j < 0 or b < 0 or j + b > horizon:
        raise ValueError(f"burst [{j}, {j + b}) does not fit in horizon {horizon}")
    return ErasurePattern(frozenset(range(j, j + b)), horizon)


def periodic_burst(period_erasures: int, period: int, horizon: int) -> ErasurePattern:
    """Erase the first ``period_erasures`` slots of every period."""
    if not 0 <= period_erasures <= period:
        raise ValueError("period_erasures must lie in [0, period]")
    erased = {t for t in range(horizon) if t % period < period_erasures}
    return ErasurePattern(frozenset(erased), horizon)


def spaced_bursts(bursts: Iterable[tuple[int, int]], horizon: int) -> ErasurePattern:
    return ErasurePattern.from_runs(bursts, horizon)


def apply(pattern: ErasurePattern, stream: Stream) -> ReceivedStream:
    if len(stream) < pattern.horizon:
        raise ValueError("stream shorter than pattern horizon")
    mask = np.zeros(len(stream), dtype=bool)
    mask[: pattern.horizon] = pattern.mask()
    source = stream.source.copy()
    parity = stream.parity.copy()
    source[mask] = 0
    parity[mask] = 0
    return ReceivedStream(source, parity, mask)
