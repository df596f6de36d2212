"""Time-invariant linear stream codes and the records shared by all decoders.

Every construction in this package reduces to one shape: at each slot ``t``
the channel symbol carries the ``n_source`` source sub-symbols ``s[t]`` plus
parity sub-symbols, where parity row ``k`` is a fixed linear combination

    q_k[t] = sum over taps (lag, row, coeff) of coeff * s_row[t - lag]

with source times below zero read as zero. Sub-symbol rows are numbered
from 1, matching ``s_1 .. s_T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .gf import GF

Symbol = tuple[int, int]  # (time, sub-symbol row), row counted from 1


class Tap(NamedTuple):
    lag: int
    row: int
    coeff: int


def merge_taps(taps: Iterable[Tap]) -> tuple[Tap, ...]:
    """Sum coefficients of taps hitting the same (lag, row); drop zeros."""
    acc: dict[tuple[int, int], int] = {}
    for tap in taps:
        key = (tap.lag, tap.row)
        acc[key] = acc.get(key, 0) ^ tap.coeff
    return tuple(Tap(lag, row, c) for (lag, row), c in sorted(acc.items()) if c)


class StreamCode:
    """Base for codes described by per-parity-row tap lists.

    Subclasses provide ``gf``, ``n_source`` and ``taps``.
    """

    gf: GF
    n_source: int

    @property
    def taps(self) -> tuple[tuple[Tap, ...], ...]:
        raise NotImplementedError

    @property
    def n_parity(self) -> int:
        return len(self.taps)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.n_source, self.n_source + self.n_parity)

    @property
    def max_lag(self) -> int:
        return max((tap.lag for row in self.taps for tap in row), default=0)

    def encode(self, source: np.ndarray) -> np.ndarray:
        """Parity array of shape (horizon, n_parity) for a source array."""
        source = np.asarray(source, dtype=np.int64)
        horizon = source.shape[0]
        out = np.zeros((horizon, self.n_parity), dtype=np.int64)
        for k, row_taps in enumerate(self.taps):
            acc = out[:, k]
            for lag, row, coeff in row_taps:
                if lag >= horizon:
                    continue
                acc[lag:] ^= self.gf.vmul(coeff, source[: horizon - lag, row - 1])
        return out

    def transmit(self, source: np.ndarray) -> "Stream":
        source = np.asarray(source, dtype=np.int64)
        return Stream(source, self.encode(source))

    def random_source(self, horizon: int, rng: np.random.Generator | int = 0) -> np.ndarray:
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        return self.gf.random((horizon, self.n_source), rng)


@dataclass(frozen=True)
class SourceSymbol:
    t: int
    subs: tuple[int, ...]


@dataclass(frozen=True)
class ParityVector:
    t: int
    checks: tuple[int, ...]


@dataclass(frozen=True)
class ChannelSymbol:
    t: int
    source: SourceSymbol
    q: ParityVector


@dataclass
class Stream:
    """A transmitted stream: source and parity arrays indexed by slot."""

    source: np.ndarray
    parity: np.ndarray

    def __len__(self) -> int:
        return self.source.shape[0]

    def __getitem__(self, t: int) -> ChannelSymbol:
        return ChannelSymbol(
            t,
            SourceSymbol(t, tuple(int(v) for v in self.source[t])),
            ParityVector(t, tuple(int(v) for v in self.parity[t])),
        )


@dataclass
class ReceivedStream:
    """What one receiver sees: erased slots hold zeros and are flagged."""

    source: np.ndarray
    parity: np.ndarray
    erased: np.ndarray  # bool mask over slots

    def __len__(self) -> int:
        return self.source.shape[0]

    def __getitem__(self, t: int) -> ChannelSymbol | None:
        if self.erased[t]:
            return None
        return Stream(self.source, self.parity)[t]

    @cached_property
    def erased_times(self) -> tuple[int, ...]:
        return tuple(int(t) for t in np.flatnonzero(self.erased))

    def is_erased(self, t: int) -> bool:
        return 0 <= t < len(self) and bool(self.erased[t])

    def source_value(self, sym: Symbol) -> int:
        t, r = sym
        return 0 if t < 0 else int(self.source[t, r - 1])

    def burst(self) -> tuple[int, int]:
        """(start, length) of the single erasure burst; (0, 0) if none."""
        times = self.erased_times
        if not times:
            return (0, 0)
        if times[-1] - times[0] + 1 != len(times):
            raise ValueError("erasures do not form a single burst")
        return (times[0], len(times))


class DecodeFailure(Exception):
    """Raised inside structural decoders; converted into a failed report."""

    def __init__(self, message: str, symbol: Symbol | None = None, stage: str | None = None):
        super().__init__(message)
        self.symbol = symbol
        self.stage = stage


@dataclass
class DecodeReport:
    """Recovery times and values for the erased sub-symbols of one scenario."""

    scenario: tuple[int, int]
    erased: tuple[Symbol, ...]
    recovered_at: dict[Symbol, int] = dc_field(default_factory=dict)
    values: dict[Symbol, int] = dc_field(default_factory=dict)
    failure: str | None = None
    decoder: str = "oracle"
    trace: list = dc_field(default_factory=list)

    @property
    def success(self) -> bool:
        return all(sym in self.recovered_at for sym in self.erased)

    @property
    def delays(self) -> dict[Symbol, int]:
        return {sym: at - sym[0] for sym, at in self.recovered_at.items()}

    @property
    def worst_delay(self) -> int | None:
        if not self.erased:
            return 0
        if not self.success:
            return None
        return max(self.recovered_at[s] - s[0] for s in self.erased)

    def missed(self, deadline: int) -> list[Symbol]:
        """Erased symbols not recovered within ``deadline`` slots, in time order."""
        return [
            s for s in self.erased
            if s not in self.recovered_at or self.recovered_at[s] - s[0] > deadline
        ]

    def within(self, deadline: int) -> bool:
        return self.failure is None and not self.missed(deadline)

    def check_values(self, source: np.ndarray) -> list[Symbol]:
        """Recovered symbols whose value disagrees with the true source."""
        return [s for s, v in self.values.items() if int(source[s[0], s[1] - 1]) != v]


def erased_symbols(received: ReceivedStream, n_source: int) -> tuple[Symbol, ...]:
    return tuple((t, r) for t in received.erased_times for r in range(1, n_source + 1))

