"""Single-user (B, T) streaming erasure codes built on diagonal interleaving.

Each source symbol is split into T sub-symbols. Parity row k at slot i
combines the T sub-symbols lying on one diagonal of the (row, time) grid:

* main orientation, step l: row r of the diagonal anchored at a sits at
  slot a + (r-1)l and parity k reads the diagonal anchored at i - l(T+k-1);
* opposite orientation, step l: row r sits at a - (r-1)l and parity k reads
  the diagonal anchored at i - kl.

A code with step l corrects bursts of length lB with delay lT.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .channel import apply, single_burst
from .gf import DEFAULT_BITS, GF, field
from .oracle import oracle_decode
from .stream import (
    DecodeFailure,
    DecodeReport,
    ParityVector,
    ReceivedStream,
    StreamCode,
    Symbol,
    Tap,
    erased_symbols,
    merge_taps,
)
from .structural import Knowledge, solve_stage

MAIN = "main"
OPPOSITE = "opposite"


class ConstructionError(RuntimeError):
    """No certified coefficient table was found."""


@dataclass(frozen=True)
class DiagonalIndex:
    i: int
    entries: tuple[Symbol, ...]


def diagonal_main(i: int, T: int, ell: int = 1) -> DiagonalIndex:
    if T < 1 or ell < 1:
        raise ValueError("need T >= 1 and ell >= 1")
    return DiagonalIndex(i, tuple((i + (r - 1) * ell, r) for r in range(1, T + 1)))


def diagonal_opposite(i: int, T: int, ell: int = 1) -> DiagonalIndex:
    if T < 1 or ell < 1:
        raise ValueError("need T >= 1 and ell >= 1")
    return DiagonalIndex(i, tuple((i - (r - 1) * ell, r) for r in range(1, T + 1)))


@dataclass(frozen=True)
class Certification:
    certified: bool
    worst_delay: int | None
    scenarios: int
    counterexample: tuple[int, int, Symbol] | None = None  # (start, length, symbol)


@dataclass(frozen=True)
class ScoCode(StreamCode):
    """A (B, T) streaming code with a B x T coefficient table.

    ``coeffs[k-1][r-1]`` weighs row r of the diagonal read by parity k.
    """

    B: int
    T: int
    orientation: str = MAIN
    ell: int = 1
    coeffs: tuple[tuple[int, ...], ...] = ()
    m: int = DEFAULT_BITS
    certified: bool = False

    def __post_init__(self):
        if self.orientation not in (MAIN, OPPOSITE):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if self.T < 1 or self.B < 0 or self.ell < 1:
            raise ValueError("need T >= 1, B >= 0, ell >= 1")
        coeffs = self.coeffs or tuple((1,) * self.T for _ in range(self.B))
        coeffs = tuple(tuple(int(c) for c in row) for row in coeffs)
        if len(coeffs) != self.B or any(len(row) != self.T for row in coeffs):
            raise ValueError(f"coefficient table must be {self.B} x {self.T}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def gf(self) -> GF:
        return field(self.m)

    @property
    def n_source(self) -> int:
        return self.T

    @property
    def burst(self) -> int:
        return self.ell * self.B

    @property
    def delay(self) -> int:
        return self.ell * self.T

    def diagonal(self, a: int) -> DiagonalIndex:
        if self.orientation == MAIN:
            return diagonal_main(a, self.T, self.ell)
        return diagonal_opposite(a, self.T, self.ell)

    def anchor(self, k: int, i: int) -> int:
        """Anchor of the diagonal read by parity row k (1-based) at slot i."""
        if self.orientation == MAIN:
            return i - self.ell * (self.T + k - 1)
        return i - self.ell * k

    def parity_slot(self, k: int, a: int) -> int:
        """Slot at which parity row k covers the diagonal anchored at a."""
        if self.orientation == MAIN:
            return a + self.ell * (self.T + k - 1)
        return a + self.ell * k

    def anchor_of(self, sym: Symbol) -> int:
        t, r = sym
        if self.orientation == MAIN:
            return t - (r - 1) * self.ell
        return t + (r - 1) * self.ell

    def form(self, k: int, i: int) -> list[tuple[Symbol, int]]:
        """Parity row k at slot i as a linear form over source symbols."""
        diag = self.diagonal(self.anchor(k, i))
        return [(sym, c) for sym, c in zip(diag.entries, self.coeffs[k - 1]) if c]

    @cached_property
    def taps(self) -> tuple[tuple[Tap, ...], ...]:
        out = []
        for k in range(1, self.B + 1):
            out.append(merge_taps(
                Tap(-(t), r, c) for (t, r), c in self.form(k, 0)
            ))
        return tuple(out)

    def contract(self, user: int = 1) -> tuple[int, int]:
        if user != 1:
            raise ValueError("a single-user code has only receiver 1")
        return (self.burst, self.delay)

    @property
    def sweep_period(self) -> int:
        return self.ell * (self.T + self.B)

    def decode(self, received: ReceivedStream, user: int = 1) -> DecodeReport:
        return sco_decode_burst(self, received)

    def to_dict(self) -> dict:
        return {
            "kind": "sco", "B": self.B, "T": self.T, "orientation": self.orientation,
            "ell": self.ell, "m": self.m, "coeffs": [list(r) for r in self.coeffs],
            "certified": self.certified,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ScoCode":
        return cls(
            int(d["B"]), int(d["T"]), d["orientation"], int(d["ell"]),
            tuple(tuple(r) for r in d["coeffs"]), int(d["m"]), bool(d.get("certified", False)),
        )


def _history_value(history, t: int, r: int) -> int:
    if t < 0:
        return 0
    if callable(history):
        return int(history(t)[r - 1])
    if isinstance(history, Mapping):
        return int(history[t][r - 1]) if t in history else 0
    return int(history[t][r - 1])


def sco_parity(code: ScoCode, history, i: int) -> ParityVector:
    """Parity vector at slot i, read directly off the diagonals.

    ``history`` is an array indexed ``[t][row-1]``, a mapping from time to
    sub-symbol vectors, or a callable ``t -> vector``.
    """
    gf = code.gf
    checks = []
    for k in range(1, code.B + 1):
        diag = code.diagonal(code.anchor(k, i))
        acc = 0
        for (t, r), c in zip(diag.entries, code.coeffs[k - 1]):
            acc ^= gf.mul(c, _history_value(history, t, r))
        checks.append(acc)
    return ParityVector(i, tuple(checks))


def sco_decode_burst(code: ScoCode, received: ReceivedStream) -> DecodeReport:
    """Diagonal-by-diagonal decoding of a burst-erased single-user stream."""
    erased = erased_symbols(received, code.T)
    times = received.erased_times
    report = DecodeReport(
        (times[0], len(times)) if times else (0, 0), erased, decoder="structural"
    )
    if not erased:
        return report
    known = Knowledge(received)
    by_anchor: dict[int, list[Symbol]] = {}
    for sym in erased:
        by_anchor.setdefault(code.anchor_of(sym), []).append(sym)
    horizon = len(received)
    try:
        for a in sorted(by_anchor):
            equations = []
            for k in range(1, code.B + 1):
                t = code.parity_slot(k, a)
                if t < horizon and not received.erased[t]:
                    equations.append((t, code.form(k, t), int(received.parity[t, k - 1])))
            found = solve_stage(code.gf, equations, by_anchor[a], known, stage=f"diagonal {a}")
            known.record(found)
    except DecodeFailure as exc:
        report.failure = f"{exc} (deadline {exc.symbol[0] + code.delay})"
    for sym, (value, at) in known.recovered.items():
        report.recovered_at[sym] = at
        report.values[sym] = value
    if report.failure is None and not report.success:
        missing = next(s for s in erased if s not in report.recovered_at)
        report.failure = f"cannot recover {missing} (deadline {missing[0] + code.delay})"
    return report


def verify_code(code: ScoCode, seed: int = 0) -> Certification:
    """Exhaustive burst sweep with the oracle decoder over one period.

    Every start in [0, l(T+B)) and every length up to lB is tried on a
    zero-prefixed random stream; the code is certified iff every erased
    sub-symbol comes back, correctly, within lT slots.
    """
    if code.B == 0:
        return Certification(True, 0, 0)
    rng = np.random.default_rng(seed)
    worst, count = 0, 0
    for j in range(code.sweep_period):
        for b in range(1, code.burst + 1):
            horizon = j + code.burst + code.delay + 1
            stream = code.transmit(code.random_source(horizon, rng))
            received = apply(single_burst(j, b, horizon), stream)
            report = oracle_decode(code, received)
            count += 1
            missed = report.missed(code.delay) + report.check_values(stream.source)
            if missed:
                return Certification(False, None, count, (j, b, missed[0]))
            worst = max(worst, report.worst_delay)
    return Certification(True, worst, count)


def certify(code: ScoCode) -> ScoCode:
    result = verify_code(code)
    if not result.certified:
        raise ConstructionError(f"code fails at burst {result.counterexample}")
    return dataclasses.replace(code, certified=True)


def _cauchy(gf: GF, B: int, width: int) -> list[list[int]]:
    # x_k = k, y_j = B + j are distinct field elements, so x_k + y_j != 0
    return [[gf.inv(k ^ (B + j)) for j in range(width)] for k in range(B)]


def _layout(B: int, T: int, orientation: str, dense: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    """Urgent rows repeat one sub-symbol per parity; the rest carry ``dense``.

    Main orientation: rows 1..B are urgent (parity k repeats row k).
    Opposite orientation: rows T-B+1..T are urgent (parity k repeats row T-k+1).
    """
    rows = []
    for k in range(1, B + 1):
        if orientation == MAIN:
            row = [1 if r == k else 0 for r in range(1, B + 1)] + dense[k - 1]
        else:
            row = dense[k - 1] + [1 if r == T - k + 1 else 0 for r in range(T - B + 1, T + 1)]
        rows.append(tuple(row))
    return tuple(rows)


def candidate_tables(B: int, T: int, orientation: str, m: int, budget: int):
    """Coefficient tables in the fixed order they are tried."""
    gf = field(m)
    yield tuple((1,) * T for _ in range(B))
    if T <= gf.order:
        yield _layout(B, T, orientation, _cauchy(gf, B, T - B))
    for seed in range(budget):
        rng = np.random.default_rng(seed)
        dense = rng.integers(1, gf.order, size=(B, T - B)).tolist()
        yield _layout(B, T, orientation, dense)


def choose_coefficients(
    B: int,
    T: int,
    orientation: str = MAIN,
    ell: int = 1,
    m: int = DEFAULT_BITS,
    budget: int = 16,
) -> ScoCode:
    """First certified code among the deterministic candidate tables.

    Candidates: all-ones (XOR), then urgent-repetition plus a Cauchy block
    on the non-urgent rows, then seeded random blocks in the same layout.
    """
    if not 1 <= B <= T:
        raise ValueError(f"need 1 <= B <= T, got B={B}, T={T}")
    seen = set()
    for table in candidate_tables(B, T, orientation, m, budget):
        if table in seen:
            continue
        seen.add(table)
        code = ScoCode(B, T, orientation, ell, table, m)
        if verify_code(code).certified:
            return dataclasses.replace(code, certified=True)
    raise ConstructionError(
        f"no certified ({B},{T}) {orientation} code over GF(2^{m}) within budget {budget}"
    )


def sco_for(B: int, T: int, m: int = DEFAULT_BITS, orientation: str = MAIN) -> ScoCode:
    """A (B, T) code built by interleaving the reduced (B/g, T/g) code, g = gcd."""
    from math import gcd

    g = gcd(B, T)
    return choose_coefficients(B // g, T // g, orientation, g, m)
