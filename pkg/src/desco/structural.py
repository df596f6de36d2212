"""Building blocks for schedule-following decoders.

A structural decoder is a sequence of stages. Each stage names the symbols
it must recover, the parity equations it is allowed to use and which
previously recovered symbols it may substitute. An equation becomes usable
at the later of its arrival slot and the recovery slots of the symbols
substituted into it, so recovery times stay honest about dependencies.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .gf import GF, LinearSystem
from .stream import DecodeFailure, ReceivedStream, Symbol

Form = Sequence[tuple[Symbol, int]]
Equation = tuple[int, Form, int]  # (arrival slot, linear form, observed value)


class Knowledge:
    """Source values a decoder holds: unerased slots plus what it recovered."""

    def __init__(self, received: ReceivedStream, erased: Iterable[int] | None = None):
        self.received = received
        self.erased = frozenset(received.erased_times if erased is None else erased)
        self.recovered: dict[Symbol, tuple[int, int]] = {}

    def lookup(self, sym: Symbol, usable: Callable[[Symbol], bool] | None = None):
        """(value, slot known) for ``sym``, or None if the decoder lacks it."""
        t = sym[0]
        if t < 0:
            return (0, t)
        if t not in self.erased:
            if t >= len(self.received):
                return None
            return (self.received.source_value(sym), t)
        hit = self.recovered.get(sym)
        if hit is None or (usable is not None and not usable(sym)):
            return None
        return hit

    def record(self, found: dict[Symbol, tuple[int, int]]) -> None:
        for sym, vt in found.items():
            self.recovered.setdefault(sym, vt)


def evaluate(gf: GF, form: Form, known: Knowledge, usable=None, stage: str = "") -> tuple[int, int]:
    """Value of a linear form whose symbols must all be known."""
    value, at = 0, -(1 << 60)
    for sym, c in form:
        hit = known.lookup(sym, usable)
        if hit is None:
            raise DecodeFailure(f"{stage}: {sym} needed but not available", sym, stage)
        value ^= gf.mul(c, hit[0])
        at = max(at, hit[1])
    return value, at


def solve_stage(
    gf: GF,
    equations: Iterable[Equation],
    targets: Sequence[Symbol],
    known: Knowledge,
    usable: Callable[[Symbol], bool] | None = None,
    stage: str = "",
    require: bool = True,
) -> dict[Symbol, tuple[int, int]]:
    """Recover ``targets`` from ``equations``; map each to (value, slot)."""
    targets = [s for s in targets if known.lookup(s, usable) is None]
    if not targets:
        return {}
    rows = []
    unknown: dict[Symbol, None] = dict.fromkeys(targets)
    for arrival, form, observed in equations:
        rhs, at, terms = observed, arrival, {}
        for sym, c in form:
            hit = known.lookup(sym, usable)
            if hit is None:
                terms[sym] = terms.get(sym, 0) ^ c
            else:
                rhs ^= gf.mul(c, hit[0])
                at = max(at, hit[1])
        terms = {s: c for s, c in terms.items() if c}
        if terms:
            unknown.update(dict.fromkeys(terms))
            rows.append((at, terms, rhs))
    rows.sort(key=lambda row: row[0])
    system = LinearSystem(list(unknown), gf)
    found: dict[Symbol, tuple[int, int]] = {}
    wanted = set(targets)
    for n, (at, terms, rhs) in enumerate(rows):
        system.add_row(terms, rhs)
        if n + 1 < len(rows) and rows[n + 1][0] == at:
            continue
        for sym, value in system.determined().items():
            if sym in wanted and sym not in found:
                found[sym] = (value, at)
        if len(found) == len(wanted):
            break
    if require and len(found) < len(wanted):
        missing = next(s for s in targets if s not in found)
        raise DecodeFailure(f"{stage}: cannot recover {missing}", missing, stage)
    return found
