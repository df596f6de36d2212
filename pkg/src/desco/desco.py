"""Diversity-embedded streaming codes.

A rate T/(T+B) code for a strong receiver (burst B, delay T) that also
serves a weak receiver (burst alpha*B) with the smallest possible delay
alpha*T + B. Two single-user codes are combined:

* ``c1``: the (B, T) code along main diagonals, parity p^A;
* ``c2``: the (B, T) code along opposite diagonals with step alpha-1,
  i.e. an ((alpha-1)B, (alpha-1)T) code, parity p^B;

and the transmitted parity is q[t] = p^A[t] + p^B[t - (T + B)].
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple

from .gf import DEFAULT_BITS, GF
from .sco import MAIN, OPPOSITE, ScoCode, choose_coefficients, sco_parity
from .stream import (
    ChannelSymbol,
    DecodeFailure,
    DecodeReport,
    ParityVector,
    ReceivedStream,
    SourceSymbol,
    StreamCode,
    Symbol,
    Tap,
    erased_symbols,
    merge_taps,
)
from .structural import Knowledge, evaluate, solve_stage


def t2_star(B: int, T: int, alpha: int) -> int:
    """Smallest delay the weak receiver can get at rate T/(T+B)."""
    if alpha < 2:
        raise ValueError("alpha must be an integer >= 2")
    return alpha * T + B


@dataclass(frozen=True)
class DescoCode(StreamCode):
    c1: ScoCode
    c2: ScoCode
    alpha: int

    def __post_init__(self):
        c1, c2 = self.c1, self.c2
        if c1.orientation != MAIN or c1.ell != 1:
            raise ValueError("c1 must be a main-diagonal code with step 1")
        if c2.orientation != OPPOSITE or c2.ell != self.alpha - 1:
            raise ValueError("c2 must be an opposite-diagonal code with step alpha-1")
        if (c1.B, c1.T) != (c2.B, c2.T) or c1.m != c2.m:
            raise ValueError("component codes must share B, T and the field")

    @property
    def B(self) -> int:
        return self.c1.B

    @property
    def T(self) -> int:
        return self.c1.T

    @property
    def ell(self) -> int:
        return self.alpha - 1

    @property
    def delta(self) -> int:
        return self.T + self.B

    @property
    def B2(self) -> int:
        return self.alpha * self.B

    @property
    def T2(self) -> int:
        return t2_star(self.B, self.T, self.alpha)

    @property
    def m(self) -> int:
        return self.c1.m

    @property
    def gf(self) -> GF:
        return self.c1.gf

    @property
    def n_source(self) -> int:
        return self.T

    @cached_property
    def taps(self) -> tuple[tuple[Tap, ...], ...]:
        return tuple(
            merge_taps(list(a) + [Tap(lag + self.delta, r, c) for lag, r, c in b])
            for a, b in zip(self.c1.taps, self.c2.taps)
        )

    def q_form(self, k: int, t: int) -> list[tuple[Symbol, int]]:
        return self.c1.form(k, t) + self.c2.form(k, t - self.delta)

    def contract(self, user: int) -> tuple[int, int]:
        if user == 1:
            return (self.B, self.T)
        if user == 2:
            return (self.B2, self.T2)
        raise ValueError("user must be 1 or 2")

    @property
    def sweep_period(self) -> int:
        return self.T2 + self.delta

    def sweep_horizon(self, j: int, user: int) -> int:
        return j + self.B2 + self.T2 + self.delta + 1

    def decode(self, received: ReceivedStream, user: int) -> DecodeReport:
        if user == 1:
            return decode_user1(self, received)
        if user == 2:
            return decode_user2(self, received)
        raise ValueError("user must be 1 or 2")

    def to_dict(self) -> dict:
        return {"kind": "desco", "alpha": self.alpha, "c1": self.c1.to_dict(), "c2": self.c2.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DescoCode":
        return cls(ScoCode.from_dict(d["c1"]), ScoCode.from_dict(d["c2"]), int(d["alpha"]))


def desco_construct(B: int, T: int, alpha: int, m: int = DEFAULT_BITS) -> DescoCode:
    if not 1 <= B <= T:
        raise ValueError(f"need 1 <= B <= T, got B={B}, T={T}")
    if alpha < 2:
        raise ValueError("alpha must be an integer >= 2")
    c1 = choose_coefficients(B, T, MAIN, 1, m)
    c2 = choose_coefficients(B, T, OPPOSITE, alpha - 1, m)
    return DescoCode(c1, c2, alpha)


def desco_encode(code: DescoCode, history, i: int) -> ChannelSymbol:
    """Channel symbol at slot i, computed from the component parities."""
    pa = sco_parity(code.c1, history, i).checks
    pb = sco_parity(code.c2, history, i - code.delta).checks
    subs = tuple(int(history[i][r]) for r in range(code.T))
    return ChannelSymbol(i, SourceSymbol(i, subs), ParityVector(i, tuple(a ^ b for a, b in zip(pa, pb))))


class TraceEntry(NamedTuple):
    stage: str  # "1", "2", "3", "4.1" (Ind. 1), "4.2" (Ind. 2)
    k: int  # recursion index for stage 4, else 0
    kind: str  # "A" / "B" diagonal, or "pA" for a parity column
    index: int  # diagonal anchor or parity slot
    symbols: tuple[Symbol, ...]


def _report(code: DescoCode, received: ReceivedStream, known: Knowledge) -> DecodeReport:
    erased = erased_symbols(received, code.T)
    times = received.erased_times
    report = DecodeReport((times[0], len(times)) if times else (0, 0), erased, decoder="structural")
    for sym in erased:
        if sym in known.recovered:
            value, at = known.recovered[sym]
            report.values[sym] = value
            report.recovered_at[sym] = at
    return report


def _q(received: ReceivedStream, k: int, t: int) -> int:
    if t >= len(received):
        raise DecodeFailure(f"slot {t} beyond the simulated horizon", None, "horizon")
    if received.erased[t]:
        raise DecodeFailure(f"q[{t}] is erased", None, "schedule")
    return int(received.parity[t, k - 1])


def decode_user1(code: DescoCode, received: ReceivedStream) -> DecodeReport:
    """Strong receiver: strip the delayed p^B, then decode c1."""
    j, b = received.burst()
    known = Knowledge(received)
    report = _report(code, received, known)
    if b == 0:
        return report
    if b > code.B:
        raise ValueError(f"burst of {b} exceeds the strong receiver's B={code.B}")
    i = j + b
    gf = code.gf
    try:
        equations = []
        for t in range(i, i + code.T):
            for k in range(1, code.B + 1):
                pb, at = evaluate(gf, code.c2.form(k, t - code.delta), known, stage="cancel p^B")
                equations.append((max(t, at), code.c1.form(k, t), _q(received, k, t) ^ pb))
            report.trace.append(TraceEntry("cancel", 0, "pA", t, ()))
        known.record(solve_stage(gf, equations, report.erased, known, stage="c1"))
    except DecodeFailure as exc:
        report.failure = str(exc)
    trace = report.trace
    report = _report(code, received, known) if report.failure is None else report
    report.trace = trace
    return report


class User2State:
    """Decoder state for the weak receiver after parity exposure.

    The burst is taken to occupy [i - alpha*B, i - 1]; a shorter real burst
    is padded at its end and the padding slots are ignored.
    """

    def __init__(self, code: DescoCode, received: ReceivedStream):
        j, b = received.burst()
        if b > code.B2:
            raise ValueError(f"burst of {b} exceeds the weak receiver's alpha*B={code.B2}")
        self.code = code
        self.received = received
        self.j = j
        self.i = j + code.B2
        self.tau = self.i - code.B2 + code.T2  # non-urgent rows done before this slot
        self.known = Knowledge(received, range(j, self.i))
        self.pB: dict[tuple[int, int], tuple[int, int]] = {}
        self.pA: dict[tuple[int, int], tuple[int, int]] = {}
        self.trace: list[TraceEntry] = []

    @property
    def virtual(self) -> list[Symbol]:
        return [(t, r) for t in range(self.j, self.i) for r in range(1, self.code.T + 1)]

    def nonurgent(self, syms) -> list[Symbol]:
        return [s for s in syms if s[1] <= self.code.T - self.code.B]

    def erased_on(self, diag) -> list[Symbol]:
        return [s for s in diag.entries if self.j <= s[0] < self.i]

    def pb_equations(self, last_u: int):
        c2 = self.code.c2
        return [
            (at, c2.form(k, u), value)
            for (k, u), (value, at) in sorted(self.pB.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            if u <= last_u
        ]

    def pa_equations(self):
        c1 = self.code.c1
        return [
            (at, c1.form(k, t), value)
            for (k, t), (value, at) in sorted(self.pA.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]


def expose_parities(code: DescoCode, received: ReceivedStream) -> User2State:
    """Step 1: for t >= i+T, cancel p^A[t] (post-burst data only) to expose p^B[t - delta]."""
    state = User2State(code, received)
    gf = code.gf
    for t in range(state.i + code.T, state.i + code.T2):
        for k in range(1, code.B + 1):
            pa, at = evaluate(gf, code.c1.form(k, t), state.known, stage="step 1")
            state.pB[(k, t - code.delta)] = (_q(received, k, t) ^ pa, max(t, at))
    return state


def recursive_nonurgent_decode(code: DescoCode, state: User2State) -> list[TraceEntry]:
    """Recover every erased non-urgent sub-symbol in the staged order.

    1. non-urgent rows of d^B_{i-aB} .. d^B_{i-B-1} from p^B[t - delta],
       i+T <= t < tau;
    2. p^A[i] .. p^A[i+T-1] from q by cancelling now-computable p^B;
    3. non-urgent rows of d^A_{i-1} .. d^A_{i-B} from those p^A;
    4. for k = 1 .. T-B-1 alternate d^A_{i-B-k} (using d^B_j recovered for
       j <= i+(k-1)(a-1)-B-1) and d^B_{i-B+(k-1)(a-1)} .. d^B_{i-B+k(a-1)-1}
       (using d^A_j recovered for j >= i-B-(k-1)).
    """
    gf, c1, c2 = code.gf, code.c1, code.c2
    B, T, ell, i = code.B, code.T, code.ell, state.i
    known = state.known
    last_u = state.tau - 1 - code.delta
    trace = state.trace

    def run(stage, k, kind, anchors, equations, usable=None):
        sco = c1 if kind == "A" else c2
        groups = [(a, state.nonurgent(state.erased_on(sco.diagonal(a)))) for a in anchors]
        targets = [s for _, syms in groups for s in syms]
        found = solve_stage(gf, equations, targets, known, usable, stage=f"stage {stage}")
        known.record(found)
        for a, syms in groups:
            trace.append(TraceEntry(stage, k, kind, a, tuple(s for s in syms if s in found)))

    run("1", 0, "B", range(i - code.B2, i - B), state.pb_equations(last_u))

    for t in range(i, i + T):
        for k in range(1, B + 1):
            pb, at = evaluate(gf, c2.form(k, t - code.delta), known, stage="stage 2")
            state.pA[(k, t)] = (_q(state.received, k, t) ^ pb, max(t, at))
        trace.append(TraceEntry("2", 0, "pA", t, ()))

    run("3", 0, "A", range(i - 1, i - B - 1, -1), state.pa_equations())

    for k in range(1, T - B):
        bound1 = i + (k - 1) * ell - B - 1
        run("4.1", k, "A", [i - B - k], state.pa_equations(),
            lambda s, b=bound1: c2.anchor_of(s) <= b)
        bound2 = i - B - (k - 1)
        run("4.2", k, "B", range(i - B + (k - 1) * ell, i - B + k * ell), state.pb_equations(last_u),
            lambda s, b=bound2: c1.anchor_of(s) >= b)

    missing = [s for s in state.nonurgent(state.virtual) if s not in known.recovered]
    if missing:
        raise DecodeFailure(f"lemma: non-urgent {missing[0]} left unrecovered", missing[0], "lemma")
    return trace


def decode_user2(code: DescoCode, received: ReceivedStream) -> DecodeReport:
    """Weak receiver: parity exposure, staged non-urgent recovery, urgent rows last."""
    j, b = received.burst()
    if b == 0:
        return _report(code, received, Knowledge(received))
    state = User2State(code, received)
    failure = None
    try:
        state = expose_parities(code, received)
        recursive_nonurgent_decode(code, state)
        urgent = [s for s in state.virtual if s[1] > code.T - code.B]
        last_u = state.i - 1 + code.ell * code.T
        found = solve_stage(code.gf, state.pb_equations(last_u), urgent, state.known, stage="step 3")
        state.known.record(found)
    except DecodeFailure as exc:
        failure = str(exc)
    report = _report(code, received, state.known)
    report.trace = state.trace
    report.failure = failure
    return report
