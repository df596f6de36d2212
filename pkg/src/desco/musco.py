"""Two-receiver streaming codes and the capacity region around them.

Receiver 1 sees bursts of up to B1 slots and needs delay T1; receiver 2
sees up to B2 = alpha*B1 slots and tolerates delay T2. Besides DE-SCo this
module provides:

* capacity: the known optimal rates as exact fractions;
* the converse bound from the periodic erasure channel;
* Cc-SCo: both single-user parity streams side by side;
* IA-SCo: the two parity streams added with a shift small enough that
  neither receiver is blocked by the other's checks;
* the rate-3/5 {(1,2),(2,4)} code obtained by running a {(2,3),(4,8)}
  DE-SCo on a source stream whose symbols are split in two.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Mapping

import numpy as np

from .desco import DescoCode, desco_construct, t2_star
from .gf import DEFAULT_BITS, GF
from .sco import MAIN, ConstructionError, ScoCode, choose_coefficients, sco_decode_burst, sco_for
from .stream import (
    DecodeFailure,
    DecodeReport,
    ReceivedStream,
    StreamCode,
    Symbol,
    Tap,
    erased_symbols,
    merge_taps,
)
from .structural import Knowledge, evaluate, solve_stage


class ParameterError(ValueError):
    """Parameters outside the domain an operation is defined on."""


class CertificationError(ConstructionError):
    """A constructed code misses one receiver's contract."""


@dataclass(frozen=True)
class MulticastParams:
    B1: int
    T1: int
    B2: int
    T2: int

    def __post_init__(self):
        if min(self.B1, self.T1, self.B2, self.T2) < 1:
            raise ParameterError("burst and delay parameters must be positive")
        if self.B1 >= self.B2:
            raise ParameterError("receiver 2 must see the longer burst (B1 < B2)")
        if self.B1 > self.T1:
            raise ParameterError("need B1 <= T1")

    @property
    def alpha(self) -> int:
        if self.B2 % self.B1:
            raise ParameterError(f"B2={self.B2} is not an integer multiple of B1={self.B1}")
        return self.B2 // self.B1

    @property
    def t2_star(self) -> int:
        return t2_star(self.B1, self.T1, self.alpha)


@dataclass(frozen=True)
class CapacityAnswer:
    region: str  # "a/b", "c", "f", "g", "d/e" (concatenation special case) or "open"
    rate: Fraction | None
    cases: tuple[tuple[str, Fraction], ...] = ()  # every matching case, for overlap checks


def capacity(p: MulticastParams) -> CapacityAnswer:
    """Optimal rate where it is known; the first matching case names the region."""
    a, B1, T1, B2, T2 = p.alpha, p.B1, p.T1, p.B2, p.T2
    star = a * T1 + B1
    cases = []
    if T2 >= star:
        cases.append(("a/b", Fraction(T1, T1 + B1)))
    if max(B2, T1) + B1 <= T2 <= star:
        cases.append(("c", Fraction(T2 - B1, T2 - B1 + B2)))
    if T1 <= T2 <= T1 + B1 and B2 <= T1:
        cases.append(("f", Fraction(T1, T1 + B2)))
    if T2 <= T1:
        cases.append(("g", Fraction(T2, T2 + B2)))
    if cases:
        rates = {r for _, r in cases}
        if len(rates) != 1:
            raise AssertionError(f"overlapping capacity cases disagree: {cases}")
        return CapacityAnswer(cases[0][0], cases[0][1], tuple(cases))
    if T1 == B1 and T2 == B2:
        return CapacityAnswer("d/e", cc_rate(B1, T1, B2, T2))
    return CapacityAnswer("open", None)


def cc_rate(B1: int, T1: int, B2: int, T2: int) -> Fraction:
    """Rate of carrying both single-user parity streams."""
    return Fraction(T1 * T2, T1 * T2 + B1 * T2 + B2 * T1)


def converse_rate_bound(B: int, T2: int, alpha: int) -> Fraction:
    """Largest rate any code can have if receiver 2 needs delay T2.

    Comes from a channel whose every period of (alpha-1)B + T2 slots starts
    with alpha*B erasures.
    """
    if alpha < 2 or T2 < 1:
        raise ParameterError("need alpha >= 2 and T2 >= 1")
    return 1 - Fraction(alpha * B, (alpha - 1) * B + T2)


class _TwoUser(StreamCode):
    """Shared plumbing for the multicast codes below."""

    def contract(self, user: int) -> tuple[int, int]:
        raise NotImplementedError

    def sweep_horizon(self, j: int, user: int) -> int:
        burst, delay = self.contract(user)
        return j + burst + delay + self.max_lag + 1

    def _check_user(self, user: int) -> None:
        if user not in (1, 2):
            raise ValueError("user must be 1 or 2")


def _restricted(received: ReceivedStream, rows: list[int], parity_rows: list[int]) -> ReceivedStream:
    return ReceivedStream(received.source[:, rows], received.parity[:, parity_rows], received.erased)


def _merge_reports(received: ReceivedStream, n_source: int, parts) -> DecodeReport:
    """Combine per-copy reports; ``parts`` yields (report, source-row map)."""
    times = received.erased_times
    report = DecodeReport((times[0], len(times)) if times else (0, 0),
                          erased_symbols(received, n_source), decoder="structural")
    for sub, rows in parts:
        for (t, r), at in sub.recovered_at.items():
            report.recovered_at[(t, rows[r - 1] + 1)] = at
            report.values[(t, rows[r - 1] + 1)] = sub.values[(t, r)]
        if sub.failure and report.failure is None:
            report.failure = sub.failure
    return report


@dataclass(frozen=True)
class CcSco(_TwoUser):
    """Concatenation of a (B1, T1) and a (B2, T2) single-user code.

    Each source symbol has L = lcm(c1.T, c2.T) sub-symbols; component code
    c carries L / c.T copies, copy n covering rows n*c.T+1 .. (n+1)*c.T.
    """

    c1: ScoCode
    c2: ScoCode

    @property
    def gf(self) -> GF:
        return self.c1.gf

    @property
    def m(self) -> int:
        return self.c1.m

    @property
    def n_source(self) -> int:
        return lcm(self.c1.T, self.c2.T)

    def _copies(self, user: int):
        """(component, source rows, parity rows) for every copy a user decodes."""
        comp = self.c1 if user == 1 else self.c2
        first = 0 if user == 1 else self.n_source // self.c1.T * self.c1.B
        out = []
        for n in range(self.n_source // comp.T):
            rows = list(range(n * comp.T, (n + 1) * comp.T))
            prow = list(range(first + n * comp.B, first + (n + 1) * comp.B))
            out.append((comp, rows, prow))
        return out

    @cached_property
    def taps(self) -> tuple[tuple[Tap, ...], ...]:
        out = []
        for user in (1, 2):
            for comp, rows, _ in self._copies(user):
                for row_taps in comp.taps:
                    out.append(tuple(Tap(lag, rows[r - 1] + 1, c) for lag, r, c in row_taps))
        return tuple(out)

    def contract(self, user: int) -> tuple[int, int]:
        self._check_user(user)
        comp = self.c1 if user == 1 else self.c2
        return (comp.burst, comp.delay)

    @property
    def sweep_period(self) -> int:
        return max(self.c1.sweep_period, self.c2.sweep_period)

    def decode(self, received: ReceivedStream, user: int) -> DecodeReport:
        """Single-user decoding of every copy, ignoring the other receiver's rows."""
        self._check_user(user)
        parts = []
        for comp, rows, prow in self._copies(user):
            parts.append((sco_decode_burst(comp, _restricted(received, rows, prow)), rows))
        return _merge_reports(received, self.n_source, parts)

    def to_dict(self) -> dict:
        return {"kind": "ccsco", "c1": self.c1.to_dict(), "c2": self.c2.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "CcSco":
        return cls(ScoCode.from_dict(d["c1"]), ScoCode.from_dict(d["c2"]))


def ccsco_construct(p: MulticastParams, m: int = DEFAULT_BITS) -> CcSco:
    return CcSco(sco_for(p.B1, p.T1, m), sco_for(p.B2, p.T2, m))


@dataclass(frozen=True)
class IaSco(_TwoUser):
    """q[t] = p_A[t] + p_B[t - shift].

    p_A comes from the (B, T) main-diagonal code, p_B from the same shape
    interleaved with step alpha, an (alpha*B, alpha*T) code. ``t2`` is the
    worst delay receiver 2 achieved during construction.
    """

    c1: ScoCode
    c2: ScoCode
    alpha: int
    shift: int
    t2: int | None = None

    def __post_init__(self):
        if self.shift < 0:
            raise ParameterError("shift must be non-negative")
        if self.c2.ell != self.alpha or self.c2.orientation != MAIN:
            raise ParameterError("c2 must be a main-diagonal code with step alpha")

    @property
    def gf(self) -> GF:
        return self.c1.gf

    @property
    def m(self) -> int:
        return self.c1.m

    @property
    def B(self) -> int:
        return self.c1.B

    @property
    def T(self) -> int:
        return self.c1.T

    @property
    def n_source(self) -> int:
        return self.T

    @cached_property
    def taps(self) -> tuple[tuple[Tap, ...], ...]:
        return tuple(
            merge_taps(list(a) + [Tap(lag + self.shift, r, c) for lag, r, c in b])
            for a, b in zip(self.c1.taps, self.c2.taps)
        )

    def contract(self, user: int) -> tuple[int, int]:
        self._check_user(user)
        if user == 1:
            return (self.B, self.T)
        # before construction finishes, allow a generous deadline to measure against
        t2 = self.t2 if self.t2 is not None else self.alpha * (self.T + self.B) + self.shift + self.T
        return (self.alpha * self.B, t2)

    @property
    def sweep_period(self) -> int:
        return self.alpha * (self.T + self.B) + self.shift

    def decode(self, received: ReceivedStream, user: int) -> DecodeReport:
        """Cancel the other receiver's checks wherever they are fully known, then solve."""
        self._check_user(user)
        if user == 1:
            own, own_shift, other, other_shift = self.c1, 0, self.c2, self.shift
        else:
            own, own_shift, other, other_shift = self.c2, self.shift, self.c1, 0
        known = Knowledge(received)
        times = received.erased_times
        report = DecodeReport((times[0], len(times)) if times else (0, 0),
                              erased_symbols(received, self.T), decoder="structural")
        if not times:
            return report
        gf = self.gf
        equations = []
        for t in range(times[0], len(received)):
            if received.erased[t]:
                continue
            for k in range(1, self.B + 1):
                try:
                    v, at = evaluate(gf, other.form(k, t - other_shift), known)
                except DecodeFailure:
                    continue
                equations.append((max(t, at), own.form(k, t - own_shift), int(received.parity[t, k - 1]) ^ v))
        try:
            known.record(solve_stage(gf, equations, report.erased, known, stage=f"user {user}"))
        except DecodeFailure as exc:
            report.failure = str(exc)
        for sym, (value, at) in known.recovered.items():
            report.recovered_at[sym] = at
            report.values[sym] = value
        return report

    def to_dict(self) -> dict:
        return {"kind": "iasco", "alpha": self.alpha, "shift": self.shift, "t2": self.t2,
                "c1": self.c1.to_dict(), "c2": self.c2.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "IaSco":
        t2 = d.get("t2")
        return cls(ScoCode.from_dict(d["c1"]), ScoCode.from_dict(d["c2"]), int(d["alpha"]),
                   int(d["shift"]), None if t2 is None else int(t2))


def iasco_construct(B: int, T: int, alpha: int, shift: int, m: int = DEFAULT_BITS) -> IaSco:
    """Build and certify; ``t2`` of the result is receiver 2's achieved worst delay."""
    from .harness import sweep

    if alpha < 2:
        raise ParameterError("alpha must be an integer >= 2")
    if shift < 0:
        raise ParameterError("shift must be non-negative")
    c1 = choose_coefficients(B, T, MAIN, 1, m)
    c2 = choose_coefficients(B, T, MAIN, alpha, m)
    code = IaSco(c1, c2, alpha, shift)
    rep1 = sweep(code, 1)
    if not rep1.certified:
        raise CertificationError(f"receiver 1 contract ({B},{T}) violated: {rep1.failures()[0]}")
    rep2 = sweep(code, 2)
    if not rep2.certified:
        raise CertificationError(f"receiver 2 burst {alpha * B} not corrected: {rep2.failures()[0]}")
    return dataclasses.replace(code, t2=rep2.worst_delay)


def iasco_best_shift(B: int, T: int, alpha: int, m: int = DEFAULT_BITS, max_shift: int | None = None) -> IaSco:
    """Certified IA-SCo with the smallest receiver-2 delay over shifts 0..max_shift."""
    best = None
    for shift in range(0, (max_shift if max_shift is not None else T + B) + 1):
        try:
            code = iasco_construct(B, T, alpha, shift, m)
        except CertificationError:
            continue
        if best is None or code.t2 < best.t2:
            best = code
    if best is None:
        raise CertificationError(f"no shift certifies IA-SCo ({B},{T}), alpha={alpha}")
    return best


def source_expand(source) -> np.ndarray:
    """Split each 6-row symbol s[i] into ts[2i] = rows 1-3 and ts[2i+1] = rows 4-6."""
    source = np.asarray(source)
    if source.ndim != 2 or source.shape[1] != 6:
        raise ParameterError("each source symbol must have 6 sub-symbols")
    return source.reshape(2 * source.shape[0], 3)


def source_collapse(expanded) -> np.ndarray:
    """Inverse of ``source_expand``; also pairs parity slots (tq[2i], tq[2i+1])."""
    expanded = np.asarray(expanded)
    if expanded.shape[0] % 2:
        raise ParameterError("expanded stream must have an even number of slots")
    return expanded.reshape(expanded.shape[0] // 2, 2 * expanded.shape[1])


def expand_mask(erased) -> np.ndarray:
    return np.repeat(np.asarray(erased, dtype=bool), 2)


@dataclass(frozen=True)
class ExpandedMusco(_TwoUser):
    """Rate-3/5 code for {(1,2),(2,4)}: a {(2,3),(4,8)} DE-SCo on the split stream.

    Each slot carries 6 source rows and 4 parity rows; parity rows 1-2 are
    the inner code's checks at expanded slot 2i, rows 3-4 those at 2i+1.
    """

    inner: DescoCode

    def __post_init__(self):
        if (self.inner.B, self.inner.T, self.inner.alpha) != (2, 3, 2):
            raise ParameterError("the expansion is defined for the {(2,3),(4,8)} DE-SCo only")

    @property
    def gf(self) -> GF:
        return self.inner.gf

    @property
    def m(self) -> int:
        return self.inner.m

    @property
    def n_source(self) -> int:
        return 6

    @cached_property
    def taps(self) -> tuple[tuple[Tap, ...], ...]:
        out = []
        for e in (0, 1):
            for row_taps in self.inner.taps:
                shifted = []
                for lag, r, c in row_taps:
                    d = e - lag  # expanded slot 2i+e reads 2i+d
                    shifted.append(Tap(-(d // 2), (d % 2) * 3 + r, c))
                out.append(merge_taps(shifted))
        return tuple(out)

    def contract(self, user: int) -> tuple[int, int]:
        self._check_user(user)
        return (1, 2) if user == 1 else (2, 4)

    @property
    def sweep_period(self) -> int:
        return (self.inner.sweep_period + 1) // 2 + 1

    def sweep_horizon(self, j: int, user: int) -> int:
        return (self.inner.sweep_horizon(2 * j, user) + 1) // 2 + 1

    def expand(self, received: ReceivedStream) -> ReceivedStream:
        parity = received.parity.reshape(2 * len(received), 2)
        return ReceivedStream(source_expand(received.source), parity, expand_mask(received.erased))

    def decode(self, received: ReceivedStream, user: int) -> DecodeReport:
        """Decode on the expanded timeline; expanded slot n arrives in slot n // 2."""
        self._check_user(user)
        inner = self.inner.decode(self.expand(received), user)
        times = received.erased_times
        report = DecodeReport((times[0], len(times)) if times else (0, 0),
                              erased_symbols(received, 6), decoder="structural",
                              failure=inner.failure, trace=inner.trace)
        for (n, r), at in inner.recovered_at.items():
            sym = (n // 2, (n % 2) * 3 + r)
            report.recovered_at[sym] = at // 2
            report.values[sym] = inner.values[(n, r)]
        return report

    def to_dict(self) -> dict:
        return {"kind": "expanded", "inner": self.inner.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExpandedMusco":
        return cls(DescoCode.from_dict(d["inner"]))


def expanded_musco_construct(m: int = DEFAULT_BITS) -> ExpandedMusco:
    return ExpandedMusco(desco_construct(2, 3, 2, m))


_KINDS = {"desco": DescoCode, "ccsco": CcSco, "iasco": IaSco, "expanded": ExpandedMusco}


def code_from_dict(d: Mapping):
    """Rebuild any code from its JSON descriptor."""
    kind = d.get("kind", "sco")
    if kind == "sco":
        return ScoCode.from_dict(d)
    try:
        return _KINDS[kind].from_dict(d)
    except KeyError as exc:
        raise ParameterError(f"unknown code kind {kind!r}") from exc

