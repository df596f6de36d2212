"""Arithmetic over GF(2^m) and incremental Gaussian elimination.

Scalars are plain ``int`` values in ``[0, 2^m)``; the vectorised helpers
accept numpy integer arrays. Addition is XOR. Multiplication goes through a
full product table for ``m <= 8`` and through log/antilog tables above that.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

# Reduction polynomials, one per field exponent. All are irreducible; all but
# m=8 are primitive. m=8 uses x^8+x^4+x^3+x+1 (0x11B), for which x is not a
# generator, so the log tables are built on the smallest generator instead.
POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

DEFAULT_BITS = 8


class InconsistentSystemError(ValueError):
    """A linear system has no solution; the received data is corrupted."""


def clmul_reduce(a: int, b: int, m: int, poly: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced modulo ``poly``."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return result


class GF:
    """The field GF(2^m).

    Use :func:`field` to get a cached instance rather than constructing one
    directly; table construction costs O(4^m) for small fields.
    """

    def __init__(self, m: int = DEFAULT_BITS):
        if m not in POLYNOMIALS:
            raise ValueError(f"unsupported field exponent m={m}")
        self.m = m
        self.order = 1 << m
        self.poly = POLYNOMIALS[m]
        self.generator = self._find_generator()
        n = self.order - 1
        exp = np.zeros(2 * n + 1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for k in range(n):
            exp[k] = x
            log[x] = k
            x = clmul_reduce(x, self.generator, m, self.poly)
        exp[n:2 * n] = exp[:n]
        exp[2 * n] = exp[0]
        self._exp = exp
        self._log = log
        self._inv = np.zeros(self.order, dtype=np.int64)
        self._inv[1:] = exp[(n - log[1:]) % n]
        self._table = None
        if m <= 8:
            a = np.arange(self.order)
            t = exp[(log[a][:, None] + log[a][None, :])]
            t[0, :] = 0
            t[:, 0] = 0
            self._table = t

    def _find_generator(self) -> int:
        n = self.order - 1
        for g in range(1, self.order):
            x, seen = 1, 0
            for _ in range(n):
                x = clmul_reduce(x, g, self.m, self.poly)
                seen += 1
                if x == 1:
                    break
            if seen == n:
                return g
        raise ValueError(f"polynomial {self.poly:#x} is not irreducible")

    def __repr__(self) -> str:
        return f"GF(2^{self.m})"

    # scalar operations
    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 1 if k == 0 else 0
        n = self.order - 1
        return int(self._exp[(self._log[a] * k) % n])

    def element(self, k: int) -> int:
        """The k-th power of the field generator."""
        return int(self._exp[k % (self.order - 1)])

    # vectorised operations
    def vmul(self, a, b):
        """Elementwise product of broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._table is not None:
            return self._table[a, b]
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        return self._inv[np.asarray(a, dtype=np.int64)]

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.order, size=shape, dtype=np.int64)


@lru_cache(maxsize=None)
def field(m: int = DEFAULT_BITS) -> GF:
    return GF(m)


@dataclass(frozen=True)
class FieldElement:
    """A single element of GF(2^m) with operator support."""

    value: int
    m: int = DEFAULT_BITS

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.m):
            raise ValueError(f"{self.value} is not an element of GF(2^{self.m})")

    def _check(self, other: "FieldElement") -> None:
        if other.m != self.m:
            raise ValueError("field exponents differ")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.value ^ other.value, self.m)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(field(self.m).mul(self.value, other.value), self.m)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(field(self.m).div(self.value, other.value), self.m)

    def inverse(self) -> "FieldElement":
        return FieldElement(field(self.m).inv(self.value), self.m)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


class LinearSystem:
    """Rows over GF(2^m) kept in reduced row-echelon form as they arrive.

    Each added row is reduced against the current pivots, normalised, and
    used to clear its pivot column from every other row. An unknown is
    determined exactly when some row has a single nonzero coefficient, at
    which point the row's constant is its value.
    """

    def __init__(self, unknowns: Sequence[Hashable], gf: GF | int = DEFAULT_BITS):
        self.gf = field(gf) if isinstance(gf, int) else gf
        self.unknowns = list(unknowns)
        self.index = {u: k for k, u in enumerate(self.unknowns)}
        if len(self.index) != len(self.unknowns):
            raise ValueError("duplicate unknown identifiers")
        n = len(self.unknowns)
        self._rows = np.zeros((max(n, 1), n + 1), dtype=np.int64)
        self._pivots: list[int] = []
        self.n_rows_added = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add_row(self, coeffs: Mapping[Hashable, int] | Sequence[int], constant: int = 0) -> bool:
        """Add one equation; return True if it increased the rank."""
        n = len(self.unknowns)
        v = np.zeros(n + 1, dtype=np.int64)
        if isinstance(coeffs, Mapping):
            for u, c in coeffs.items():
                v[self.index[u]] ^= c
        else:
            if len(coeffs) != n:
                raise ValueError(f"row width {len(coeffs)} != {n} unknowns")
            v[:n] = coeffs
        v[n] = constant
        return self._insert(v)

    def _insert(self, v: np.ndarray) -> bool:
        gf = self.gf
        n = len(self.unknowns)
        self.n_rows_added += 1
        k = len(self._pivots)
        if k:
            rows = self._rows[:k]
            f = v[self._pivots]
            nz = np.flatnonzero(f)
            if nz.size:
                v = v ^ np.bitwise_xor.reduce(gf.vmul(f[nz, None], rows[nz]), axis=0)
        lead = np.flatnonzero(v[:n])
        if lead.size == 0:
            if v[n]:
                raise InconsistentSystemError("equation contradicts earlier rows")
            return False
        p = int(lead[0])
        v = gf.vmul(gf.inv(int(v[p])), v)
        if k:
            rows = self._rows[:k]
            col = rows[:, p]
            nz = np.flatnonzero(col)
            if nz.size:
                rows[nz] ^= gf.vmul(col[nz, None], v[None, :])
        if k == self._rows.shape[0]:
            self._rows = np.vstack([self._rows, np.zeros_like(self._rows)])
        self._rows[k] = v
        self._pivots.append(p)
        return True

    def determined(self) -> dict[Hashable, int]:
        """Unknowns whose values are fixed by the rows added so far."""
        k = len(self._pivots)
        if not k:
            return {}
        n = len(self.unknowns)
        rows = self._rows[:k]
        single = np.count_nonzero(rows[:, :n], axis=1) == 1
        return {
            self.unknowns[self._pivots[r]]: int(rows[r, n])
            for r in np.flatnonzero(single)
        }

    def is_determined(self, u: Hashable) -> bool:
        return u in self.determined()


def solve_incremental(system: LinearSystem) -> dict[Hashable, int]:
    """Map each uniquely determined unknown of ``system`` to its value."""
    return system.determined()


def build_system(
    unknowns: Sequence[Hashable],
    rows: Iterable[tuple[Mapping[Hashable, int] | Sequence[int], int]],
    gf: GF | int = DEFAULT_BITS,
) -> LinearSystem:
    system = LinearSystem(unknowns, gf)
    for coeffs, constant in rows:
        system.add_row(coeffs, constant)
    return system
