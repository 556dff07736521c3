"""Mobius sieve and the elementary identities built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MobiusTable:
    """Read-only table of mu(k) for 1 <= k <= limit.

    ``values`` has length ``limit + 1``; index 0 is a zero pad so that
    ``values[k] == mu(k)``.
    """

    limit: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    def __getitem__(self, k):
        return self.values[k]

    def mu(self, k: int) -> int:
        if not 1 <= k <= self.limit:
            raise IndexError(f"{k} outside 1..{self.limit}")
        return int(self.values[k])


def _small_primes(bound: int) -> np.ndarray:
    is_p = np.ones(bound + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, int(bound**0.5) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p)


def sieve_mobius(limit: int, segment: int = 1 << 22) -> MobiusTable:
    """Segmented sieve of mu(1..limit) into an int8 array.

    Primes up to sqrt(limit) flip signs and zero square multiples; any leftover
    cofactor after dividing out the small primes is a single large prime,
    which flips the sign once more. Memory is the int8 output plus one int64
    segment.
    """
    if limit < 1:
        raise ValueError("limit must be a positive integer")
    mu = np.zeros(limit + 1, dtype=np.int8)
    primes = _small_primes(int(limit**0.5) + 1)
    for lo in range(1, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        k = np.arange(lo, hi, dtype=np.int64)
        sign = np.ones(hi - lo, dtype=np.int8)
        rest = k.copy()
        for p in primes:
            if p * p >= hi:
                break
            start = (-lo) % p
            sign[start::p] *= -1
            rest[start::p] //= p
            q = p * p
            sq = (-lo) % q
            sign[sq::q] = 0
        sign[rest > 1] *= -1
        mu[lo:hi] = sign
    return MobiusTable(limit, mu)


def _check_range(table: MobiusTable, n: int) -> None:
    if n < 1:
        raise ValueError("argument must be a positive integer")
    if n > table.limit:
        raise IndexError(f"{n} exceeds sieve limit {table.limit}")


def mertens(table: MobiusTable, n: int) -> int:
    _check_range(table, n)
    return int(table.values[1 : n + 1].sum(dtype=np.int64))


def mobius_floor_sum(table: MobiusTable, N: int) -> int:
    """Exact integer sum_{a <= N} mu(a) * floor(N / a); always 1."""
    _check_range(table, N)
    a = np.arange(1, N + 1, dtype=np.int64)
    return int(np.dot(table.values[1 : N + 1].astype(np.int64), N // a))


def divisor_sums(table: MobiusTable, limit: int | None = None) -> np.ndarray:
    """Array ``d`` with ``d[m] = sum_{a | m} mu(a)`` for m <= limit."""
    limit = table.limit if limit is None else limit
    _check_range(table, limit)
    d = np.zeros(limit + 1, dtype=np.int64)
    for a in np.flatnonzero(table.values[1 : limit + 1]) + 1:
        d[a::a] += table.values[a]
    return d


def mobius_floor_sums_upto(table: MobiusTable, N: int) -> np.ndarray:
    """All floor sums S(1..N) at once.

    S(M) - S(M - 1) counts the divisor sum of M, so the whole sequence is a
    cumulative sum of ``divisor_sums``; index 0 is a zero pad.
    """
    return np.cumsum(divisor_sums(table, N))


def jordan_totient2(limit: int) -> np.ndarray:
    """J_2(d) = d^2 prod_{p | d} (1 - p^-2) for d <= limit (float64, index 0 pad).

    Used through gcd(a, b)^2 = sum_{d | gcd} J_2(d).
    """
    j = np.arange(limit + 1, dtype=np.float64) ** 2
    seen = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if seen[p]:
            continue
        seen[p::p] = True
        j[p::p] *= 1.0 - 1.0 / (p * p)
    return j
