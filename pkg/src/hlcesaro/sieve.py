"""Von Mangoldt table, the Hardy-Littlewood count ``r(n)`` and its Cesaro sums.

``r(n) = sum over m1 + m2**2 == n, m1, m2 >= 1 of Lambda(m1)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, OutOfRange

MAX_N = 10**8


class Normalization(enum.Enum):
    """How the Cesaro weight is scaled.

    ``DIVIDED``: weights ``(1 - n/N)**k / Gamma(k+1)``.
    ``SCALED``: weights ``(N - n)**k / Gamma(k+1)``, i.e. ``N**k`` times larger.
    """

    DIVIDED = "divided"
    SCALED = "scaled"


@dataclass(frozen=True)
class CesaroQuery:
    n: int
    k: float
    normalization: Normalization = Normalization.DIVIDED

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidArgument(f"N must be a positive integer, got {self.n!r}")
        if self.n > MAX_N:
            raise OutOfRange(f"N={self.n} exceeds the supported maximum {MAX_N}")
        if not (isinstance(self.k, (int, float)) and math.isfinite(self.k) and self.k >= 0):
            raise InvalidArgument(f"k must be a finite real >= 0, got {self.k!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "normalization", Normalization(self.normalization))


class MangoldtTable:
    """``Lambda(m)`` for ``1 <= m <= limit``.

    Stored as the prime base of each prime power (0 elsewhere), so the
    values are exactly ``log(base)`` as computed by ``numpy.log``.
    """

    def __init__(self, limit: int, base: np.ndarray):
        self.limit = int(limit)
        self._base = base
        with np.errstate(divide="ignore"):
            logs = np.where(base > 0, np.log(np.maximum(base, 1)), 0.0)
        self._values = logs
        self._values.setflags(write=False)

    @property
    def values(self) -> np.ndarray:
        """Array indexed by ``m`` (entry 0 is 0.0)."""
        return self._values

    def prime_power_base(self, m: int) -> int:
        self._check(m)
        return int(self._base[m])

    def _check(self, m):
        if isinstance(m, bool) or int(m) != m:
            raise InvalidArgument(f"index must be an integer, got {m!r}")
        if m < 1 or m > self.limit:
            raise OutOfRange(f"index {m} outside 1..{self.limit}")

    def __getitem__(self, m: int) -> float:
        self._check(m)
        return float(self._values[int(m)])

    def __len__(self):
        return self.limit


def sieve_von_mangoldt(limit: int) -> MangoldtTable:
    """Build ``Lambda(m)`` for ``m <= limit`` with a sieve of Eratosthenes."""
    if isinstance(limit, bool) or int(limit) != limit or limit < 1:
        raise InvalidArgument(f"limit must be a positive integer, got {limit!r}")
    if limit > MAX_N:
        raise OutOfRange(f"limit {limit} exceeds {MAX_N}")
    limit = int(limit)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    base = np.zeros(limit + 1, dtype=np.int64)
    primes = np.flatnonzero(is_prime)
    base[primes] = primes
    for p in primes[primes <= math.isqrt(limit)]:
        q = int(p) * int(p)
        while q <= limit:
            base[q] = p
            q *= int(p)
    return MangoldtTable(limit, base)


def _neumaier_add(total, comp, x):
    y = total + x
    big = np.abs(total) >= np.abs(x)
    comp = comp + np.where(big, (total - y) + x, (x - y) + total)
    return y, comp


def r_hl_array(n_max: int, table: MangoldtTable) -> np.ndarray:
    """``r(n)`` for ``0 <= n <= n_max`` (entries 0..2 are 0).

    Each entry is a compensated sum over ``m2`` in ascending order.
    """
    if n_max > table.limit + 1:
        raise OutOfRange(f"table limit {table.limit} too small for n <= {n_max}")
    lam = table.values
    total = np.zeros(n_max + 1)
    comp = np.zeros(n_max + 1)
    m2 = 1
    while m2 * m2 + 1 <= n_max:
        sq = m2 * m2
        shifted = np.zeros(n_max + 1)
        shifted[sq + 1 :] = lam[1 : n_max - sq + 1]
        total, comp = _neumaier_add(total, comp, shifted)
        m2 += 1
    return total + comp


def r_hl(n: int, table: MangoldtTable) -> float:
    """``r(n) = sum_{m2 >= 1, n - m2**2 >= 1} Lambda(n - m2**2)``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    if n - 1 > table.limit:
        raise OutOfRange(f"table limit {table.limit} too small for n={n}")
    terms = [table[n - m * m] for m in range(1, math.isqrt(n - 1) + 1)]
    return math.fsum(terms)


def _mangoldt_trial(m):
    if m < 2:
        return 0.0
    for p in range(2, math.isqrt(m) + 1):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return math.log(p) if m == 1 else 0.0
    return math.log(m)


def r_hl_bruteforce(n: int) -> float:
    """Independent ``r(n)``: trial-division ``Lambda`` over every split ``n = m1 + m2**2``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    terms = []
    m2 = 1
    while m2 * m2 < n:
        terms.append(_mangoldt_trial(n - m2 * m2))
        m2 += 1
    return math.fsum(terms)


def cesaro_weights(query: CesaroQuery, n: np.ndarray) -> np.ndarray:
    denom = math.gamma(query.k + 1.0)
    if query.normalization is Normalization.DIVIDED:
        base = 1.0 - n / query.n
    else:
        base = (query.n - n).astype(float)
    return np.power(base, query.k) / denom


def cesaro_lhs(query: CesaroQuery, table: MangoldtTable | None = None, digits: int | None = None):
    """Weighted sum ``sum_{n <= N} r(n) w(n)`` summed in ascending ``n``.

    With ``digits`` set, the sum is recomputed in ``mpmath`` arithmetic at that
    many significant digits and returned as an ``mpmath.mpf``; the binary64
    path returns a float and uses :func:`math.fsum`.
    """
    query = query if isinstance(query, CesaroQuery) else CesaroQuery(*query)
    if table is None:
        table = sieve_von_mangoldt(max(query.n, 2))
    if table.limit < query.n - 1:
        raise OutOfRange(f"table limit {table.limit} below N-1={query.n - 1}")
    if digits is not None:
        return _cesaro_lhs_mp(query, table, int(digits))
    r = r_hl_array(query.n, table)
    n = np.arange(query.n + 1)
    w = cesaro_weights(query, n)
    return math.fsum((r[1:] * w[1:]).tolist())


def _cesaro_lhs_mp(query, table, digits):
    import mpmath

    with mpmath.workdps(digits):
        logs = {}
        total = mpmath.mpf(0)
        k = mpmath.mpf(query.k)
        big_n = mpmath.mpf(query.n)
        denom = mpmath.gamma(k + 1)
        for n in range(3, query.n + 1):
            r = mpmath.mpf(0)
            m2 = 1
            while m2 * m2 < n:
                p = int(table._base[n - m2 * m2])
                if p:
                    if p not in logs:
                        logs[p] = mpmath.log(p)
                    r += logs[p]
                m2 += 1
            if r:
                base = (1 - n / big_n) if query.normalization is Normalization.DIVIDED \
                    else (big_n - n)
                total += r * base**k
        return +(total / denom)
