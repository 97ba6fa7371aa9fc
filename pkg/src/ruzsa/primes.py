"""Prime tables and the computational checks behind the prime-in-(x, 2x/sqrt3] lemma.

Interval membership p <= 2x/sqrt(3) is always decided through the exact integer
form 3*p^2 <= 4*x^2.  Floating point appears only in the analytic inequality
obtained from Panaitopol's bounds on pi(x).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

__all__ = [
    "PrimeTable",
    "sieve",
    "is_prime",
    "next_prime",
    "prime_in_interval",
    "Lemma3Report",
    "verify_lemma3_range",
    "panaitopol_margin",
    "panaitopol_inequality_check",
    "panaitopol_monotone_check",
]


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: tuple[int, ...]

    def pi(self, x: float) -> int:
        """Number of primes not exceeding x (x must not exceed the table limit)."""
        if x > self.limit:
            raise ValueError(f"pi({x}) is beyond the table limit {self.limit}")
        return bisect.bisect_right(self.primes, x)

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, int):
            return False
        i = bisect.bisect_left(self.primes, n)
        return i < len(self.primes) and self.primes[i] == n

    def next_after(self, x: int) -> int | None:
        """Smallest listed prime strictly greater than x, or None past the table."""
        i = bisect.bisect_right(self.primes, x)
        return self.primes[i] if i < len(self.primes) else None


def sieve(limit: int) -> PrimeTable:
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(range(p * p, limit + 1, p)))
    return PrimeTable(limit, tuple(i for i, f in enumerate(flags) if f))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def next_prime(x: int) -> int:
    n = x + 1
    while not is_prime(n):
        n += 1
    return n


def _in_window(p: int, x: int) -> bool:
    return x < p and 3 * p * p <= 4 * x * x


def prime_in_interval(x: int, table: PrimeTable | None = None) -> int | None:
    """Smallest prime p with x < p <= 2x/sqrt(3), or None.

    The smallest prime above x is the only candidate worth testing: if it misses
    the window every larger prime does too.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    p = table.next_after(x) if table is not None else None
    if p is None:
        p = next_prime(x)
    return p if _in_window(p, x) else None


@dataclass(frozen=True)
class Lemma3Report:
    x_lo: int
    x_hi: int
    ok: bool
    # failing pair when not ok, otherwise the pair with the least slack
    witness_pair: tuple[int, int]
    pairs_checked: int

    def line(self) -> str:
        status = "OK" if self.ok else "FAIL"
        q, q2 = self.witness_pair
        return f"x_range=[{self.x_lo},{self.x_hi}] status={status} witness_pair=({q},{q2})"


def verify_lemma3_range(x_lo: int, x_hi: int, table: PrimeTable | None = None) -> Lemma3Report:
    """Check that (x, 2x/sqrt3] holds a prime for every real x in [x_lo, x_hi].

    For x in [q, q') with q, q' consecutive primes the smallest prime above x is
    q', and the window's right end grows with x, so each segment only needs its
    left end L = max(q, x_lo) tested: 3 q'^2 <= 4 L^2.
    """
    if not (33 <= x_lo <= x_hi):
        raise ValueError(f"need 33 <= x_lo <= x_hi, got ({x_lo}, {x_hi})")
    # q' for the last segment is below 2*x_hi (Bertrand), so this limit suffices
    limit = 2 * x_hi + 2
    if table is None or table.limit < limit:
        table = sieve(limit)
    primes = table.primes
    start = bisect.bisect_right(primes, x_lo) - 1  # largest prime <= x_lo
    worst: tuple[int, int] | None = None
    worst_slack: tuple[int, int] | None = None  # (num, den) of 3q'^2 / 4L^2
    checked = 0
    i = start
    while i + 1 < len(primes) and primes[i] <= x_hi:
        q, q2 = primes[i], primes[i + 1]
        lo = max(q, x_lo)
        checked += 1
        num, den = 3 * q2 * q2, 4 * lo * lo
        if num > den:
            return Lemma3Report(x_lo, x_hi, False, (q, q2), checked)
        if worst_slack is None or num * worst_slack[1] > worst_slack[0] * den:
            worst_slack = (num, den)
            worst = (q, q2)
        i += 1
    assert worst is not None
    return Lemma3Report(x_lo, x_hi, True, worst, checked)


_HALF_SQRT3 = math.sqrt(3.0) / 2.0


def panaitopol_margin(x: float) -> float:
    """LHS - RHS of the reduced inequality; natural logarithms throughout."""
    if not x > 1:
        raise ValueError(f"x must exceed 1, got {x}")
    lx = math.log(x)
    lhs = (1.0 - _HALF_SQRT3) * lx
    rhs = (
        1.0
        - _HALF_SQRT3
        + _HALF_SQRT3 * math.log(1.0 / _HALF_SQRT3)
        + lx ** -0.5
        + _HALF_SQRT3 * math.log(x / _HALF_SQRT3) ** -0.5
    )
    return lhs - rhs


def panaitopol_inequality_check(x: float) -> bool:
    return panaitopol_margin(x) >= 0.0


def panaitopol_monotone_check(x_lo: float, x_hi: float, steps: int) -> bool:
    """Grid evidence that the margin is nondecreasing on [x_lo, x_hi]; not a proof."""
    if not (1 < x_lo < x_hi):
        raise ValueError(f"need 1 < x_lo < x_hi, got ({x_lo}, {x_hi})")
    if steps < 2:
        raise ValueError(f"need at least 2 grid points, got {steps}")
    h = (x_hi - x_lo) / (steps - 1)
    values = [panaitopol_margin(x_lo + k * h) for k in range(steps)]
    return all(b >= a for a, b in zip(values, values[1:]))
