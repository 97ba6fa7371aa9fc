"""Exact Ruzsa numbers, minimal bases and K_m for small moduli.

Two independent solvers:

* ``oracle_ruzsa`` enumerates every subset of Z_m (vectorised over all 2^m
  indicator vectors) and is the arbiter for m <= 18.
* ``exact_ruzsa``, ``min_cover`` and ``k_min`` share one depth-first
  branch-and-bound that grows sets in increasing element order.

The branch-and-bound visits sets in lexicographic order of their sorted element
lists, so the first hit is the lexicographically smallest witness.  Symmetry
pruning keeps only sets that can be the lexicographically least member of their
affine orbit {u*A + t : gcd(u, m) = 1}.  Every affine map permutes the sigma
counts, so max and min sigma and |A| are orbit invariants, and the overall
lexicographically least optimum is itself orbit-least.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .residues import ResidueSet, sigma_profile

__all__ = [
    "BudgetExhausted",
    "ExactResult",
    "CoverResult",
    "KResult",
    "DEFAULT_BUDGET",
    "ORACLE_MAX_M",
    "oracle_ruzsa",
    "feasible",
    "exact_ruzsa",
    "min_cover",
    "k_min",
]

DEFAULT_BUDGET = 10**9
ORACLE_MAX_M = 18


class BudgetExhausted(RuntimeError):
    """The node budget ran out; ``lower``/``upper`` bracket the unknown quantity."""

    def __init__(self, what: str, m: int, lower: int, upper: int | None, nodes: int):
        self.what = what
        self.m = m
        self.lower = lower
        self.upper = upper
        self.nodes = nodes
        hi = "?" if upper is None else str(upper)
        super().__init__(f"{what} for m={m} unknown: bounded in [{lower}, {hi}] after {nodes} nodes")


@dataclass(frozen=True)
class ExactResult:
    modulus: int
    r_m: int
    witness: ResidueSet
    nodes_explored: int


@dataclass(frozen=True)
class CoverResult:
    modulus: int
    c_m: int
    witness: ResidueSet
    nodes_explored: int

    @property
    def ell_m(self) -> Fraction:
        # sum_n sigma_A(n) = |A|^2, so the least mean is c_m^2 / m
        return Fraction(self.c_m**2, self.modulus)


@dataclass(frozen=True)
class KResult:
    modulus: int
    k_m: int
    witness: ResidueSet
    nodes_explored: int


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

def oracle_ruzsa(m: int) -> ExactResult:
    """R_m by enumerating all 2^m subsets; witness is the lexicographically least."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > ORACLE_MAX_M:
        raise ValueError(f"oracle limited to m <= {ORACLE_MAX_M}, got {m}")
    masks = np.arange(1, 1 << m, dtype=np.int64)
    ind = ((masks[:, None] >> np.arange(m)) & 1).astype(np.int8)
    lo = np.full(masks.size, np.iinfo(np.int64).max, dtype=np.int64)
    hi = np.zeros(masks.size, dtype=np.int64)
    for n in range(m):
        partner = [(n - x) % m for x in range(m)]
        sig = (ind * ind[:, partner]).sum(axis=1, dtype=np.int64)
        np.minimum(lo, sig, out=lo)
        np.maximum(hi, sig, out=hi)
    good = lo >= 1
    r = int(hi[good].min())
    best = None
    for mask in masks[good & (hi == r)].tolist():
        elems = [x for x in range(m) if mask >> x & 1]
        if best is None or elems < best:
            best = elems
    return ExactResult(m, r, ResidueSet(m, tuple(best)), int(masks.size))


# ---------------------------------------------------------------------------
# branch-and-bound
# ---------------------------------------------------------------------------

class _Search:
    """Find the lexicographically least A with A + A = Z_m, sigma <= cap, |A| <= size_max."""

    def __init__(self, m: int, cap: int, size_max: int, canonical: bool, budget: int,
                 gain_bound: bool = False):
        self.m = m
        # worth its cost only when size_max is tight (iterative deepening on |A|)
        self.gain_bound = gain_bound
        self.cap = cap
        self.size_max = size_max
        self.canonical = canonical
        self.budget = budget
        self.nodes = 0
        self.full = (1 << m) - 1
        self.counts = [0] * m
        self.elems: list[int] = []
        self.covered = 0  # bitmask of residues with sigma >= 1
        self.amask = 0  # bitmask of elems
        self.gcd_floor = 1

    def _rot(self, mask: int, k: int) -> int:
        m = self.m
        k %= m
        if not k:
            return mask
        return ((mask << k) | (mask >> (m - k))) & self.full

    def _addable(self, x: int) -> bool:
        counts, m, cap = self.counts, self.m, self.cap
        if counts[2 * x % m] + 1 > cap:
            return False
        limit = cap - 2
        for a in self.elems:
            if counts[(x + a) % m] > limit:
                return False
        if self.gcd_floor > 1:
            g = self.gcd_floor
            for a in self.elems:
                if math.gcd(x - a, m) < g:
                    return False
        return True

    def _push(self, x: int) -> None:
        counts, m = self.counts, self.m
        bits = 0
        for a in self.elems:
            s = (x + a) % m
            counts[s] += 2
            bits |= 1 << s
        s = 2 * x % m
        counts[s] += 1
        bits |= 1 << s
        self.elems.append(x)
        self.amask |= 1 << x
        self.saved.append(self.covered)
        self.covered |= bits

    def _pop(self) -> None:
        counts, m = self.counts, self.m
        x = self.elems.pop()
        self.amask &= ~(1 << x)
        for a in self.elems:
            counts[(x + a) % m] -= 2
        counts[2 * x % m] -= 1
        self.covered = self.saved.pop()

    def run(self) -> list[int] | None:
        self.saved: list[int] = []
        m = self.m
        if self.canonical:
            if self.size_max < 1:
                return None
            self._push(0)
            found = self._dfs(0)
            return found
        return self._dfs(-1)

    def _dfs(self, last: int) -> list[int] | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        m = self.m
        if self.covered == self.full:
            return list(self.elems)
        s = len(self.elems)
        if self.canonical and 3 <= s <= _IMAGE_CHECK_DEPTH and self._image_smaller(last):
            return None
        room = self.size_max - s
        if room <= 0:
            return None
        # a new element joining a set of size t creates at most t + 1 new sums
        uncovered = m - self.covered.bit_count()
        if room * s + room * (room + 1) // 2 < uncovered:
            return None
        future = [x for x in range(last + 1, m) if self._addable(x)]
        if not future:
            return None
        # top gains against the current set, plus at most room*(room-1)/2 sums
        # among the new elements themselves
        if self.gain_bound:
            holes = self.full & ~self.covered
            amask = self.amask
            gains = sorted(
                ((self._rot(amask, x) & holes).bit_count() + (holes >> (2 * x % m) & 1) for x in future),
                reverse=True,
            )
            if sum(gains[:room]) + room * (room - 1) // 2 < uncovered:
                return None
        # every uncovered residue must be reachable from the remaining candidates
        cmask = 0
        for x in future:
            cmask |= 1 << x
        reach = self.covered
        for a in self.elems:
            reach |= self._rot(cmask, a)
        if reach != self.full:
            for x in future:
                reach |= self._rot(cmask, x)
                if reach == self.full:
                    break
            if reach != self.full:
                return None
        if self.canonical and s == 1:
            # the second element of an orbit-least set is the least gcd(d, m) over
            # its differences d, so it divides m
            cands = [x for x in future if m % x == 0]
        else:
            cands = future
        for x in cands:
            self._push(x)
            if self.canonical and s == 1:
                self.gcd_floor = x
            found = self._dfs(x)
            if self.canonical and s == 1:
                self.gcd_floor = 1
            self._pop()
            if found is not None:
                return found
        return None


    def _image_smaller(self, last: int) -> bool:
        """Does some affine image of every extension of the prefix sort lower?

        Only maps sending a pair of prefix elements at difference d to (0, 1)
        are tried, which needs the prefix to start 0, 1.  Elements added later
        exceed ``last``; their images can only make an image smaller, so the
        images of the prefix that are <= last already decide the comparison.
        """
        elems, m = self.elems, self.m
        if elems[1] != 1:
            return False
        for y in elems:
            for x in elems:
                if x == y:
                    continue
                try:
                    u = pow(x - y, -1, m)
                except ValueError:
                    continue
                img = sorted(v for v in ((z - y) * u % m for z in elems) if v <= last)
                for a, b in zip(img, elems):
                    if a != b:
                        if a < b:
                            return True
                        break
        return False


_IMAGE_CHECK_DEPTH = 6  # deeper checks cost more than they prune


class _OutOfBudget(Exception):
    pass


def _run_search(m: int, cap: int, size_max: int, canonical: bool, budget: int,
                gain_bound: bool = False):
    search = _Search(m, cap, size_max, canonical, budget, gain_bound)
    try:
        found = search.run()
    except _OutOfBudget:
        return "unknown", None, search.nodes
    return ("found" if found is not None else "none"), found, search.nodes


def feasible(m: int, r: int, canonical: bool = True, budget: int = DEFAULT_BUDGET):
    """Is there A with 1 <= sigma_A <= r on Z_m?

    Returns ``(status, witness, nodes)`` with status ``found``, ``none`` or
    ``unknown`` (budget exhausted).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return _run_search(m, r, math.isqrt(r * m), canonical, budget)


def exact_ruzsa(m: int, budget: int = DEFAULT_BUDGET, canonical: bool = True) -> ExactResult:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = 0
    r = 1
    while True:
        status, found, nodes = feasible(m, r, canonical, budget - total)
        total += nodes
        if status == "found":
            witness = ResidueSet(m, tuple(found))
            assert sigma_profile(witness).max_sigma == r
            return ExactResult(m, r, witness, total)
        if status == "unknown":
            raise BudgetExhausted("R_m", m, r, None, total)
        r += 1
        if r > m:  # A = Z_m has sigma = m everywhere
            raise AssertionError(f"search failed to find Z_{m} itself at r={m}")


def min_cover(m: int, budget: int = DEFAULT_BUDGET, canonical: bool = True) -> CoverResult:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = 0
    k = max(1, math.isqrt(m - 1) + 1) if m > 1 else 1  # ceil(sqrt(m))
    while True:
        status, found, nodes = _run_search(m, m, k, canonical, budget - total, True)
        total += nodes
        if status == "found":
            return CoverResult(m, len(found), ResidueSet(m, tuple(found)), total)
        if status == "unknown":
            raise BudgetExhausted("c_m", m, k, None, total)
        k += 1


def k_min(m: int, r_m: int, budget: int = DEFAULT_BUDGET, canonical: bool = True,
          start: int | None = None) -> KResult:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = 0
    k = start if start is not None else (math.isqrt(m - 1) + 1 if m > 1 else 1)
    k_hi = math.isqrt(r_m * m)
    while k <= k_hi:
        status, found, nodes = _run_search(m, r_m, k, canonical, budget - total, True)
        total += nodes
        if status == "found":
            return KResult(m, len(found), ResidueSet(m, tuple(found)), total)
        if status == "unknown":
            raise BudgetExhausted("K_m", m, k, None, total)
        k += 1
    raise ValueError(f"no set with 1 <= sigma <= {r_m} exists for m={m}; is r_m exact?")
