"""Representation functions on subsets of Z_m.

sigma_A(n) counts ordered pairs (x, y) in A x A with x + y = n (mod m), so
(x, y) and (y, x) are distinct solutions and (x, x) counts once.  With this
convention sum_n sigma_A(n) = |A|^2 for every A.

Two kernels compute the same profile: a plain pair loop that serves as ground
truth, and a vectorised kernel (histogram of all pairwise sums, i.e. the cyclic
self-convolution of the indicator vector) used for large moduli.  Both return
exact integers.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ResidueSet",
    "RepProfile",
    "sigma_counts_reference",
    "sigma_counts_fast",
    "sigma_profile",
    "sigma_profile_pair",
    "is_basis",
    "translate",
    "dilate",
    "parse_residue_set",
    "format_residue_set",
]

# above this many ordered pairs the reference loop is too slow to be the default
_REFERENCE_PAIR_LIMIT = 4096
# rows of the outer-sum matrix materialised at once by the fast kernel
_CHUNK_PAIRS = 1 << 22


@dataclass(frozen=True)
class ResidueSet:
    """A subset of Z_m stored as sorted, distinct representatives in [0, m-1]."""

    modulus: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.modulus, int) or self.modulus < 1:
            raise ValueError(f"modulus must be a positive integer, got {self.modulus!r}")
        m = self.modulus
        elems = tuple(sorted({int(e) % m for e in self.elements}))
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, modulus: int, elements: Iterable[int] = ()) -> "ResidueSet":
        return cls(modulus, tuple(elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, int):
            return False
        i = bisect.bisect_left(self.elements, x % self.modulus)
        return i < len(self.elements) and self.elements[i] == x % self.modulus

    def as_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def __str__(self) -> str:
        return format_residue_set(self)


@dataclass(frozen=True)
class RepProfile:
    modulus: int
    counts: tuple[int, ...]
    min_sigma: int
    max_sigma: int
    total: int

    @classmethod
    def from_counts(cls, modulus: int, counts: Sequence[int]) -> "RepProfile":
        counts = tuple(int(c) for c in counts)
        if len(counts) != modulus:
            raise ValueError(f"expected {modulus} counts, got {len(counts)}")
        return cls(modulus, counts, min(counts), max(counts), sum(counts))

    def __getitem__(self, n: int) -> int:
        return self.counts[n % self.modulus]


def sigma_counts_reference(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    """Quadratic pair loop; the arbiter for every other kernel."""
    counts = [0] * m
    for x in a:
        for y in b:
            counts[(x + y) % m] += 1
    return counts


def sigma_counts_fast(a: Sequence[int], b: Sequence[int], m: int) -> np.ndarray:
    """Histogram of all pairwise sums mod m, computed in row blocks with numpy."""
    xa = np.asarray(a, dtype=np.int64)
    yb = np.asarray(b, dtype=np.int64)
    counts = np.zeros(m, dtype=np.int64)
    if xa.size == 0 or yb.size == 0:
        return counts
    rows = max(1, _CHUNK_PAIRS // yb.size)
    for start in range(0, xa.size, rows):
        sums = np.add.outer(xa[start:start + rows], yb)
        sums %= m
        counts += np.bincount(sums.ravel(), minlength=m)
    return counts


def _counts(a: Sequence[int], b: Sequence[int], m: int) -> Sequence[int]:
    if len(a) * len(b) <= _REFERENCE_PAIR_LIMIT:
        return sigma_counts_reference(a, b, m)
    return sigma_counts_fast(a, b, m).tolist()


def sigma_profile(a: ResidueSet) -> RepProfile:
    return RepProfile.from_counts(a.modulus, _counts(a.elements, a.elements, a.modulus))


def sigma_profile_pair(a: ResidueSet, b: ResidueSet) -> RepProfile:
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} != {b.modulus}")
    return RepProfile.from_counts(a.modulus, _counts(a.elements, b.elements, a.modulus))


def is_basis(a: ResidueSet) -> bool:
    """True iff A + A covers Z_m."""
    if not a.elements:
        return False
    m = a.modulus
    if len(a) ** 2 < m:
        return False
    if len(a) ** 2 > _REFERENCE_PAIR_LIMIT:
        return bool(sigma_counts_fast(a.elements, a.elements, m).min() >= 1)
    covered = bytearray(m)
    for x in a.elements:
        for y in a.elements:
            covered[(x + y) % m] = 1
    return all(covered)


def translate(a: ResidueSet, t: int) -> ResidueSet:
    return ResidueSet(a.modulus, tuple(x + t for x in a.elements))


def dilate(a: ResidueSet, u: int) -> ResidueSet:
    if gcd(u, a.modulus) != 1:
        raise ValueError(f"{u} is not a unit modulo {a.modulus}")
    return ResidueSet(a.modulus, tuple(u * x for x in a.elements))


def parse_residue_set(text: str) -> ResidueSet:
    """Parse the textual form ``m e1 e2 ...`` (whitespace separated)."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty input: expected a modulus followed by elements")
    values = []
    for pos, tok in enumerate(tokens):
        try:
            values.append(int(tok))
        except ValueError:
            raise ValueError(f"token {pos} ({tok!r}) is not an integer") from None
    m = values[0]
    if m < 1:
        raise ValueError(f"token 0: modulus must be >= 1, got {m}")
    return ResidueSet(m, tuple(values[1:]))


def format_residue_set(a: ResidueSet) -> str:
    return " ".join(str(v) for v in (a.modulus, *a.elements))
