"""Bounded-representation bases of Z_m with replayable certificates.

Pipeline for a modulus m:

* m <= 4356: the explicit set {0, ..., 66} u {2*66, ..., 66*66} reduced mod m
  covers Z_m by Euclidean division and has at most 132 elements, so sigma <= 132.
* m > 4356: pick the least prime p with 3p^2 <= m < 4p^2, take a verified
  bounded basis A of Z_{2p^2} from a base provider, and lift it by
  r = m - 2p^2 to B = A u (A + r), whose sigma is at most 4 * max sigma_A.

Nothing is trusted: a certificate's sigma bounds are recomputed from its
element list and its trace is replayed before it is handed out.
"""

from __future__ import annotations

import functools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np

from .primes import is_prime
from .residues import (
    ResidueSet,
    format_residue_set,
    is_basis,
    parse_residue_set,
    sigma_counts_fast,
    sigma_profile,
)

log = logging.getLogger(__name__)

__all__ = [
    "LEMMA2_LIMIT",
    "LEMMA2_BOUND",
    "CERT_VERSION",
    "ConstructionError",
    "SearchFailed",
    "TraceStep",
    "BasisCertificate",
    "CertificateCheck",
    "SearchProvider",
    "ImportProvider",
    "base_set_small",
    "lift",
    "choose_prime",
    "search_base_2p2",
    "import_base",
    "theorem1_basis",
    "verify_certificate",
    "replay_trace",
]

LEMMA2_LIMIT = 4356  # 66 * 66
LEMMA2_BOUND = 132
CERT_VERSION = 1

_STEP = 66
# moduli this small get an exact optimum instead of random sampling
_EXHAUSTIVE_BASE_LIMIT = 18
# repairs allowed per restart beyond the count of residues left uncovered by sampling
_REPAIR_SLACK = 50


class ConstructionError(RuntimeError):
    pass


class SearchFailed(ConstructionError):
    def __init__(self, p: int, target_bound: int, best_sigma_max: int | None, attempts: int):
        self.p = p
        self.target_bound = target_bound
        self.best_sigma_max = best_sigma_max
        self.attempts = attempts
        super().__init__(
            f"no basis of Z_{2 * p * p} with sigma <= {target_bound} after {attempts} attempts "
            f"(best sigma_max {best_sigma_max})"
        )


@dataclass(frozen=True)
class TraceStep:
    kind: str  # lemma2-base | imported-base | searched-base | lift
    params: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "TraceStep":
        obj = dict(obj)
        kind = obj.pop("kind")
        return cls(kind, obj)


@dataclass(frozen=True)
class BasisCertificate:
    m: int
    elements: tuple[int, ...]
    sigma_min: int
    sigma_max: int
    claimed_bound: int
    trace: tuple[TraceStep, ...]

    def to_json(self) -> dict[str, Any]:
        return {
            "version": CERT_VERSION,
            "m": self.m,
            "elements": list(self.elements),
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "claimed_bound": self.claimed_bound,
            "trace": [s.to_json() for s in self.trace],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "BasisCertificate":
        if obj.get("version") != CERT_VERSION:
            raise ValueError(f"unsupported certificate version {obj.get('version')!r}")
        return cls(
            m=int(obj["m"]),
            elements=tuple(int(e) for e in obj["elements"]),
            sigma_min=int(obj["sigma_min"]),
            sigma_max=int(obj["sigma_max"]),
            claimed_bound=int(obj["claimed_bound"]),
            trace=tuple(TraceStep.from_json(s) for s in obj["trace"]),
        )

    @classmethod
    def loads(cls, text: str) -> "BasisCertificate":
        return cls.from_json(json.loads(text))

    @property
    def residue_set(self) -> ResidueSet:
        return ResidueSet(self.m, self.elements)


@dataclass
class CertificateCheck:
    ok: bool
    reasons: list[str]

    def __bool__(self) -> bool:
        return self.ok


def base_set_small(m: int) -> ResidueSet:
    if not 1 <= m <= LEMMA2_LIMIT:
        raise ValueError(f"base_set_small needs 1 <= m <= {LEMMA2_LIMIT}, got {m}")
    elems = list(range(_STEP + 1)) + [k * _STEP for k in range(2, _STEP + 1)]
    return ResidueSet(m, tuple(elems))


def _profile_bounds(a: ResidueSet) -> tuple[int, int]:
    prof = sigma_profile(a)
    return prof.min_sigma, prof.max_sigma


def lift(a: ResidueSet, r: int, check_basis: bool = True) -> ResidueSet:
    """B = A u (A + r) in Z_{m1 + r}, for ceil(m1/2) <= r <= m1 - 1.

    Representatives stay below m1 + r, so no reduction happens.
    """
    m1 = a.modulus
    if not (m1 + 1) // 2 <= r <= m1 - 1:
        raise ValueError(f"lift needs ceil(m1/2) <= r <= m1-1 (m1={m1}), got r={r}")
    if check_basis and not is_basis(a):
        raise ValueError(f"lift needs a basis of Z_{m1}")
    return ResidueSet(m1 + r, a.elements + tuple(x + r for x in a.elements))


def choose_prime(m: int) -> int:
    """Least prime p with 3p^2 <= m < 4p^2, i.e. sqrt(m/4) < p <= sqrt(m/3)."""
    if m <= LEMMA2_LIMIT:
        raise ValueError(f"choose_prime needs m > {LEMMA2_LIMIT}, got {m}")
    p = math.isqrt(m // 4)
    while 4 * p * p <= m:
        p += 1
    while 3 * p * p <= m:
        if is_prime(p):
            assert 3 * p * p <= m < 4 * p * p
            return p
        p += 1
    raise ConstructionError(f"no prime p with 3p^2 <= {m} < 4p^2; prime window check is broken")


@functools.lru_cache(maxsize=64)
def search_base_2p2(p: int, target_bound: int, seed: int, budget: int) -> tuple[ResidueSet, int]:
    """A verified basis of Z_{2p^2} with sigma <= target_bound, and its achieved max.

    Random sets of size ceil(4 sqrt(2p^2)) (mean sigma about 16) are repaired by
    greedily adding the residue that covers the most currently uncovered
    residues.  A sample is abandoned once any count passes the target.  Tiny
    moduli skip sampling and use the exact optimum.  Deterministic in all four
    arguments; ``budget`` is the number of random restarts.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if target_bound < 3:
        raise ValueError(f"target_bound must be >= 3, got {target_bound}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    m1 = 2 * p * p
    if m1 <= _EXHAUSTIVE_BASE_LIMIT:
        from .exact import exact_ruzsa

        res = exact_ruzsa(m1)
        if res.r_m > target_bound:
            raise SearchFailed(p, target_bound, res.r_m, 1)
        return res.witness, res.r_m

    size = math.isqrt(16 * m1 - 1) + 1  # ceil(4 sqrt(m1))
    rng = np.random.default_rng([seed, p, target_bound])
    best: int | None = None
    for attempt in range(budget):
        elems = rng.choice(m1, size=size, replace=False).astype(np.int64)
        counts = sigma_counts_fast(elems, elems, m1)
        if counts.max() > target_bound:
            best = _better(best, int(counts.max()))
            continue
        elems, ok = _repair(elems, counts, m1, target_bound)
        top = int(counts.max())
        if not ok:
            best = _better(best, top)
            continue
        found = ResidueSet(m1, tuple(elems.tolist()))
        lo, hi = _profile_bounds(found)
        assert lo >= 1 and hi <= target_bound, (lo, hi)
        log.debug("searched base p=%d attempt=%d size=%d sigma_max=%d", p, attempt, len(found), hi)
        return found, hi
    raise SearchFailed(p, target_bound, best, budget)


def _better(best: int | None, value: int) -> int:
    return value if best is None else min(best, value)


def _repair(elems: np.ndarray, counts: np.ndarray, m: int, cap: int) -> tuple[np.ndarray, bool]:
    """Add residues until every count is positive; ``counts`` is updated in place."""
    zeros = np.flatnonzero(counts == 0)
    limit = len(zeros) + _REPAIR_SLACK
    present = np.zeros(m, dtype=bool)
    present[elems] = True
    for _ in range(limit):
        if zeros.size == 0:
            return elems, True
        # x covers zero z exactly when z - x lies in the set
        gain = np.bincount(((zeros[:, None] - elems[None, :]) % m).ravel(), minlength=m)
        gain[present] = -1
        x = int(np.argmax(gain))
        counts[(x + elems) % m] += 2
        counts[2 * x % m] += 1
        elems = np.append(elems, x)
        present[x] = True
        if counts.max() > cap:
            return elems, False
        zeros = zeros[counts[zeros] == 0]
    return elems, zeros.size == 0


def import_base(source: str | bytes) -> ResidueSet:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return parse_residue_set(source)


class BaseProvider(Protocol):
    def base(self, p: int) -> tuple[ResidueSet, TraceStep]: ...


@dataclass(frozen=True)
class SearchProvider:
    seed: int = 0
    budget: int = 200
    target_bound: int = 48

    def base(self, p: int) -> tuple[ResidueSet, TraceStep]:
        found, achieved = search_base_2p2(p, self.target_bound, self.seed, self.budget)
        step = TraceStep("searched-base", {
            "p": p,
            "m1": 2 * p * p,
            "seed": self.seed,
            "budget": self.budget,
            "target_bound": self.target_bound,
            "achieved_max": achieved,
        })
        return found, step


@dataclass(frozen=True)
class ImportProvider:
    text: str
    source: str = "<inline>"

    def base(self, p: int) -> tuple[ResidueSet, TraceStep]:
        found = import_base(self.text)
        if found.modulus != 2 * p * p:
            raise ConstructionError(
                f"imported base is over Z_{found.modulus}, pipeline needs Z_{2 * p * p} (p={p})"
            )
        step = TraceStep("imported-base", {
            "source": self.source,
            "m1": found.modulus,
            "base_elements": list(found.elements),
        })
        return found, step


def theorem1_basis(m: int, provider: BaseProvider | None = None) -> BasisCertificate:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m <= LEMMA2_LIMIT:
        result = base_set_small(m)
        trace: tuple[TraceStep, ...] = (TraceStep("lemma2-base", {"m": m}),)
        claimed = LEMMA2_BOUND
    else:
        provider = provider if provider is not None else SearchProvider()
        p = choose_prime(m)
        m1 = 2 * p * p
        base, base_step = provider.base(p)
        lo, s = _profile_bounds(base)
        if lo < 1:
            raise ConstructionError(f"provider base over Z_{m1} is not a basis")
        r = m - m1
        result = lift(base, r, check_basis=False)
        trace = (base_step, TraceStep("lift", {"m1": m1, "r": r, "m2": m}))
        claimed = 4 * s
    lo, hi = _profile_bounds(result)
    if lo < 1 or hi > claimed:
        raise ConstructionError(
            f"verification failed for m={m}: sigma in [{lo}, {hi}], claimed <= {claimed}"
        )
    return BasisCertificate(m, result.elements, lo, hi, claimed, trace)


def replay_trace(trace: tuple[TraceStep, ...] | list[TraceStep]) -> ResidueSet:
    """Re-execute a construction trace from its recorded parameters."""
    current: ResidueSet | None = None
    for step in trace:
        prm = step.params
        if step.kind == "lemma2-base":
            current = base_set_small(int(prm["m"]))
        elif step.kind == "searched-base":
            current, achieved = search_base_2p2(
                int(prm["p"]), int(prm["target_bound"]), int(prm["seed"]), int(prm["budget"])
            )
            if achieved != prm.get("achieved_max"):
                raise ConstructionError(f"replayed search reached {achieved}, trace says {prm.get('achieved_max')}")
        elif step.kind == "imported-base":
            current = ResidueSet(int(prm["m1"]), tuple(prm["base_elements"]))
        elif step.kind == "lift":
            if current is None or current.modulus != int(prm["m1"]):
                raise ConstructionError("lift step does not follow a base over its m1")
            current = lift(current, int(prm["r"]), check_basis=False)
            if current.modulus != int(prm["m2"]):
                raise ConstructionError(f"lift produced Z_{current.modulus}, trace says Z_{prm['m2']}")
        else:
            raise ConstructionError(f"unknown trace step kind {step.kind!r}")
    if current is None:
        raise ConstructionError("empty trace")
    return current


def verify_certificate(cert: BasisCertificate) -> CertificateCheck:
    reasons: list[str] = []
    try:
        elems = ResidueSet(cert.m, cert.elements)
    except (ValueError, TypeError) as exc:
        return CertificateCheck(False, [f"malformed elements: {exc}"])
    if elems.elements != tuple(cert.elements):
        reasons.append("elements are not sorted distinct residues in [0, m-1]")
    lo, hi = _profile_bounds(elems)
    if lo < 1:
        reasons.append(f"not a basis: sigma_min = {lo}")
    if hi > cert.claimed_bound:
        reasons.append(f"sigma_max {hi} exceeds claimed bound {cert.claimed_bound}")
    if (lo, hi) != (cert.sigma_min, cert.sigma_max):
        reasons.append(f"recorded sigma range [{cert.sigma_min}, {cert.sigma_max}] != recomputed [{lo}, {hi}]")
    if not cert.trace:
        reasons.append("empty trace")
    else:
        try:
            replayed = replay_trace(cert.trace)
        except (ConstructionError, ValueError, KeyError, TypeError) as exc:
            reasons.append(f"trace replay failed: {exc}")
        else:
            if replayed.modulus != cert.m or replayed.elements != tuple(cert.elements):
                reasons.append("trace replay does not reproduce the elements")
    return CertificateCheck(not reasons, reasons)


def certificate_base_text(a: ResidueSet) -> str:
    return format_residue_set(a) + "\n"
