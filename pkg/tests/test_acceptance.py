"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL ...`` line to the real
terminal (bypassing capture) before asserting, so ``pytest -v -s`` or a tee'd
log shows the verdict of each criterion even when an assertion fails.
"""

import math
import random
import time
from collections import Counter

import pytest

from ruzsa.constructions import (
    LEMMA2_LIMIT,
    base_set_small,
    lift,
    theorem1_basis,
    verify_certificate,
)
from ruzsa.exact import BudgetExhausted, exact_ruzsa, feasible, oracle_ruzsa
from ruzsa.primes import panaitopol_inequality_check, verify_lemma3_range
from ruzsa.residues import (
    ResidueSet,
    dilate,
    is_basis,
    sigma_counts_fast,
    sigma_counts_reference,
    sigma_profile,
    translate,
)
from ruzsa.scan import scan


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail, started):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\nACCEPTANCE {n} {status} ({time.perf_counter() - started:.1f}s) {detail}", flush=True)
        return ok
    return emit


def random_basis(rng, m):
    elems = set(rng.sample(range(m), rng.randint(1, max(1, m // 2))))
    while not is_basis(ResidueSet(m, tuple(elems))):
        elems.add(rng.randrange(m))
    return ResidueSet(m, tuple(elems))


def test_criterion_1_construction_end_to_end(verdict):
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    moduli = list(range(4357, 5357)) + [rng.randint(4357, 10**6) for _ in range(100)]
    bad = []
    worst = 0
    for m in moduli:
        cert = theorem1_basis(m)
        prof = sigma_profile(cert.residue_set)
        achieved = cert.trace[0].params.get("achieved_max")
        ok = (
            prof.min_sigma >= 1
            and prof.max_sigma <= cert.claimed_bound
            and (achieved is None or achieved > 48 or cert.claimed_bound <= 192)
            and bool(verify_certificate(cert))
        )
        worst = max(worst, cert.claimed_bound)
        if not ok:
            bad.append(m)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 600
    verdict(1, ok, f"moduli={len(moduli)} failures={bad[:5]} max_claimed_bound={worst}", t0)
    assert not bad
    assert elapsed < 600


def test_criterion_2_small_base_sweep(verdict):
    t0 = time.perf_counter()
    bad = []
    for m in range(1, LEMMA2_LIMIT + 1):
        prof = sigma_profile(base_set_small(m))
        if prof.min_sigma < 1 or prof.max_sigma > 132:
            bad.append(m)
    elapsed = time.perf_counter() - t0
    verdict(2, not bad and elapsed < 60, f"moduli=1..{LEMMA2_LIMIT} failures={bad[:5]}", t0)
    assert not bad
    assert elapsed < 60


def test_criterion_3_lift_property(verdict):
    t0 = time.perf_counter()
    rng = random.Random(4)
    failures = 0
    for _ in range(500):
        m1 = rng.randint(4, 60)
        a = random_basis(rng, m1)
        r = rng.randint((m1 + 1) // 2, m1 - 1)
        pa, pb = sigma_profile(a), sigma_profile(lift(a, r))
        if pb.min_sigma < 1 or pb.max_sigma > 4 * pa.max_sigma:
            failures += 1
    verdict(3, failures == 0, f"instances=500 failures={failures}", t0)
    assert failures == 0


def test_criterion_4_prime_window(verdict):
    t0 = time.perf_counter()
    checks = {
        "range_33_1242": verify_lemma3_range(33, 1242).ok,
        "range_33_1e6": verify_lemma3_range(33, 10**6).ok,
        "ineq_1242": panaitopol_inequality_check(1242) is True,
        "not_ineq_1241": panaitopol_inequality_check(1241) is False,
    }
    ok = all(checks.values())
    verdict(4, ok, " ".join(f"{k}={v}" for k, v in checks.items()), t0)
    assert ok


def test_criterion_5_solver_matches_oracle(verdict):
    t0 = time.perf_counter()
    bad = []
    for m in range(1, 17):
        o, e = oracle_ruzsa(m), exact_ruzsa(m)
        prof = sigma_profile(e.witness)
        if e.r_m != o.r_m or prof.min_sigma < 1 or prof.max_sigma != e.r_m:
            bad.append(m)
    verdict(5, not bad, f"m=1..16 mismatches={bad}", t0)
    assert not bad


def test_criterion_6_lower_bounds(verdict):
    t0 = time.perf_counter()
    values = {}
    for m in range(1, 36):
        values[m] = exact_ruzsa(m).r_m
    violations = [m for m, r in values.items() if m not in (1, 3) and r < 3]
    try:
        r36 = exact_ruzsa(36).r_m
        r36_ok, r36_note = r36 >= 6, f"R_36={r36} exact"
    except BudgetExhausted:
        status = feasible(36, 5)[0]
        r36_ok, r36_note = status == "none", f"R_36 bounded, r=5 probe {status}"
    ok = not violations and r36_ok
    shown = ",".join(f"R_{m}={values[m]}" for m in violations)
    verdict(6, ok, f"computed m=1..36 violations=[{shown}] {r36_note}", t0)
    assert r36_ok
    assert not violations, f"R_m < 3 at m not in {{1,3}}: {shown}"


def test_criterion_7_conjecture_table(verdict):
    t0 = time.perf_counter()
    report = scan(1, 34)
    conj1_bad = [r.m for r in report.rows if r.conj1_ok is not True]
    ok = report.all_exact and not conj1_bad
    verdict(7, ok, f"rows={len(report.rows)} all_exact={report.all_exact} conj1_failures={conj1_bad}", t0)
    assert report.all_exact
    assert not conj1_bad


def ref_counts(a):
    return list(sigma_counts_reference(a.elements, a.elements, a.modulus))


def test_criterion_8_identities(verdict):
    t0 = time.perf_counter()
    rng = random.Random(8)
    failures = Counter()
    for _ in range(1000):
        m = rng.randint(1, 150)
        a = ResidueSet(m, tuple(rng.sample(range(m), rng.randint(1, m))))
        ref = ref_counts(a)
        if sum(ref) != len(a) ** 2:
            failures["sum"] += 1
        if list(sigma_counts_fast(a.elements, a.elements, m)) != list(ref):
            failures["kernel"] += 1
        base = sorted(ref)
        if sorted(ref_counts(translate(a, rng.randrange(m)))) != base:
            failures["translate"] += 1
        u = rng.choice([u for u in range(1, m + 1) if math.gcd(u, m) == 1])
        if sorted(ref_counts(dilate(a, u))) != base:
            failures["dilate"] += 1
    verdict(8, not failures, f"sets=1000 failures={dict(failures)}", t0)
    assert not failures
