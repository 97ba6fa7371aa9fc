import itertools
from fractions import Fraction

import pytest

from ruzsa.constructions import theorem1_basis
from ruzsa.exact import (
    BudgetExhausted,
    exact_ruzsa,
    feasible,
    k_min,
    min_cover,
    oracle_ruzsa,
)
from ruzsa.residues import ResidueSet, sigma_profile


def brute_sigma(elems, m):
    c = [0] * m
    for x, y in itertools.product(elems, repeat=2):
        c[(x + y) % m] += 1
    return c


def brute_min_size(m, cap):
    """Least |A| (and lexicographically least such A) with 1 <= sigma_A <= cap."""
    for k in range(1, m + 1):
        for combo in itertools.combinations(range(m), k):
            s = brute_sigma(combo, m)
            if min(s) >= 1 and max(s) <= cap:
                return k, combo
    raise AssertionError("Z_m itself always qualifies")


class TestOracle:
    def test_m1(self):
        res = oracle_ruzsa(1)
        assert res.r_m == 1 and res.witness.elements == (0,)

    def test_m2(self):
        # subsets of Z_2: {0} and {1} miss a residue, {0,1} has sigma = (2, 2)
        assert brute_sigma((0, 1), 2) == [2, 2]
        res = oracle_ruzsa(2)
        assert res.r_m == 2 and res.witness.elements == (0, 1)

    def test_m4(self):
        assert all(min(brute_sigma(c, 4)) == 0 for c in itertools.combinations(range(4), 2))
        assert brute_sigma((0, 1, 2), 4) == [2, 2, 3, 2]
        assert oracle_ruzsa(4).r_m == 3

    def test_rejects_large(self):
        with pytest.raises(ValueError):
            oracle_ruzsa(19)

    def test_witness_verifies(self):
        for m in range(1, 13):
            res = oracle_ruzsa(m)
            prof = sigma_profile(res.witness)
            assert prof.min_sigma >= 1 and prof.max_sigma == res.r_m


@pytest.mark.parametrize("m", range(1, 17))
def test_branch_and_bound_matches_oracle(m):
    o, e = oracle_ruzsa(m), exact_ruzsa(m)
    assert e.r_m == o.r_m
    prof = sigma_profile(e.witness)
    assert prof.min_sigma >= 1 and prof.max_sigma == e.r_m
    # both report the lexicographically least optimum
    assert e.witness == o.witness


@pytest.mark.parametrize("m", range(1, 15))
def test_canonicalization_is_safe(m):
    with_c, without = exact_ruzsa(m), exact_ruzsa(m, canonical=False)
    assert with_c.r_m == without.r_m
    assert with_c.witness == without.witness


@pytest.mark.parametrize("m", range(1, 15))
def test_min_cover_matches_brute_force(m):
    k, combo = brute_min_size(m, m)
    res = min_cover(m)
    assert res.c_m == k
    assert res.witness.elements == combo
    assert res.ell_m == Fraction(k * k, m)


@pytest.mark.parametrize("m", range(1, 15))
def test_k_min_matches_brute_force(m):
    r = oracle_ruzsa(m).r_m
    k, combo = brute_min_size(m, r)
    res = k_min(m, r)
    assert res.k_m == k and res.witness.elements == combo


class TestCoverExamples:
    def test_m1(self):
        res = min_cover(1)
        assert res.c_m == 1 and res.ell_m == 1

    def test_m4(self):
        res = min_cover(4)
        assert res.c_m == 3 and res.ell_m == Fraction(9, 4)

    @pytest.mark.slow
    def test_m49_counting_bound(self):
        res = min_cover(49)
        assert res.c_m >= 7
        assert sigma_profile(res.witness).min_sigma >= 1


class TestKExamples:
    def test_m1(self):
        assert k_min(1, 1).k_m == 1

    def test_m4_conj5_instance(self):
        k = k_min(4, 3).k_m
        assert k == 3 and Fraction(k * k) == 4 * min_cover(4).ell_m

    def test_wrong_r_rejected(self):
        with pytest.raises(ValueError):
            k_min(4, 2)


def test_k_at_least_c():
    for m in range(1, 25):
        r = exact_ruzsa(m).r_m
        assert k_min(m, r).k_m >= min_cover(m).c_m >= -(-m**0.5 // 1)


def test_feasibility_is_monotone_in_r():
    for m in range(2, 20):
        r = exact_ruzsa(m).r_m
        assert feasible(m, r - 1)[0] == "none"
        assert feasible(m, r)[0] == "found"
        assert feasible(m, r + 1)[0] == "found"


def test_r_at_least_3_from_m4():
    for m in range(4, 31):
        assert exact_ruzsa(m).r_m >= 3


def test_r_bounded_by_certificates():
    for m in (1, 2, 5, 17, 30):
        assert exact_ruzsa(m).r_m <= theorem1_basis(m).sigma_max


class TestBudget:
    def test_exhaustion_reports_interval(self):
        with pytest.raises(BudgetExhausted) as info:
            exact_ruzsa(30, budget=500)
        assert info.value.lower >= 1 and info.value.nodes <= 500 + 1

    def test_feasible_unknown(self):
        status, witness, nodes = feasible(30, 5, budget=10)
        assert status == "unknown" and witness is None

    def test_cover_exhaustion(self):
        with pytest.raises(BudgetExhausted):
            min_cover(40, budget=50)

    def test_k_exhaustion(self):
        with pytest.raises(BudgetExhausted):
            k_min(34, 6, budget=50)


def test_witness_is_a_residue_set():
    res = exact_ruzsa(12)
    assert isinstance(res.witness, ResidueSet) and res.witness.modulus == 12
