"""Bounded-representation additive bases of Z_m: constructions, certificates, exact values."""

from .constructions import (
    BasisCertificate,
    ImportProvider,
    SearchProvider,
    base_set_small,
    choose_prime,
    lift,
    search_base_2p2,
    theorem1_basis,
    verify_certificate,
)
from .exact import exact_ruzsa, k_min, min_cover, oracle_ruzsa
from .primes import prime_in_interval, sieve, verify_lemma3_range
from .residues import ResidueSet, RepProfile, is_basis, sigma_profile, sigma_profile_pair

__version__ = "0.1.0"
