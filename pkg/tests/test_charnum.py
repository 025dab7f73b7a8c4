"""Characters, Bernoulli and Euler numbers, power sums and their backends."""

import os
import random
from fractions import Fraction
from functools import lru_cache
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.charnum import (
    PRINCIPAL,
    QuadChar,
    bernoulli,
    bernoulli_over_n_mod,
    euler,
    gen_bernoulli,
    gen_bernoulli_mod,
    is_fundamental,
    kronecker,
    load_bernoulli_cache,
    power_sum,
    power_sum_chi,
    power_sum_chi_restricted,
    save_bernoulli_cache,
)
from kummerlab.errors import BackendOutOfRange
from kummerlab.lfunc import primes_up_to
from kummerlab.padic import ord_p

DISCS = [-3, -4, 5, -7, -8, 8, 12, -15, 77]


@lru_cache(maxsize=None)
def akiyama_tanigawa(n: int) -> Fraction:
    """B_n with B_1 = +1/2, an oracle independent of the library route."""
    a = [Fraction(1, m + 1) for m in range(n + 1)]
    for m in range(n + 1):
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def oracle_B(n: int) -> Fraction:
    return Fraction(-1, 2) if n == 1 else akiyama_tanigawa(n)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(comb(n, k) * oracle_B(k) * x ** (n - k) for k in range(n + 1))


def oracle_gen_B(n: int, D: int) -> Fraction:
    f = abs(D)
    return Fraction(f) ** (n - 1) * sum(kronecker(D, a) * bernoulli_poly(n, Fraction(a, f)) for a in range(1, f + 1))


def test_fundamental():
    assert all(is_fundamental(D) for D in DISCS + [1])
    assert not any(is_fundamental(D) for D in (-1, 4, 9, -12 * 4, 2, 3))
    with pytest.raises(ValueError):
        QuadChar(12 * 9)


@pytest.mark.parametrize("D", DISCS)
def test_character_axioms(D):
    chi = QuadChar(D)
    f = chi.conductor
    assert chi(f - 1) == (-1) ** chi.parity
    for n in range(1, 4 * f):
        assert chi(n) == chi(n + f)
        assert (chi(n) == 0) == (any(n % q == 0 and f % q == 0 for q in range(2, f + 1)))
        for m in range(1, 20):
            assert chi(n * m) == chi(n) * chi(m)


def test_character_examples():
    assert QuadChar(5)(2) == -1
    chi = QuadChar(-4)
    assert all((chi(p) == 1) == (p % 4 == 1) for p in primes_up_to(500) if p > 2)


def test_bernoulli_examples():
    assert bernoulli(0) == 1 and bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert all(bernoulli(n) == 0 for n in range(3, 60, 2))


def test_bernoulli_oracle():
    for n in range(0, 121):
        assert bernoulli(n) == oracle_B(n), n


def test_von_staudt_denominators():
    for n in range(2, 101, 2):
        d = 1
        for p in primes_up_to(n + 1):
            if n % (p - 1) == 0:
                d *= p
        assert bernoulli(n).denominator == d


def test_euler_numbers():
    assert euler(0) == 1 and euler(8) == 1385
    assert all(euler(n) == 0 for n in range(1, 30, 2))
    # sec x = sum (-1)^k E_2k x^2k/(2k)!; check sum_k C(2n,2k) E_2k = 0
    for n in range(1, 15):
        assert sum(comb(2 * n, 2 * k) * euler(2 * k) for k in range(n + 1)) == 0


def test_euler_mod_p_r():
    for p in (3, 7, 11):
        for r in (1, 2):
            phi = (p - 1) * p ** (r - 1)
            assert (euler(phi) - 2) % p**r == 0


@pytest.mark.parametrize("D", DISCS)
def test_gen_bernoulli_oracle(D):
    chi = QuadChar(D)
    for n in range(1, 25):
        assert gen_bernoulli(n, chi) == oracle_gen_B(n, D)


def test_gen_bernoulli_examples():
    assert gen_bernoulli(1, QuadChar(-4)) == Fraction(-1, 2)
    assert gen_bernoulli(4, QuadChar(-4)) == 0
    for n in range(2, 40):
        assert gen_bernoulli(n, PRINCIPAL) == bernoulli(n)
    for n in range(0, 21):
        assert -2 * gen_bernoulli(n + 1, QuadChar(-4)) / (n + 1) == euler(n)


@pytest.mark.parametrize("D", [5, 77])
def test_dedekind_consistency(D):
    """zeta_K(1-n) = zeta(1-n) L(1-n, chi_D) for K = Q(sqrt D): both sides built from independent sums."""
    f = D
    for n in range(2, 41, 2):
        lhs = (bernoulli(n) / n) * (gen_bernoulli(n, QuadChar(D)) / n)
        rhs = (oracle_B(n) / n) * (oracle_gen_B(n, D) / n)
        assert lhs == rhs
        # the zeta_K value is p-integral away from p - 1 | n and p | f
        for p in (7, 11, 13):
            if n % (p - 1) and f % p:
                assert ord_p(lhs, p) >= 0


def test_p_integrality():
    for D in DISCS:
        chi = QuadChar(D)
        for n in range(1, 40):
            if n % 2 != chi.parity:
                continue
            for p in primes_up_to(50):
                if chi.conductor % p and p != 2:
                    assert ord_p(gen_bernoulli(n, chi) / n, p) >= 0


def test_power_sums():
    for m in range(0, 40):
        assert power_sum(1, m) == m * (m - 1) // 2
    chi = QuadChar(5)
    for n in range(1, 8):
        assert power_sum_chi(n, chi, 30) == sum(chi(a) * a**n for a in range(30))


def test_restricted_identity():
    rng = random.Random(0)
    chi = QuadChar(5)
    for _ in range(10):
        p = rng.choice([7, 11, 13])
        n = rng.randrange(2, 20, 2)
        m = 15 * p
        restricted = power_sum_chi_restricted(n, chi, m, p)
        full = power_sum_chi(n, chi, m)
        assert restricted == full - chi(p) * p**n * power_sum_chi(n, chi, m // p)


def test_power_sum_congruence():
    for D, p in ((5, 7), (-4, 13), (-3, 11)):
        chi = QuadChar(D)
        m = p * chi.conductor
        for n in range(1, 20):
            if n % 2 != chi.parity:
                continue
            x = Fraction(power_sum_chi(n, chi, m), m) - gen_bernoulli(n, chi)
            assert ord_p(x, p) >= 2


def test_backend_agreement():
    chi = QuadChar(-4)
    for n in range(1, 401, 2):
        a = gen_bernoulli_mod(n, chi, 37, 4, backend="exact")
        b = gen_bernoulli_mod(n, chi, 37, 4, backend="powersum")
        assert a.residue == b.residue, n


def test_voronoi_agreement():
    for p in (13, 37):
        for n in range(2, 200, 6):
            if n % (p - 1) == 0:
                continue
            a = bernoulli_over_n_mod(n, PRINCIPAL, p, 3, backend="exact")
            b = bernoulli_over_n_mod(n, PRINCIPAL, p, 3, backend="voronoi")
            assert a.residue == b.residue


def test_backend_errors():
    with pytest.raises(BackendOutOfRange):
        gen_bernoulli_mod(5000, PRINCIPAL, 37, 4, backend="exact")
    with pytest.raises(BackendOutOfRange):
        gen_bernoulli_mod(10, PRINCIPAL, 37, 4, backend="powersum")


@settings(max_examples=20, deadline=None)
@given(n=st.integers(1, 150), p=st.sampled_from([5, 7, 11, 13]))
def test_mod_matches_exact(n, p):
    chi = QuadChar(-3)
    if n % 2 != chi.parity:
        return
    exact = gen_bernoulli(n, chi)
    got = gen_bernoulli_mod(n, chi, p, 3, backend="powersum").residue
    assert (exact.numerator - got * exact.denominator) % p**3 == 0


def test_cache_roundtrip(tmp_path):
    path = os.path.join(tmp_path, "b.txt")
    bernoulli(60)
    save_bernoulli_cache(path, 60)
    with open(path) as fh:
        assert fh.readline().strip() == "BCACHE1"
    assert load_bernoulli_cache(path) >= 30
    assert bernoulli(60) == oracle_B(60)


def test_cache_handles_huge_numerators(tmp_path):
    path = os.path.join(tmp_path, "big.txt")
    b = bernoulli(1800)
    save_bernoulli_cache(path, 1800)
    load_bernoulli_cache(path)
    assert bernoulli(1800) == b
