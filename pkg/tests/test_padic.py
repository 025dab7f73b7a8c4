"""Fixed-precision Z_p arithmetic and combinatorial primitives."""

from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.errors import InsufficientValues, NotAUnit, PrecisionExhausted
from kummerlab.padic import (
    INF,
    DigitExpansion,
    PadicApprox,
    binom_mod,
    digit_sum,
    forward_diff,
    hnomial,
    invert_unit,
    lucas_binom,
    ord_factorial,
    ord_p,
)

PRIMES = st.sampled_from([2, 3, 5, 7, 11, 13, 37])


def test_ord_p_basics():
    assert ord_p(0, 5) == INF
    assert ord_p(50, 5) == 2
    assert ord_p(Fraction(3, 25), 5) == -2


def test_digits_roundtrip():
    d = DigitExpansion.from_int(7 + 28 * 37, 37, 3)
    assert d.digits == (7, 28, 0)
    assert str(d) == "7,28,0"
    assert d.value == 7 + 28 * 37


def test_precision_exhausted():
    with pytest.raises(PrecisionExhausted):
        DigitExpansion.from_padic(PadicApprox(5, 3, 2), 4)


def test_invert_non_unit():
    with pytest.raises(NotAUnit):
        invert_unit(PadicApprox(5, 10, 3))


@settings(max_examples=200, deadline=None)
@given(p=PRIMES, a=st.integers(1, 10**9), N=st.integers(1, 12))
def test_invert_unit_property(p, a, N):
    if a % p == 0:
        a += 1
    x = PadicApprox.from_int(a, p, N)
    assert (x * invert_unit(x)).residue % p**N == 1


@settings(max_examples=100, deadline=None)
@given(p=PRIMES, a=st.integers(0, 10**6), b=st.integers(0, 10**6), N=st.integers(1, 8), M=st.integers(1, 8))
def test_mixed_precision_add(p, a, b, N, M):
    s = PadicApprox.from_int(a, p, N) + PadicApprox.from_int(b, p, M)
    assert s.precision == min(N, M)
    assert s.residue == (a + b) % p ** min(N, M)


def test_exact_zero_absorbs():
    z = PadicApprox.zero(7, 3)
    assert (z * PadicApprox(7, 5, 1)).exact_zero


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_ord_factorial_legendre(p):
    for n in range(0, 201):
        assert ord_factorial(p, n) == ord_p(factorial(n), p)
        assert ord_factorial(p, n) == (n - digit_sum(n, p)) // (p - 1)


@settings(max_examples=200, deadline=None)
@given(p=st.sampled_from([2, 3, 5, 7]), x=st.integers(0, 5000), k=st.integers(0, 60))
def test_lucas_and_binom_mod(p, x, k):
    assert lucas_binom(x, k, p) == comb(x, k) % p
    assert binom_mod(x, k, p, 3) == comb(x, k) % p**3


def test_forward_diff_trivial():
    assert forward_diff([0, 1]) == 1
    assert forward_diff([4, 4, 4, 4]) == 0
    with pytest.raises(InsufficientValues):
        forward_diff([1, 2], n=3)


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 12), n=st.integers(1, 12), s=st.integers(0, 40))
def test_forward_diff_binomial(m, n, s):
    if n > m:
        m, n = n, m
    vals = [comb(s + j, m) for j in range(n + 1)]
    assert forward_diff(vals) == comb(s, m - n)


def test_hnomial_examples():
    assert hnomial(2, 2, 3) == 3
    assert [hnomial(5, v, 2) for v in range(6)] == [comb(5, v) for v in range(6)]
    assert hnomial(3, 7, 3) == 0


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 8), h=st.integers(1, 6))
def test_hnomial_sum(n, h):
    assert sum(hnomial(n, v, h) for v in range(n * (h - 1) + 1)) == h**n


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([3, 5, 7]), m=st.integers(1, 6), n=st.integers(1, 3), k=st.integers(1, 3), s=st.integers(0, 30))
def test_delta_h_binomial_valuation(p, m, n, k, s):
    # Delta_h^n applied to p^m C(s, m) with h = k p has valuation >= n (1 + ord h)
    h = k * p
    vals = [p**m * comb(s + j * h, m) for j in range(n + 1)]
    d = forward_diff(vals, h=h)
    if m < n:
        return
    assert d == 0 or ord_p(d, p) >= n * (1 + ord_p(h, p))
