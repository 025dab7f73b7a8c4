"""Zero and fixed-point solvers."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerlab.charnum import PRINCIPAL, QuadChar
from kummerlab.errors import NotInWKS0, PrecisionExhausted
from kummerlab.lfunc import LplSpec, build_Lpl, build_product_L
from kummerlab.mahler import constant, divide_out_zero, evaluate, exp_function, from_values, multiply
from kummerlab.padic import PadicApprox, ord_p
from kummerlab.solver import (
    find_fixed_point,
    find_two_zeros,
    find_zero,
    find_zero_degenerate,
    verify_zero_relations,
)

CASES = [(37, 32, 1), (19, 10, -4), (19, 8, 5), (59, 44, 1), (67, 58, 1), (101, 68, 1)]


def wks0(p, l, D, N=9):
    return build_Lpl(LplSpec(p, l, QuadChar(D), N))


def test_zero_of_exp_minus_one():
    p = 7
    f = from_values(p, [pow(1 + p, k, p**8) - 1 for k in range(8)], 8)
    assert find_zero(f, 6).digits.digits == (0,) * 6


def test_fixed_point_of_constant():
    f = constant(5 + 3 * 7, 7, 6)
    assert find_fixed_point(f, 5).value == 5 + 3 * 7


def test_not_in_wks0():
    with pytest.raises(NotInWKS0):
        find_zero(exp_function(8, 7, 5), 4)


def test_precision_exhausted():
    with pytest.raises(PrecisionExhausted):
        find_zero(wks0(37, 32, 1, 6), 6)


@pytest.mark.parametrize("p,l,D", CASES)
def test_method_agreement_and_residuals(p, l, D):
    f = wks0(p, l, D)
    a = find_zero(f, 8, "coefficients")
    b = find_zero(f, 8, "values")
    assert a.digits == b.digits
    assert find_zero(f, 7).digits.digits == a.digits.digits[:7]
    assert evaluate(f, a.value, 8).residue % p**9 == 0
    tau = find_fixed_point(f, 8).value
    assert (evaluate(f, tau, 7).residue - tau) % p**8 == 0


@pytest.mark.parametrize("p,l,D", CASES[:3])
def test_uniqueness_probe(p, l, D):
    f = wks0(p, l, D)
    xi = find_zero(f, 8).value
    rng = random.Random(p)
    for _ in range(100):
        s = rng.randrange(p**6)
        if (s - xi) % p**6 == 0:
            continue
        assert evaluate(f, s, 8).valuation() == 1 + ord_p(s - xi, p)


@pytest.mark.parametrize("p,l,D", CASES[:3])
def test_relations(p, l, D):
    f = wks0(p, l, D, 11)
    xi = find_zero(f, 10).digits
    tau = find_fixed_point(f, 10).digits
    rep = verify_zero_relations(f, xi, tau)
    assert rep["ord_f0"] == rep["ord_tau"] == 1 + rep["ord_xi"]


def test_synthetic_zero_at_one():
    p = 7
    N = 8
    vals = [p * (s - 1) * pow(8, s, p ** (N + 1)) for s in range(N)]
    f = from_values(p, vals, N)
    assert find_zero(f, 6).value == 1


def test_degenerate_zero_at_origin():
    p = 7
    base = from_values(p, [pow(1 + p, k, p**9) - 1 for k in range(9)], 9)
    # ((1+p)^s - 1) p (s - 3) = p s g(s) with g(3) = 0
    g = multiply(base, from_values(p, [p * (k - 3) for k in range(9)], 9))
    f = type(g)(p, (PadicApprox.zero(p, 9), *g.coeffs[1:]), 9)
    z = find_zero_degenerate(divide_out_zero(f), 5)
    assert z.digits.digits[0] == 3


@settings(max_examples=15, deadline=None)
@given(a=st.integers(1, 36), b=st.integers(1, 36), u=st.integers(1, 10**4))
def test_two_zeros_of_product(a, b, u):
    p = 37
    if (a - b) % p == 0:
        return
    N = 8
    fa = from_values(p, [p * (s - a) for s in range(N)], N)
    fb = from_values(p, [p * (s - b) * pow(1 + p * u, s, p**N) for s in range(N)], N)
    z1, z2 = find_two_zeros(multiply(fa, fb), 5, [a, b])
    assert z1.value == a
    assert z2.value % p == b


def test_two_zeros_norm_law():
    p = 37
    g = build_product_L([LplSpec(p, 32, PRINCIPAL, 12), LplSpec(p, 32, QuadChar(77), 12)])
    z1, z2 = find_two_zeros(g, 10)
    rng = random.Random(3)
    for _ in range(100):
        s = rng.randrange(p**7)
        d = ord_p(s - z1.value, p) + ord_p(s - z2.value, p)
        if d >= 8:
            continue
        assert evaluate(g, s, 10).valuation() == 2 + d


def test_two_zeros_with_degenerate_route():
    f = build_Lpl(LplSpec(13, 0, QuadChar(-3), 13))
    z1, z2 = find_two_zeros(f, 10, [0])
    assert z1.value == 0
    assert z2.digits == (3, 8, 2, 11, 1, 1, 10, 12, 7, 1)
