"""p-adic L-function builders, scanners, structure checks and index tables."""

import os
from fractions import Fraction

import pytest

from kummerlab.charnum import PRINCIPAL, QuadChar, bernoulli, gen_bernoulli
from kummerlab.errors import DigitDepthExceeded, NotPIntegral, ParityMismatch, UnsupportedCase
from kummerlab.fermat import t_values_mod_p
from kummerlab.lfunc import (
    LplSpec,
    build_Lpl,
    build_product_L,
    build_tilde_L,
    lp_value,
    primes_up_to,
    read_scan,
    scan_exceptional,
    scan_irregular,
    smallest_indices,
    strong_kummer_check,
    strong_kummer_witness,
    structure_check,
    verify_smallest_indices,
    write_scan,
)
from kummerlab.mahler import classify, evaluate, evaluate_degenerate, from_values, multiply, values
from kummerlab.padic import PadicApprox, ord_p
from kummerlab.solver import find_zero

CHI_M3, CHI_M4, CHI_5, CHI_77 = QuadChar(-3), QuadChar(-4), QuadChar(5), QuadChar(77)


def exact_lp(n, chi, p):
    b = bernoulli(n) if chi.is_principal else gen_bernoulli(n, chi)
    return -(1 - chi(p) * Fraction(p) ** (n - 1)) * b / n


def test_lp_value_examples():
    assert lp_value(2, PRINCIPAL, 5, 4) == PadicApprox.from_rational(Fraction(1, 3), 5, 4)
    assert lp_value(1, CHI_M3, 7, 5).exact_zero
    # chi(p) = -1: the Euler factor doubles -B_1
    v = lp_value(1, CHI_M3, 5, 4)
    assert v == PadicApprox.from_rational(-2 * gen_bernoulli(1, CHI_M3), 5, 4)
    with pytest.raises(NotPIntegral):
        lp_value(12, PRINCIPAL, 13, 3)


@pytest.mark.parametrize("p,l,D", [(37, 32, 1), (19, 10, -4), (19, 8, 5), (13, 2, 1), (7, 0, -3), (11, 4, -8)])
def test_build_passes_kummer_congruences(p, l, D):
    chi = QuadChar(D)
    spec = LplSpec(p, l, chi, 6)
    f = build_Lpl(spec)
    g = from_values(p, values(f), 6)
    assert g.coeffs == f.coeffs
    for s in range(1, 5):
        n = spec.index(s)
        got = evaluate(f, s, 5).residue
        want = exact_lp(n, chi, p)
        assert (want.numerator - got * want.denominator) % p**6 == 0


def test_shifted_value_at_zero():
    f = build_Lpl(LplSpec(7, 0, CHI_M3, 5))
    assert f.coeffs[0].exact_zero or f.coeffs[0].residue == 0


def test_spec_validation():
    with pytest.raises(UnsupportedCase):
        LplSpec(37, 0, PRINCIPAL, 5).validate()
    with pytest.raises((ValueError, UnsupportedCase)):
        LplSpec(37, 3, PRINCIPAL, 5).validate()


def test_classifications():
    c = classify(build_Lpl(LplSpec(37, 32, PRINCIPAL, 6)))
    assert (c.delta_f, c.lambda_f) == (16, 1)
    c = classify(build_Lpl(LplSpec(19, 10, CHI_M4, 6)))
    assert (c.delta_f, c.lambda_f) == (5, 1)
    f = build_Lpl(LplSpec(13, 0, CHI_M3, 5))
    assert classify(f).lambda_f == 2
    assert evaluate(f, 1, 4).valuation() == 2
    assert f.coeffs[2].valuation() == 0


def test_product():
    p = 37
    f = build_product_L([LplSpec(p, 32, PRINCIPAL, 6), LplSpec(p, 32, CHI_77, 6)])
    c = classify(f)
    assert (c.delta_f, c.lambda_f, c.ord_f0) == (0, 2, 2)
    assert evaluate(f, 1, 5).valuation() == 2
    z = build_Lpl(LplSpec(p, 32, PRINCIPAL, 6))
    assert classify(multiply(z, z)).lambda_f == 2
    unit = build_Lpl(LplSpec(p, 30, PRINCIPAL, 6))
    assert classify(multiply(z, unit)).lambda_f == 1
    with pytest.raises(ParityMismatch):
        build_product_L([LplSpec(p, 32, PRINCIPAL, 6), LplSpec(p, 32, CHI_M3, 6)])


def test_tilde_L():
    g = build_tilde_L(13, CHI_M3, 8)
    assert g.delta == 3
    # p = 7 is not exceptional for chi_-3: tilde-L is a unit everywhere
    h = build_tilde_L(7, CHI_M3, 6)
    assert all(evaluate_degenerate(h, s, 1).residue % 7 for s in range(1, 15))
    with pytest.raises(UnsupportedCase):
        build_tilde_L(13, CHI_5, 6)


def test_tilde_L_norm_law():
    p = 13
    f = build_Lpl(LplSpec(p, 0, CHI_M3, 8))
    xi = (3, 8, 2, 11, 1, 1, 10)
    x = sum(d * p**i for i, d in enumerate(xi))
    for s in range(1, 400, 7):
        if s % p == 0 or (s - x) % p**5 == 0:
            continue
        want = 2 + ord_p(s, p) + ord_p(s - x, p)
        assert evaluate(f, s, 7).valuation() == want


def test_irregular_scan_matches_bernoulli_oracle():
    got = {(pr.p, pr.l) for pr in scan_irregular(PRINCIPAL, range(2, 400)).pairs}
    want = {
        (p, l)
        for p in primes_up_to(399)
        if p > 3
        for l in range(2, p - 2, 2)
        if bernoulli(l).numerator % p == 0
    }
    assert got == want
    assert {(37, 32)} == {(pr.p, pr.l) for pr in scan_irregular(PRINCIPAL, [37]).pairs}
    assert scan_irregular(PRINCIPAL, [13]).pairs == []
    assert (19, 8) in {(pr.p, pr.l) for pr in scan_irregular(CHI_5, [19]).pairs}


def test_irregular_scan_chi_oracle():
    for chi in (CHI_M4, CHI_5, CHI_M3):
        got = {(pr.p, pr.l) for pr in scan_irregular(chi, range(5, 120)).pairs}
        want = set()
        for p in primes_up_to(119):
            if p < 5 or chi.conductor % p == 0:
                continue
            for l in range(0 if chi.parity else 2, p - 2, 2):
                n = chi.parity + l
                if n == 1 and chi(p) == 1:
                    continue
                if ord_p(exact_lp(n, chi, p), p) >= 1:
                    want.add((p, l))
        assert got == want, chi


def test_exceptional_criterion_equivalence():
    for chi in (CHI_M3, CHI_M4):
        for p in primes_up_to(3000):
            if p <= 3 or chi(p) != 1:
                continue
            sieve = t_values_mod_p(p, chi, 2, [0])[0] == 0
            direct = lp_value(p, chi, p, 3).valuation() >= 2
            assert sieve == direct, (chi.D, p)


def test_scan_persistence(tmp_path):
    path = os.path.join(tmp_path, "exc.txt")
    res = scan_exceptional(CHI_M3, range(2, 400), checkpoint=path)
    kind, pairs, through = read_scan(path)
    assert kind == "EXC1"
    assert [pr.p for pr in pairs] == res.primes == [13, 181]
    assert through >= 397
    path2 = os.path.join(tmp_path, "irr.txt")
    irr = scan_irregular(PRINCIPAL, range(2, 200))
    write_scan(path2, "IRR1", irr.pairs, 199)
    kind, pairs, through = read_scan(path2)
    assert kind == "IRR1" and [(x.p, x.l) for x in pairs] == [(x.p, x.l) for x in irr.pairs]


def test_scan_jobs_deterministic():
    a = scan_irregular(PRINCIPAL, range(2, 300))
    b = scan_irregular(PRINCIPAL, range(2, 300), jobs=2)
    assert [x.line() for x in a.pairs] == [x.line() for x in b.pairs]


def test_structure_examples():
    r = structure_check(2, PRINCIPAL)
    assert r.value == Fraction(1, 12) and r.D == Fraction(1, 12) and r.I == 1 and r.cofactor == 1
    r = structure_check(32, PRINCIPAL)
    assert r.I == 37 and r.holds
    r = structure_check(10, CHI_M4)
    assert r.I == 19 and r.holds
    r = structure_check(12, CHI_M3)
    assert r.d_parts["D0"] == 13 and r.holds


def test_structure_sweep_reported():
    """Decompositions must hold; conjecture distances are only printed."""
    for chars in (PRINCIPAL, CHI_M4, CHI_M3, CHI_5, (PRINCIPAL, CHI_77)):
        for n in range(2, 62, 2):
            r = structure_check(n, chars)
            assert r.holds, (chars, n)
            for c in r.conjectures:
                print(f"structure n={n} p={c['p']} l={c['l']} ord={c['ord']} predicted={c['predicted']} agree={c['agree']}")


def test_smallest_indices_synthetic_zero_digit():
    p, l = 19, 8
    f = build_Lpl(LplSpec(p, l, CHI_5, 5))
    z = find_zero(f, 4)
    assert z.digits.digits[0] == 0
    idx = smallest_indices(p, l, CHI_5, 3, zero=z)
    assert idx[0] == l + (p - 1)
    assert verify_smallest_indices(p, l, CHI_5, idx) == [1, 2, 3]
    with pytest.raises(DigitDepthExceeded):
        smallest_indices(p, l, CHI_5, 5, zero=z)


def test_strong_kummer():
    assert strong_kummer_check(37, 32)
    assert strong_kummer_check(13, 2)
    assert strong_kummer_witness(37, 32) is None
    found = []
    for p in primes_up_to(60):
        if p < 5:
            continue
        for l in range(2, p - 1, 2):
            w = strong_kummer_witness(p, l)
            if w is not None:
                n, m, r = w
                assert (n - m) % (p - 1) == 0
                # congruent mod p^2 although n and m differ only mod p - 1 once
                assert ord_p(exact_lp(n, PRINCIPAL, p) - exact_lp(m, PRINCIPAL, p), p) >= r
                found.append((p, l))
    assert (13, 4) in found
