"""
Fermat quotients and T-functions
================================

The functions T^r_{p,l}(s, chi) are finite sums of Fermat quotients.  They
agree with L_{p,l}(s, chi) mod p, have twice the mod-p derivative, and their
zeros and fixed points are linked to those of the L-function.
"""

from kummerlab import PRINCIPAL, QuadChar
from kummerlab.fermat import TSpec, build_T, congruence_suite, fermat_quotient, kappa_probe
from kummerlab.solver import find_fixed_point, find_zero

print("q(2) mod 1093 =", fermat_quotient(2, 1093, 1).residue, "(a Wieferich prime)")

for p, l, chi in ((37, 32, PRINCIPAL), (19, 10, QuadChar(-4))):
    f = build_T(TSpec(p, l, 1, chi, 11))
    print(f"\nT_({p},{l})({chi.label}): Delta = {f.delta}")
    print("   xi :", find_zero(f, 10).digits)
    print("   tau:", find_fixed_point(f, 10).digits)
    rep = congruence_suite(p, l, chi)
    for name, ok in rep.checks.items():
        print(f"   {name:18s} {'n/a' if ok is None else ok}")

print("\nkappa probe at p = 7:", kappa_probe(7))
