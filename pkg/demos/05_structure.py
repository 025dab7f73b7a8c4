"""
Factoring L(1 - n, chi)
=======================

The rational number |B_{n,chi}/n| splits into primes dividing the
conductor, primes p with p - 1 | n, and irregular primes.  Whatever is left
has no prime factor below the search bound.  For odd characters the
p - 1 | n part is refined further, and the predicted exponents of the
irregular primes are compared with the true ones.
"""

from kummerlab import PRINCIPAL, QuadChar
from kummerlab.lfunc import structure_check

for n, chars in ((32, PRINCIPAL), (10, QuadChar(-4)), (12, QuadChar(-3)), (20, (PRINCIPAL, QuadChar(77)))):
    r = structure_check(n, chars)
    print(f"n={n}: |L| = {r.value}")
    print(f"   I={r.I} S={r.S} D={r.D} cofactor={r.cofactor} holds={r.holds}")
    if r.d_parts:
        print("   " + " ".join(f"{k}={v}" for k, v in r.d_parts.items()))
    for c in r.conjectures:
        print(f"   p={c['p']} l={c['l']}: ord={c['ord']} predicted={c['predicted']}")
