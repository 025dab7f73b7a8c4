"""
Exceptional primes for odd characters
=====================================

For odd chi with chi(p) = 1 the function L_{p,0}(s, chi) vanishes at s = 0.
The prime is exceptional when the value at s = 1 is divisible by p^2.  A
sieve on the Fermat-quotient function T^2 finds candidates mod p, and each
one is confirmed with Bernoulli numbers computed by power sums.
"""

import time

from kummerlab.charnum import QuadChar, bernoulli_over_n_mod
from kummerlab.lfunc import build_tilde_L, scan_exceptional
from kummerlab.solver import find_zero_degenerate

chi = QuadChar(-3)
t = time.time()
res = scan_exceptional(chi, range(2, 3001))
print(f"exceptional primes for chi_-3 below 3000 ({time.time() - t:.1f}s):")
for pair in res.pairs:
    print("  ", pair.line())

# Dividing out the zero at s = 0 leaves a degenerate function with a zero of its own.
g = build_tilde_L(13, chi, 13)
print("\ntilde-L_13: Delta =", g.delta, " zero =", find_zero_degenerate(g, 10).digits)

# Euler numbers come from chi_-4: E_n = -2 B_{n+1,chi_-4}/(n+1).
p = 29789
m3 = p**3
e1 = -2 * bernoulli_over_n_mod(p, QuadChar(-4), p, 3).residue % m3
e2 = -2 * bernoulli_over_n_mod(2 * p - 1, QuadChar(-4), p, 3).residue % m3
print(f"\np = {p}: E_(p-1) = {e1}, E_(2(p-1)) = {e2}, difference = {(e2 - 2 * e1) % m3}  (mod p^3)")
