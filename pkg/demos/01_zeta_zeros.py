"""
Zeros and fixed points of a p-adic zeta function
================================================

The pair (37, 32) is the smallest irregular pair: 37 divides the numerator
of B_32.  The function zeta_{37,32}(s) = L_p(1 - (32 + 36 s)) then has a
unique simple zero and a unique fixed point in Z_37.
"""

from kummerlab import PRINCIPAL
from kummerlab.lfunc import LplSpec, build_Lpl, smallest_indices, verify_smallest_indices
from kummerlab.mahler import classify, evaluate
from kummerlab.solver import find_fixed_point, find_zero, verify_zero_relations

p, l = 37, 32

# Build the Mahler coefficients from ten exact Bernoulli quotients.
f = build_Lpl(LplSpec(p, l, PRINCIPAL, 11))
c = classify(f)
print(f"class {c.label}: Delta_f = {c.delta_f}, lambda_f = {c.lambda_f}, ord f(0) = {c.ord_f0}")

# Solve for the zero by both lifting methods; they must agree digit for digit.
xi = find_zero(f, 10, "coefficients")
assert xi.digits == find_zero(f, 10, "values").digits
tau = find_fixed_point(f, 10)
print("zero        xi :", xi.digits)
print("fixed point tau:", tau.digits)

# The zero, the fixed point and f(0) are tied together.
print("relations:", verify_zero_relations(f, xi.digits, tau.digits))
print("f(xi) mod 37^10 =", evaluate(f, xi.value, 9).residue)

# Truncations of xi give the smallest n with 37^nu | B_n/n in the class of 32.
idx = smallest_indices(p, l, PRINCIPAL, 5, zero=xi)
print("smallest indices:", idx)
print("valuations of the first three:", verify_smallest_indices(p, l, PRINCIPAL, idx[:3]))
