"""
L-functions of quadratic characters
===================================

Replacing the trivial character by a Kronecker symbol gives functions
L_{p,l}(s, chi) with the same structure.  For the product of two such
functions the mod-p derivative can vanish, and the product then has two
zeros, found one at a time by rescaling around each root of a quadratic.
"""

from kummerlab import PRINCIPAL, QuadChar
from kummerlab.lfunc import LplSpec, build_Lpl, build_product_L
from kummerlab.mahler import classify, evaluate
from kummerlab.solver import find_fixed_point, find_two_zeros, find_zero

for p, l, D in ((19, 10, -4), (19, 8, 5)):
    f = build_Lpl(LplSpec(p, l, QuadChar(D), 11))
    c = classify(f)
    print(f"L_({p},{l})(chi_{D}): Delta={c.delta_f} lambda={c.lambda_f} "
          f"ord f(0)={c.ord_f0} ord f(1)={evaluate(f, 1, 4).valuation()}")
    print("   xi :", find_zero(f, 10).digits)
    print("   tau:", find_fixed_point(f, 10).digits)

# zeta_{37,32} times L_{37,32}(., chi_77): Delta = 0 and lambda = 2.
g = build_product_L([LplSpec(37, 32, PRINCIPAL, 12), LplSpec(37, 32, QuadChar(77), 12)])
c = classify(g)
print(f"\nproduct: Delta={c.delta_f} lambda={c.lambda_f} class={c.label} ({c.product_label})")
z1, z2 = find_two_zeros(g, 10)
print("   xi_1:", z1)
print("   xi_2:", z2)
print("   tau :", find_fixed_point(g, 10).digits)
