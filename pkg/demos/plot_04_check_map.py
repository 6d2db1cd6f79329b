"""
The check map and its inverse
=============================

For extendible d the extension sends U to (check d) U.  The check map is a
homomorphism whose kernel is the constants; it is computed from the
certificate and, independently, from a finite product of compressions.
Its image among localized unitaries is exactly the tables whose entry
product is a root of unity of 2-power order.
"""

from q2diag import DiagonalUnitary, Phase, check_map, check_product_formula, dmul, invert_check
from q2diag import decide_extendible
from q2diag.extend import coboundary

d1 = coboundary(DiagonalUnitary.from_turns([0, 1, 3, 2], den=4))
d2 = coboundary(DiagonalUnitary.from_turns([0, 5], den=8), Phase.dyadic(1, 3))
print("check(d1 d2) == check(d1) check(d2):", check_map(dmul(d1, d2)) == dmul(check_map(d1), check_map(d2)))
print("check of a constant:", check_map(DiagonalUnitary.constant(Phase.dyadic(3, 4))))

c = DiagonalUnitary.from_turns([1, 3], den=8)
pre = invert_check(c)
print("preimage of", c, "is", pre.d)
cert = decide_extendible(pre.d).certificate
print("its check:", cert.check)
print("product formula agrees:", check_product_formula(pre.d, cert.check.eval_at(0)) == cert.check)

# %%
# A third root of unity is not the check of any localized unitary.
print(invert_check(DiagonalUnitary.constant(Phase.rational(1, 3))).reason)
