"""
Exact phases on the unit circle
===============================

Every phase is stored as a turn t, meaning exp(2 pi i t).  Dyadic turns
(denominator a power of two) and other rationals compare exactly; float
angles exist only to cross-check exact results numerically.
"""

from q2diag.phases import Phase, classify_two_power_root

# i squared is -1, and that equality is structural, not a tolerance check
i = Phase.dyadic(1, 2)
print("i * i =", repr(i * i))

# a primitive third root never reaches 1 by repeated squaring
w = Phase.rational(1, 3)
print("order class of e^(2 pi i/3):", classify_two_power_root(w))
print("order class of e^(2 pi i 3/8):", classify_two_power_root(Phase.dyadic(3, 3)))

# the float tier meets the exact one within 1e-12
approx = Phase.angle(3.141592653589793 / 2)
print("angle(pi/2) == i ?", approx == i)
print("complex value of w:", complex(w))
