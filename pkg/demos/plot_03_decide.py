"""
Deciding extendibility and reading a certificate
================================================

A localized diagonal unitary d extends to the 2-adic ring algebra exactly
when d = z d' phi(d')* for a phase z and a localized d'.  The solver either
returns that split, with the check map, or a witness of failure.
"""

from q2diag import DiagonalUnitary, Phase, decide_extendible
from q2diag.extend import coboundary

one, minus = Phase.dyadic(0, 0), Phase.dyadic(1, 1)
i = Phase.dyadic(1, 2)

# %%
# The worked example (1, -1, -1, 1) is U_z phi(U_z)* for z = -1.
d = DiagonalUnitary.from_phases([one, minus, minus, one])
cert = decide_extendible(d).certificate
print("gauge:", cert.gauge, " inner:", cert.inner, " check:", cert.check)

# %%
# d(0) != d(-1) already rules extension out: the two isometries d S2 and
# d S1 would have different eigenvalues.
print(decide_extendible(DiagonalUnitary.from_phases([one, i])).obstruction)

# %%
# Here the point spectra agree but the cocycle equation is inconsistent.
# The witness is a closed walk of constraints with phase product i.
bad = decide_extendible(DiagonalUnitary.from_phases([one, i, one, one]))
print(bad.obstruction)

# %%
# Any z d' phi(d')* comes back with z and d' (normalized to d'(0) = 1).
dp = DiagonalUnitary.from_turns([0, 3, 5, 7], den=16)
res = decide_extendible(coboundary(dp, Phase.dyadic(5, 4)))
print("recovered gauge:", res.certificate.gauge)
print("recovered inner:", res.certificate.inner)
