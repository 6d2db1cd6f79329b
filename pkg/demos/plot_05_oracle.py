"""
Checking a certificate in the canonical representation
======================================================

The oracle pushes basis vectors e_m of l2(Z) through generator words
(S2 e_m = e_2m, U e_m = e_m+1) on a finite window.  It only reads table
entries, so agreement with the exact solver is independent evidence.
"""

from q2diag import DiagonalUnitary, decide_extendible, verify_certificate, x_sequence
from q2diag.reptrunc import S2, U, verify_identity, word

# the defining relation S2 U = U^2 S2, on the part of the window that is safe
rep = verify_identity(word(S2, U), word(U, U, S2), 64)
print("S2 U = U U S2:", rep.passed, "on", rep.safe_window)

d = DiagonalUnitary.from_turns([0, 1, 1, 0], den=2)
cert = decide_extendible(d).certificate
for name, r in verify_certificate(cert).items():
    print(name, "passed:", r.passed, "basis vectors checked:", r.checked)

# %%
# x_k tends to the check map entrywise.  Entries with 2^k | m are cut by
# the projection Q_k, so e_m settles at step v2(m) + 1.
xs = x_sequence(cert, 10, 64)
for m in (1, 2, 8, 32, -64):
    print(f"m = {m:4d}: settles at step {xs.entry_stable_from[m]}")
