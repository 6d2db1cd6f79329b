"""
The odometer on finite Cantor cylinders
=======================================

Words over {1, 2} of length k index the cylinders of the Cantor set.  Read
with letter 1 as bit 1, first letter least significant, a word is a residue
mod 2^k, and the odometer step becomes subtraction of one.
"""

from q2diag.cantor import Word, birkhoff_average, odometer_orbit, word_to_residue

# the orbit of 222 visits all eight words of length 3 before returning
for w in odometer_orbit(3):
    print(w, "->", word_to_residue(w).value)

# time averages of cylinder indicators are the fair-coin masses
for cyl in ("1", "2", "11", "212"):
    print(f"average of [{cyl}] at level 6:", birkhoff_average(6, Word.parse(cyl)))
