"""
Exhaustive sweeps
=================

Enumerate every table on a grid of 2-power roots, keep the extendible ones
that satisfy a predicate.  Each of these comes out as the identity alone.
"""

import time

from q2diag import run_sweep

for level, order, pred, cob in (
    (2, 8, "FIXEDPOINT", True),
    (3, 8, "S2FIXED", False),
    (4, 4, "S2_AND_S1SQ_FIXED", False),
):
    t0 = time.perf_counter()
    res = run_sweep(level, order, pred, coboundary_mode=cob)
    print(f"{pred:18s} level {level} roots:{order:<2d} candidates {res.candidates:5d} "
          f"extendible {res.extendible:4d} survivors {res.survivors} ({time.perf_counter() - t0:.2f}s)")
