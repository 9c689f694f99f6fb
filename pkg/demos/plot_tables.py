"""
Correction bounds and the <T2>-only probability
===============================================

Regenerate the bounds tables and compare the exact inclusion-exclusion
probability with a Monte Carlo estimate.
"""

from grmpd.analysis import PROBABILITY_ROWS, emit_tables, probability_row

print(emit_tables([3, 4, 5], range(2, 11), fmt="markdown", probability=False))

for q, m, r1, r2 in PROBABILITY_ROWS:
    res = probability_row(q, m, r1, r2, trials=20000, seed=1)
    print(f"q={q} m={m} r1={r1} r2={r2} s={res.s}: exact {res.p_decimal(6)}  mc {res.mc_estimate:.5f}")
