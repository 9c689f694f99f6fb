"""
How far the cyclic shifts reach
===============================

Exhaustively confirm that any s error exponents can be shifted off the
information set, and see the property break one step past the bound.
"""

import math

from grmpd.infoset import Decomposition, build_infoset
from grmpd.permdec import s_pd_bound, verify_pd_like

for q, m, r1, r2 in [(4, 2, 5, 3), (3, 3, 13, 2), (5, 2, 3, 8)]:
    dec = Decomposition(q, m, r1, r2)
    lam0, s = s_pd_bound(dec)
    res = verify_pd_like(dec, build_infoset(dec).exponents, s)
    print(f"q={q} m={m} s={s}: {'PASS' if res else 'FAIL'} over {res.checked} of {math.comb(dec.n, s)} subsets")

# one past the bound for n = 15
dec = Decomposition(4, 2, 5, 3)
res = verify_pd_like(dec, build_infoset(dec).exponents, 9)
print("s=9:", "PASS" if res else f"FAIL, e.g. {res.counterexample}")

# sampled mode for a length where enumeration is out of reach
dec = Decomposition(3, 6, 7, 104)
res = verify_pd_like(dec, build_infoset(dec).exponents, 207, mode="sampled", trials=20000)
print("q=3 m=6 s=207 sampled:", "PASS" if res else "FAIL")
