"""
Decompositions and information sets
====================================

Split n = q^m - 1 into coprime factors and read off an information set
of size m + 1 through the CRT map.
"""

from grmpd import linalg
from grmpd.grm_code import build_code
from grmpd.infoset import build_infoset, crt_table, find_decompositions, verify_infoset

for q, m in [(3, 2), (3, 3), (4, 2), (3, 6)]:
    decs = find_decompositions(q, m)
    print(q, m, [(d.r1, d.r2) for d in decs])

# n = 15 = 5 * 3; exponents i with i mod 3 == 0 and i mod 5 < 2
dec = find_decompositions(4, 2)[0]
p1, p2 = crt_table(dec)
print("i -> (i mod 5, i mod 3):", list(zip(p1.tolist(), p2.tolist()))[:8], "...")
info = build_infoset(dec)
print("gamma:", info.gamma, " exponents:", info.exponents, " positions:", info.positions)

code = build_code(4, 2, 1)
print("information set:", verify_infoset(code, info))

# position 0 is essential: the other m positions only reach rank m
rest = list(info.positions[1:])
print("rank without position 0:", linalg.rank(code.sub, code.gen_matrix[:, rest]), "of", code.k)
