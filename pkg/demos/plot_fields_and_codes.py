"""
Finite fields and first-order GRM codes
=======================================

Build GF(27), look at its subfield GF(3), then construct R_3(1,3) two
independent ways and check they agree.
"""

import numpy as np

from grmpd import linalg
from grmpd.fields import build_field, subfield_embed, trace
from grmpd.grm_code import build_code, eval_code_oracle

# GF(27) from the first monic irreducible cubic over GF(3)
F = build_field(3, 3)
print(F)
print("primitive element:", F.prim, " order:", F.order)

# powers of the primitive element walk through every nonzero element
print("alpha^0..alpha^8:", F.alpha_pow(np.arange(9)))

# GF(3) sits inside as {0, 1, alpha^13}
beta, members = subfield_embed(F, 3)
print("subfield members:", members)

# the trace map GF(27) -> GF(3) is balanced: 9 preimages per value
tr = trace(F, 3, np.arange(27))
print("trace counts:", {int(v): int((tr == v).sum()) for v in members})

# R_3(1,3) from its defining set, brute-forced distance included
code = build_code(3, 3, 1)
print(code.descriptor())

# the same code as evaluations of u -> Tr(lambda u) + b
oracle = eval_code_oracle(3, 3)
print("row spaces equal:", linalg.row_space_equal(code.sub, code.gen_matrix, oracle))

# a larger code falls back on the distance formula
big = build_code(5, 6, 1)
print(big.descriptor())
