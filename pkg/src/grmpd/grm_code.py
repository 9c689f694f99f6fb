"""Generalized Reed-Muller codes R_q(rho, m) as affine-invariant codes.

Codewords are vectors of length ``q**m`` over GF(q) (canonical subfield
indices).  Position 0 is the field element 0 and position ``1 + i`` is
``prim**i``, so a vector ``v`` reads ``v[0] X^0 + sum_i v[1+i] X^(prim^i)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exceptions import CapExceeded, InfoSetError
from .fields import FieldCtx, SubField, code_fields

DEFAULT_LENGTH_CAP = 2 ** 16
DEFAULT_KERNEL_CAP = 256
DEFAULT_ENUM_CAP = 10 ** 6
# entries (codewords x length) allowed for the automatic distance check
DEFAULT_DISTANCE_BUDGET = 5 * 10 ** 7


def q_weight(k, q):
    """Sum of the base-q digits of ``k``."""
    if q < 2:
        raise ValueError("q must be at least 2")
    w = 0
    while k:
        k, r = divmod(k, q)
        w += r
    return w


def defining_set(q, m, rho):
    """Exponents ``0 <= i < q^m - 1`` with ``wt_q(i) < m(q-1) - rho``."""
    if not 0 < rho <= m * (q - 1):
        raise ValueError(f"rho={rho} out of range (0, {m * (q - 1)}]")
    bound = m * (q - 1) - rho
    return [i for i in range(q ** m - 1) if q_weight(i, q) < bound]


def cyclotomic_cosets(q, n, subset=None):
    """q-cyclotomic cosets modulo ``n``, restricted to ``subset`` if given."""
    pool = set(range(n)) if subset is None else set(subset)
    cosets = []
    seen = set()
    for s in sorted(pool):
        if s in seen:
            continue
        coset = []
        x = s
        while x not in coset:
            coset.append(x)
            x = x * q % n
        seen.update(coset)
        cosets.append(coset)
    return cosets


def position_elements(field):
    """Ambient field element at each position: ``[0, prim^0, ..., prim^(n-1)]``."""
    return np.concatenate([[0], field.antilog_table]).astype(np.int64)


def field_sum(field, xs, axis=-1):
    """Sum of ambient elements along ``axis``."""
    xs = np.asarray(xs, dtype=np.int64)
    d = field.digits[xs].sum(axis=axis if axis >= 0 else axis - 1) % field.p
    return d @ field._pows


@dataclass
class GrmCode:
    """A constructed code R_q(rho, m).

    ``d`` is exact when ``d_verified`` is set; otherwise it is the first-order
    formula value ``q^(m-1)(q-1)`` (or ``None`` for higher orders).
    """

    q: int
    m: int
    rho: int
    field: FieldCtx
    sub: SubField
    defining_set: tuple
    gen_matrix: np.ndarray
    d: int | None = None
    d_verified: bool = False
    _par_matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self):
        return self.q ** self.m - 1

    @property
    def length(self):
        return self.q ** self.m

    @property
    def k(self):
        return self.gen_matrix.shape[0]

    @property
    def t(self):
        return None if self.d is None else (self.d - 1) // 2

    @property
    def par_matrix(self):
        if self._par_matrix is None:
            self._par_matrix = linalg.nullspace(self.sub, self.gen_matrix)
        return self._par_matrix

    def contains(self, v):
        """Membership test for one vector or a stack of vectors."""
        v = np.asarray(v, dtype=np.int64)
        syn = linalg.matmul(self.sub, np.atleast_2d(v), self.par_matrix.T)
        ok = ~syn.any(axis=1)
        return bool(ok[0]) if v.ndim == 1 else ok

    def codeword(self, msg):
        return linalg.matmul(self.sub, np.atleast_2d(msg), self.gen_matrix)[0]

    def random_codeword(self, rng):
        return self.codeword(rng.integers(0, self.q, size=self.k))

    def descriptor(self):
        return {"q": self.q, "m": self.m, "rho": self.rho, "n": self.n,
                "k": self.k, "d": self.d, "d_verified": self.d_verified}


def check_map_phi(code, s, v):
    """phi_s(v) = 0^s b + sum_i a_i prim^(i s), an element of GF(q^m).

    ``0^0`` is taken as 1, ``0^s`` as 0 for ``s > 0``.
    """
    n = code.n
    if not 0 <= s < n:
        raise ValueError(f"s={s} outside [0, {n})")
    v = np.asarray(v, dtype=np.int64)
    F, amb = code.sub, code.field
    coeffs = _phi_row(amb, n, s)
    terms = amb.mul(F.to_ambient[v], coeffs)
    return int(field_sum(amb, terms))


def _phi_row(amb, n, s):
    head = 1 if s == 0 else 0
    return np.concatenate([[head], amb.alpha_pow(np.arange(n) * s)]).astype(np.int64)


def _kernel_generator(amb, F, q, m, D):
    n = q ** m - 1
    blocks = []
    # phi_{qs}(v) = phi_s(v)^q for v over GF(q): one constraint per coset
    for coset in cyclotomic_cosets(q, n, D):
        row = _phi_row(amb, n, coset[0])
        blocks.append(F.coords[row].T)
    if not blocks:
        return np.eye(q ** m, dtype=np.int64)
    return linalg.nullspace(F, np.vstack(blocks))


def _cyclic_generator(amb, F, q, m, D):
    n = q ** m - 1
    Dset = set(D)
    g = np.array([1], dtype=np.int64)
    for coset in cyclotomic_cosets(q, n, Dset - {0}):
        # minimal polynomial of prim^coset[0] over GF(q)
        mp = np.array([1], dtype=np.int64)
        for s in coset:
            root = int(amb.alpha_pow(s))
            shifted = np.concatenate([[0], mp])
            scaled = np.concatenate([amb.mul(root, mp), [0]])
            mp = amb.sub(shifted, scaled)
        mp = F.from_ambient[mp]
        if (mp < 0).any():
            raise RuntimeError("minimal polynomial has coefficients outside GF(q)")
        out = np.zeros(len(g) + len(mp) - 1, dtype=np.int64)
        for t, c in enumerate(mp):
            if c:
                out[t:t + len(g)] = F.add_table[out[t:t + len(g)], F.mul_table[c, g]]
        g = out
    k_star = n - (len(g) - 1)
    rows = np.zeros((k_star, n), dtype=np.int64)
    for j in range(k_star):
        rows[j, j:j + len(g)] = g
    if 0 in Dset:
        # b = -(sum of the cyclic part), the extension of the cyclic code
        heads = F.neg_table[_gf_row_sums(F, rows)]
        G = np.hstack([heads[:, None], rows])
    else:
        G = np.hstack([np.zeros((k_star, 1), dtype=np.int64), rows])
        e0 = np.zeros((1, n + 1), dtype=np.int64)
        e0[0, 0] = 1
        G = np.vstack([e0, G])
    return G


def _gf_row_sums(F, M):
    ones = np.ones(M.shape[1], dtype=np.int64)
    return linalg.matmul(F, M, ones)


def build_code(q, m, rho=1, method="auto", length_cap=DEFAULT_LENGTH_CAP,
               kernel_cap=DEFAULT_KERNEL_CAP, enum_cap=DEFAULT_ENUM_CAP,
               distance_budget=DEFAULT_DISTANCE_BUDGET):
    """Construct R_q(rho, m).

    Parameters
    ----------
    method : {"auto", "kernel", "cyclic"}
        ``"kernel"`` solves the joint kernel of the check maps phi_s, s in D,
        each expanded into m GF(q)-equations over the basis prim^0..prim^(m-1).
        ``"cyclic"`` builds the punctured cyclic code from the generator
        polynomial whose roots are prim^s, s in D \\ {0}, then extends it.
        ``"auto"`` uses the kernel up to ``kernel_cap`` positions.
    enum_cap, distance_budget : int
        The minimum distance is brute-forced when ``q^k <= enum_cap`` and
        ``q^k * q^m <= distance_budget``; otherwise ``d`` falls back to the
        first-order formula with ``d_verified = False``.
    """
    if q ** m > length_cap:
        raise CapExceeded(f"code length {q ** m} exceeds cap {length_cap}")
    D = defining_set(q, m, rho)
    amb, F = code_fields(q, m)
    if method == "auto":
        method = "kernel" if q ** m <= kernel_cap else "cyclic"
    if method == "kernel":
        G = _kernel_generator(amb, F, q, m, D)
    elif method == "cyclic":
        G = _cyclic_generator(amb, F, q, m, D)
    else:
        raise ValueError(f"unknown construction method {method!r}")
    G, _ = linalg.rref(F, G)

    expected_k = q ** m - len(D)
    if G.shape[0] != expected_k:
        raise RuntimeError(f"dimension {G.shape[0]} != q^m - |D| = {expected_k}")
    if rho == 1 and expected_k != m + 1:
        raise RuntimeError("first-order code does not have dimension m + 1")

    code = GrmCode(q=q, m=m, rho=rho, field=amb, sub=F,
                   defining_set=tuple(D), gen_matrix=G)
    if q ** code.k <= enum_cap and q ** code.k * q ** m <= distance_budget:
        code.d = min_distance_bruteforce(code, cap=enum_cap)
        code.d_verified = True
    elif rho == 1:
        code.d = q ** (m - 1) * (q - 1)
    return code


def eval_code_oracle(q, m, length_cap=DEFAULT_LENGTH_CAP):
    """R_q(1, m) as evaluations u -> Tr(lambda u) + b.

    Row 0 is the all-ones word; row ``1 + j`` is ``Tr(prim^j u)`` over the
    positions.  Independent of the defining-set construction.
    """
    from .fields import trace

    if q ** m > length_cap:
        raise CapExceeded(f"code length {q ** m} exceeds cap {length_cap}")
    amb, F = code_fields(q, m)
    pos = position_elements(amb)
    rows = [np.ones(q ** m, dtype=np.int64)]
    for j in range(m):
        vals = amb.mul(int(amb.alpha_pow(j)), pos)
        tr = trace(amb, q, vals)
        idx = F.from_ambient[tr]
        if (idx < 0).any():
            raise RuntimeError("trace left the subfield")
        rows.append(idx)
    return np.array(rows, dtype=np.int64)


def systematic_generator(code, positions):
    """Generator matrix whose columns at ``positions`` form the identity."""
    positions = [int(x) for x in positions]
    if len(positions) != code.k:
        raise InfoSetError(f"{len(positions)} positions given, code dimension is {code.k}")
    R, piv = linalg.rref(code.sub, code.gen_matrix, col_order=positions)
    if piv != positions:
        raise InfoSetError("positions are not an information set")
    return R


def encode(code, msg, positions):
    """Systematic encoding: the result restricted to ``positions`` is ``msg``."""
    Gs = systematic_generator(code, positions)
    msg = np.asarray(msg, dtype=np.int64)
    return linalg.matmul(code.sub, np.atleast_2d(msg), Gs)[0] if msg.ndim == 1 \
        else linalg.matmul(code.sub, msg, Gs)


def puncture(v):
    """Drop position 0."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError("puncture expects a single vector")
    return v[1:].copy()


def extend(v, F):
    """Prepend b = -(sum of entries) so the coordinates sum to zero."""
    v = np.asarray(v, dtype=np.int64)
    if v.ndim != 1:
        raise ValueError("extend expects a single vector")
    b = F.neg_table[_gf_row_sums(F, v[None, :])[0]]
    return np.concatenate([[b], v])


def all_messages(q, k, start=0, stop=None):
    """Messages ``start..stop-1`` of GF(q)^k in base-q order, as rows."""
    stop = q ** k if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    return (idx[:, None] // (q ** np.arange(k - 1, -1, -1, dtype=np.int64))) % q


def all_codewords(code, chunk=None):
    total = code.q ** code.k
    if chunk is None:
        chunk = max(1, (1 << 22) // code.length)
    for start in range(0, total, chunk):
        msgs = all_messages(code.q, code.k, start, min(total, start + chunk))
        yield linalg.matmul(code.sub, msgs, code.gen_matrix)


def min_distance_bruteforce(code, cap=DEFAULT_ENUM_CAP):
    """Exact minimum nonzero weight by enumerating all q^k codewords."""
    total = code.q ** code.k
    if total > cap:
        raise CapExceeded(f"{total} codewords exceed enumeration cap {cap}")
    best = None
    for words in all_codewords(code):
        w = linalg.hamming_weight(words)
        w = w[w > 0]
        if w.size:
            cur = int(w.min())
            best = cur if best is None else min(best, cur)
    return best


# -- serialization -------------------------------------------------------------

def format_codeword(v):
    return " ".join(str(int(x)) for x in v)


def parse_codeword(text):
    return np.array([int(tok) for tok in text.split()], dtype=np.int64)


def matrix_to_json(M):
    return json.dumps(np.asarray(M).tolist())
