"""Decompositions n = r1 * r2 and the CRT-structured information sets.

The isomorphism Z_n -> Z_r1 x Z_r2 is the canonical CRT map
``i -> (i mod r1, i mod r2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
import sympy

from . import linalg
from .exceptions import InfoSetError


def mult_order(q, r):
    """Least a > 0 with q^a = 1 (mod r)."""
    if math.gcd(q, r) != 1:
        raise ValueError(f"gcd({q}, {r}) != 1")
    if r == 1:
        return 1
    return int(sympy.n_order(q, r))


def _order_dividing(q, r, m):
    # r | q^m - 1, so the order is the least divisor of m that works
    for d in sympy.divisors(m):
        if pow(q, d, r) == 1:
            return d
    raise ValueError(f"{r} does not divide {q}^{m} - 1")


def divisibility_check(m, delta, q):
    """Whether m | delta (equivalently q^m - 1 | q^delta - 1)."""
    return delta % m == 0


@lru_cache(maxsize=None)
def factor_q_pow_minus_one(q, m):
    """Prime factorization of q^m - 1 through its cyclotomic factors."""
    out = {}
    for d in sympy.divisors(m):
        val = int(sympy.cyclotomic_poly(d, q))
        for prime, e in sympy.factorint(val).items():
            out[int(prime)] = out.get(int(prime), 0) + int(e)
    return out


@dataclass(frozen=True)
class Decomposition:
    """n = q^m - 1 = r1 * r2 with gcd(r1, r2) = 1 and r1, r2 > 1."""

    q: int
    m: int
    r1: int
    r2: int
    a: int = field(init=False)

    def __post_init__(self):
        n = self.q ** self.m - 1
        if self.r1 * self.r2 != n:
            raise ValueError(f"{self.r1} * {self.r2} != {n}")
        if math.gcd(self.r1, self.r2) != 1:
            raise ValueError(f"gcd({self.r1}, {self.r2}) != 1")
        if self.r1 <= 1 or self.r2 <= 1:
            raise ValueError("both factors must exceed 1")
        object.__setattr__(self, "a", _order_dividing(self.q, self.r1, self.m))

    @property
    def n(self):
        return self.r1 * self.r2

    @property
    def _idempotents(self):
        # e1 = 1 mod r1, 0 mod r2 ; e2 = 0 mod r1, 1 mod r2
        e1 = self.r2 * pow(self.r2, -1, self.r1) % self.n
        e2 = self.r1 * pow(self.r1, -1, self.r2) % self.n
        return e1, e2

    def to_pair(self, i):
        return i % self.r1, i % self.r2

    def from_pair(self, x, y):
        e1, e2 = self._idempotents
        return (x * e1 + y * e2) % self.n

    def to_dict(self):
        return {"r1": self.r1, "r2": self.r2, "a": self.a,
                "b": _order_dividing(self.q, self.r2, self.m)}


def find_decompositions(q, m):
    """All admissible (r1, r2), oriented so that ord_r1(q) = m, sorted by r1.

    When both factors have order m, both orientations are returned.
    """
    n = q ** m - 1
    if n < 6:
        return []
    parts = [p ** e for p, e in sorted(factor_q_pow_minus_one(q, m).items())]
    out = []
    for size in range(1, len(parts)):
        for subset in combinations(parts, size):
            r1 = math.prod(subset)
            r2 = n // r1
            if _order_dividing(q, r1, m) == m:
                out.append(Decomposition(q, m, r1, r2))
    out.sort(key=lambda d: d.r1)
    return out


@dataclass(frozen=True)
class InfoSet:
    """Information set {0} U {prim^i : phi(i) in gamma}.

    ``exponents`` are the i with phi(i) in gamma, in the order of ``gamma``;
    ``positions`` are global positions (0 first, then 1 + i).
    """

    dec: Decomposition
    gamma: tuple
    exponents: tuple

    @property
    def positions(self):
        return (0,) + tuple(1 + i for i in self.exponents)

    def __len__(self):
        return len(self.exponents) + 1


def build_infoset(dec, m=None, full_order=True):
    """Information set from a decomposition.

    With ``full_order`` set (the default) the decomposition must carry
    ``ord_r1(q) = m`` and gamma is ``{(i, 0) : i < m}``.  Otherwise gamma is
    ``{(i1, i2) : i1 < a, i2 < m / a}`` for ``a = ord_r1(q)``.
    """
    m = dec.m if m is None else m
    a = dec.a
    if full_order and a != m:
        raise ValueError(f"ord_{dec.r1}({dec.q}) = {a} != m = {m}; reorient the decomposition")
    if m % a:
        raise ValueError(f"ord_{dec.r1}({dec.q}) = {a} does not divide m = {m}")
    gamma = tuple((i1, i2) for i2 in range(m // a) for i1 in range(a))
    exps = tuple(dec.from_pair(i1, i2) for i1, i2 in gamma)
    return InfoSet(dec=dec, gamma=gamma, exponents=exps)


def verify_infoset(code, positions):
    """True iff the generator matrix restricted to ``positions`` has rank k.

    Raises :class:`InfoSetError` when the number of positions differs from k.
    """
    if isinstance(positions, InfoSet):
        positions = positions.positions
    positions = list(positions)
    if len(positions) != code.k:
        raise InfoSetError(f"{len(positions)} positions for a code of dimension {code.k}")
    sub = code.gen_matrix[:, positions]
    return linalg.rank(code.sub, sub) == code.k


def crt_table(dec):
    """Arrays ``(pi1, pi2)`` with ``pi_j[i]`` the CRT components of i."""
    i = np.arange(dec.n)
    return i % dec.r1, i % dec.r2
