"""Finite fields GF(p^deg) with log/antilog tables.

Elements are integers in ``[0, p**deg)``.  The base-``p`` digits of an
element are the coefficients of its polynomial representative, lowest
degree first, so ``0`` is the additive zero and ``1`` the identity.

The modulus is the lexicographically first monic irreducible polynomial
of the requested degree (coefficient list ``[c0, c1, ..., 1]`` compared
from ``c0``), and the primitive element is the least primitive index.
Both choices are deterministic so that tables and serialized codes are
reproducible.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np
import sympy


# ---------------------------------------------------------------------------
# polynomials over GF(p), coefficient lists lowest degree first
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(_trim(a)) - 1 >= df:
        shift = len(a) - 1 - df
        c = a[-1] * inv_lead % p
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
    return a


def _polymulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _polymod(out, f, p)


def _polypowmod(a, e, f, p):
    result = [1]
    base = _polymod(a, f, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def _polysub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _polygcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(_polymod(a, b, p))
    return a


def is_irreducible(f, p):
    """Rabin's test for a polynomial ``f`` (lowest degree first) over GF(p)."""
    f = _trim(list(f))
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _polysub(_polypowmod(x, p ** d, f, p), x, p):
        return False
    for r in sympy.primefactors(d):
        h = _polysub(_polypowmod(x, p ** (d // r), f, p), x, p)
        if len(_polygcd(f, h, p)) != 1:
            return False
    return True


def first_irreducible(p, deg):
    """Lexicographically first monic irreducible of degree ``deg`` over GF(p)."""
    for low in itertools.product(range(p), repeat=deg):
        f = list(low) + [1]
        if deg > 1 and f[0] == 0:
            continue
        if is_irreducible(f, p):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {deg} over GF({p})")


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------

class FieldCtx:
    """A realized finite field GF(p^deg).

    Attributes
    ----------
    p, deg, size : int
    modulus : tuple of int
        Monic irreducible polynomial, ``modulus[k]`` is the coefficient of x^k.
    prim : int
        Index of the fixed primitive element.
    log_table, antilog_table : ndarray
        ``antilog_table[j]`` is ``prim**j`` for ``0 <= j < size - 1``;
        ``log_table[x]`` is its inverse (``-1`` at ``x = 0``).
    """

    def __init__(self, p, deg, modulus=None, prim=None):
        if deg < 1:
            raise ValueError("field degree must be positive")
        if not sympy.isprime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = int(p)
        self.deg = int(deg)
        self.size = self.p ** self.deg
        self.order = self.size - 1
        if modulus is None:
            modulus = first_irreducible(self.p, self.deg)
        modulus = [int(c) % self.p for c in modulus]
        if len(modulus) != self.deg + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of the field degree")
        if not is_irreducible(modulus, self.p):
            raise ValueError(f"modulus {modulus} is reducible over GF({self.p})")
        self.modulus = tuple(modulus)

        self._pows = self.p ** np.arange(self.deg, dtype=np.int64)
        idx = np.arange(self.size, dtype=np.int64)
        self.digits = (idx[:, None] // self._pows[None, :]) % self.p
        self.digits.setflags(write=False)

        if prim is None:
            prim = self._least_primitive()
        elif not self._is_primitive(int(prim)):
            raise ValueError(f"element {prim} is not primitive")
        self.prim = int(prim)
        self.antilog_table = self._powers_of(self.prim)
        self.log_table = np.full(self.size, -1, dtype=np.int64)
        self.log_table[self.antilog_table] = np.arange(self.order, dtype=np.int64)
        if np.count_nonzero(self.log_table[1:] < 0):
            raise RuntimeError("antilog table does not cover the multiplicative group")
        self.antilog_table.setflags(write=False)
        self.log_table.setflags(write=False)

    # -- construction helpers ------------------------------------------------

    def _to_poly(self, x):
        return _trim([int(c) for c in self.digits[x]])

    def _from_poly(self, a):
        return int(sum(int(c) * self.p ** k for k, c in enumerate(a)))

    def _poly_pow(self, x, e):
        return self._from_poly(_polypowmod(self._to_poly(x), e, list(self.modulus), self.p))

    def _is_primitive(self, x):
        if x == 0:
            return False
        if self.order == 1:
            return x == 1
        if self._poly_pow(x, self.order) != 1:
            return False
        return all(self._poly_pow(x, self.order // r) != 1
                   for r in sympy.primefactors(self.order))

    def _least_primitive(self):
        for x in range(1, self.size):
            if self._is_primitive(x):
                return x
        raise RuntimeError("no primitive element found")

    def _mul_matrix(self, x):
        # column k holds the digits of x * X^k
        f = list(self.modulus)
        cols = []
        for k in range(self.deg):
            mono = [0] * k + [1]
            prod = _polymulmod(self._to_poly(x), mono, f, self.p)
            prod = prod + [0] * (self.deg - len(prod))
            cols.append(prod)
        return np.array(cols, dtype=np.int64).T

    def _powers_of(self, g):
        # x^0 .. x^(order-1) by block doubling of the multiply-by-g map
        M = self._mul_matrix(g)
        block = np.zeros((1, self.deg), dtype=np.int64)
        block[0, 0] = 1
        step = M.copy()
        while block.shape[0] < self.order:
            nxt = (block @ step.T) % self.p
            block = np.vstack([block, nxt])
            step = (step @ step) % self.p
        block = block[: self.order]
        return (block @ self._pows).astype(np.int64)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        s = (self.digits[a] + self.digits[b]) % self.p
        return s @ self._pows

    def neg(self, a):
        if self.p == 2:
            return a
        return ((self.p - self.digits[a]) % self.p) @ self._pows

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log_table[a], self.log_table[b]
        out = self.antilog_table[(la + lb) % self.order]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.size)
        out = self.antilog_table[(-self.log_table[a]) % self.order]
        return out if out.ndim else int(out)

    def pow(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e < 0:
            a = np.asarray(self.inv(a))
            e = -e
        if e == 0:
            out = np.ones_like(a)
        else:
            out = self.antilog_table[(self.log_table[a] * e) % self.order]
            out = np.where(a == 0, 0, out)
        return out if out.ndim else int(out)

    def alpha_pow(self, j):
        """``prim ** j`` for any integer (or integer array) exponent."""
        return self.antilog_table[np.asarray(j) % self.order]

    def element(self, value):
        return FieldElement(self, int(value))

    # -- serialization -------------------------------------------------------

    def to_dict(self):
        return {"p": self.p, "deg": self.deg, "modulus": list(self.modulus),
                "prim": self.prim}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(d["p"], d["deg"], modulus=d["modulus"], prim=d["prim"])

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))

    def __eq__(self, other):
        return (isinstance(other, FieldCtx) and self.p == other.p
                and self.deg == other.deg and self.modulus == other.modulus
                and self.prim == other.prim)

    def __hash__(self):
        return hash((self.p, self.deg, self.modulus, self.prim))

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.deg}), modulus={list(self.modulus)}, prim={self.prim})"


def build_field(p, deg, seed=0):
    """Build GF(p^deg) deterministically.

    ``seed`` is accepted for interface stability; the irreducible modulus
    and primitive element are chosen by exhaustive deterministic search, so
    it does not influence the result.
    """
    return FieldCtx(p, deg)


@dataclass(frozen=True)
class FieldElement:
    """An element bound to its field, with operator overloads."""

    field: FieldCtx
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.size:
            raise ValueError(f"{self.value} is not an element of GF({self.field.size})")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("operands belong to different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add(self.value, self._coerce(other))))

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub(self.value, self._coerce(other))))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.value)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    def __truediv__(self, other):
        inv = self.field.inv(self._coerce(other))
        return FieldElement(self.field, self.field.mul(self.value, inv))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.field.size})({self.value})"


# ---------------------------------------------------------------------------
# subfields
# ---------------------------------------------------------------------------

def _subfield_degree(ambient, q):
    e = 0
    x = q
    while x > 1 and x % ambient.p == 0:
        x //= ambient.p
        e += 1
    if x != 1 or e == 0:
        raise ValueError(f"q={q} is not a power of the characteristic {ambient.p}")
    if ambient.deg % e:
        raise ValueError(f"GF({q}) is not a subfield of GF({ambient.size})")
    return e


def subfield_embed(ambient, q):
    """Locate GF(q) inside ``ambient``.

    Returns ``(beta, members)`` where ``beta = prim ** ((size-1)/(q-1))``
    and ``members`` lists the subfield as ``0, beta^0, ..., beta^(q-2)``.
    The position of an element in ``members`` is its canonical GF(q) index.
    """
    _subfield_degree(ambient, q)
    step = ambient.order // (q - 1)
    beta = int(ambient.alpha_pow(step))
    members = [0] + [int(ambient.alpha_pow(j * step)) for j in range(q - 1)]
    return beta, members


def trace(ambient, q, x):
    """Relative trace x + x^q + ... + x^(q^(m-1)) down to GF(q)."""
    e = _subfield_degree(ambient, q)
    m = ambient.deg // e
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros_like(x)
    y = x
    for _ in range(m):
        acc = ambient.add(acc, y)
        y = ambient.pow(y, q)
    acc = np.asarray(acc)
    return acc if acc.ndim else int(acc)


class SubField:
    """GF(q) realized inside GF(q^m), with small dense operation tables.

    Subfield elements are the canonical indices ``0..q-1`` of
    :func:`subfield_embed`; index ``i >= 1`` stands for ``beta^(i-1)``, so
    0 and 1 keep their usual meaning.  ``coords`` expands every ambient
    element over the basis ``prim^0, ..., prim^(m-1)``.
    """

    def __init__(self, ambient, q):
        e = _subfield_degree(ambient, q)
        self.ambient = ambient
        self.q = q
        self.m = ambient.deg // e
        self.beta, members = subfield_embed(ambient, q)
        self.to_ambient = np.array(members, dtype=np.int64)
        self.from_ambient = np.full(ambient.size, -1, dtype=np.int64)
        self.from_ambient[self.to_ambient] = np.arange(q)

        amb_add = ambient.add(self.to_ambient[:, None], self.to_ambient[None, :])
        amb_mul = ambient.mul(self.to_ambient[:, None], self.to_ambient[None, :])
        self.add_table = self.from_ambient[amb_add]
        self.mul_table = self.from_ambient[amb_mul]
        if (self.add_table < 0).any() or (self.mul_table < 0).any():
            raise RuntimeError("subfield is not closed under the field operations")
        self.neg_table = np.argmin(self.add_table, axis=1)
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[1:] = np.argmax(self.mul_table[1:] == 1, axis=1)
        self._linear_rep()
        for t in (self.add_table, self.mul_table, self.neg_table, self.inv_table,
                  self.vec, self.mat, self.from_vec):
            t.setflags(write=False)
        self._coords = None

    def _linear_rep(self):
        # GF(q) as GF(p)^e over the basis beta^0..beta^(e-1); multiplication
        # by a becomes the e x e matrix mat[a] acting on vec[.]
        p, q = self.ambient.p, self.q
        e = round(np.log(q) / np.log(p))
        self.e = e
        basis = [1]
        for _ in range(1, e):
            basis.append(int(self.mul_table[basis[-1], 2 if q > 2 else 1]))
        vec = np.full((q, e), -1, dtype=np.int64)
        for digits in itertools.product(range(p), repeat=e):
            x = 0
            for c, b in zip(digits, basis):
                # c copies of b
                for _ in range(c):
                    x = int(self.add_table[x, b])
            vec[x] = digits
        if (vec < 0).any():
            raise RuntimeError("beta powers do not span the subfield over GF(p)")
        self.vec = vec
        self.from_vec = np.zeros(p ** e, dtype=np.int64)
        self.from_vec[vec @ (p ** np.arange(e))] = np.arange(q)
        mat = np.zeros((q, e, e), dtype=np.int64)
        for a in range(q):
            for l, b in enumerate(basis):
                mat[a, :, l] = vec[self.mul_table[a, b]]
        self.mat = mat
        self._vpows = p ** np.arange(e)

    @property
    def coords(self):
        """``coords[x, l]``: GF(q) coefficient of prim^l in ambient element x."""
        if self._coords is None:
            amb = self.ambient
            elems = np.zeros(1, dtype=np.int64)
            digits = np.zeros((1, 0), dtype=np.int64)
            for l in range(self.m):
                term = amb.mul(self.to_ambient, int(amb.alpha_pow(l)))
                elems = amb.add(elems[:, None], np.asarray(term)[None, :]).reshape(-1)
                digits = np.hstack([
                    np.repeat(digits, self.q, axis=0),
                    np.tile(np.arange(self.q), len(digits))[:, None],
                ])
            coords = np.full((amb.size, self.m), -1, dtype=np.int64)
            coords[elems] = digits
            if (coords < 0).any():
                raise RuntimeError("prim^0..prim^(m-1) is not a basis over the subfield")
            coords.setflags(write=False)
            self._coords = coords
        return self._coords

    # vectorized helpers over subfield indices
    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return self.inv_table[a]

    def __repr__(self):
        return f"SubField(GF({self.q}) in GF({self.ambient.size}))"


def code_fields(q, m):
    """Ambient field GF(q^m) and its subfield GF(q) for code parameters."""
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise ValueError(f"q={q} is not a prime power")
    (p, e), = fac.items()
    ambient = build_field(p, e * m)
    return ambient, SubField(ambient, q)
