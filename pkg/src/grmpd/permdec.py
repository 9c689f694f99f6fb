"""Permutation decoding of first-order GRM codes.

Two families of automorphisms act on positions:

* ``shift(j)`` (the cyclic shift T^j) fixes position 0 and sends prim^i to
  prim^(i+j);
* ``translate(k)`` sends every field element u to u + prim^k.

The decoder runs over the translations (identity first) in the outer loop
and over the cyclic shifts in the inner loop, testing each permuted word
until its information symbols are error free.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import linalg
from .exceptions import CapExceeded, DecodeFailure
from .grm_code import position_elements, systematic_generator
from .infoset import build_infoset

DEFAULT_SUBSET_CAP = 10 ** 7


# ---------------------------------------------------------------------------
# permutations of positions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PermSpec:
    kind: str
    arg: int = 0

    def __post_init__(self):
        if self.kind not in ("identity", "shift", "translate"):
            raise ValueError(f"unknown permutation kind {self.kind!r}")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def shift(cls, j):
        return cls("shift", int(j))

    @classmethod
    def translate(cls, k):
        return cls("translate", int(k))


class PositionSpace:
    """Position <-> field element maps for a code length q^m."""

    def __init__(self, field):
        self.field = field
        self.n = field.order
        self.elements = position_elements(field)
        self.pos_of = np.empty(field.size, dtype=np.int64)
        self.pos_of[self.elements] = np.arange(field.size)

    def dest(self, spec):
        """``dest[u]`` is the position that position ``u`` is moved to."""
        if isinstance(spec, (list, tuple)):
            d = np.arange(self.field.size)
            for sp in spec:
                d = self.dest(sp)[d]
            return d
        n = self.n
        if spec.kind == "identity":
            return np.arange(n + 1)
        if spec.kind == "shift":
            return np.concatenate([[0], 1 + (np.arange(n) + spec.arg) % n])
        shift_by = int(self.field.alpha_pow(spec.arg))
        return self.pos_of[self.field.add(self.elements, shift_by)]

    def inverse(self, spec):
        if spec.kind == "shift":
            return PermSpec.shift((-spec.arg) % self.n)
        if spec.kind == "translate":
            neg = int(self.field.neg(int(self.field.alpha_pow(spec.arg))))
            return PermSpec.translate(int(self.field.log_table[neg]))
        return spec


def apply_dest(dest, v):
    v = np.asarray(v)
    out = np.empty_like(v)
    out[..., dest] = v
    return out


def apply_perm(spec, v, field):
    """Move the coefficient at each position u to ``tau(u)``.

    ``spec`` is a :class:`PermSpec` or a list of them applied left to right.
    """
    return apply_dest(PositionSpace(field).dest(spec), v)


# ---------------------------------------------------------------------------
# standard form and syndromes
# ---------------------------------------------------------------------------

def standard_form(code, infoset):
    """``(G_std, H_std)``: G_std is the identity on the information columns,
    H_std the identity on the remaining ones."""
    positions = list(getattr(infoset, "positions", infoset))
    G = systematic_generator(code, positions)
    F = code.sub
    N = code.length
    rest = [c for c in range(N) if c not in set(positions)]
    H = np.zeros((len(rest), N), dtype=np.int64)
    H[:, rest] = np.eye(len(rest), dtype=np.int64)
    H[:, positions] = F.neg_table[G[:, rest].T]
    return G, H


def syndrome_weight(H_std, r, F):
    return int(linalg.hamming_weight(linalg.matmul(F, H_std, np.asarray(r))))


def syndrome_test(H_std, r, t, F):
    """Information symbols of ``r`` are trusted iff wt(H_std r^T) <= t."""
    return syndrome_weight(H_std, r, F) <= t


def pd_enumeration_order(dec):
    """Shift exponents: the <T2> subgroup first, then the rest ascending.

    <T2> is generated by e with e = 0 (mod r1), e = 1 (mod r2).
    """
    n = dec.n
    e = dec.from_pair(0, 1)
    prefix = [j * e % n for j in range(dec.r2)]
    seen = set(prefix)
    return prefix + [j for j in range(n) if j not in seen]


# ---------------------------------------------------------------------------
# bounds and the shift helper
# ---------------------------------------------------------------------------

def s_pd_bound(dec, m=None):
    """``(lambda0, s)`` with lambda0 = max{lambda : m < ceil(r1/lambda)} and
    s = (lambda0 + 1) r2 - 1.

    Raises ``ValueError`` when r1 <= m (no lambda qualifies).
    """
    m = dec.m if m is None else m
    r1, r2 = dec.r1, dec.r2
    if r1 <= m:
        raise ValueError(f"bound unavailable: r1 = {r1} <= m = {m}")
    # ceil(r1/lam) > m  <=>  lam * m < r1
    lam0 = (r1 - 1) // m
    return lam0, (lam0 + 1) * r2 - 1


def find_mu(r, xs):
    """Least mu in [0, r) with every (x + mu) mod r >= ceil(r/h) - 1 and some
    (x + mu) mod r == r - 1, where h = len(xs)."""
    xs = list(xs)
    h = len(xs)
    if h == 0 or h > r:
        raise ValueError("need 1 <= len(xs) <= r")
    low = -(-r // h) - 1
    for mu in range(r):
        shifted = [(x + mu) % r for x in xs]
        if min(shifted) >= low and r - 1 in shifted:
            return mu
    raise RuntimeError(f"no shift found for r={r}, xs={xs}")


# ---------------------------------------------------------------------------
# PD-like verification
# ---------------------------------------------------------------------------

def _forbidden_masks(n, gamma):
    # bit j of masks[b] set  <=>  b + j lands in gamma
    masks = []
    for b in range(n):
        m = 0
        for g in gamma:
            m |= 1 << ((g - b) % n)
        masks.append(m)
    return masks


def _search_from(first, n, s, masks, full):
    """DFS over s-subsets with smallest element ``first``; a subset fails
    when the union of its forbidden shifts is every shift."""
    chosen = [first]
    count = 0

    def rec(start, acc, depth):
        nonlocal count
        if depth == s:
            count += 1
            return acc == full
        if depth == s - 1:
            for b in range(start, n):
                count += 1
                if acc | masks[b] == full:
                    chosen.append(b)
                    return True
            return False
        for b in range(start, n - (s - depth) + 1):
            chosen.append(b)
            if rec(b + 1, acc | masks[b], depth + 1):
                return True
            chosen.pop()
        return False

    failed = rec(first + 1, masks[first], 1)
    return (tuple(chosen) if failed else None), count


def _search_task(args):
    return _search_from(*args)


@dataclass
class PDCheck:
    """Outcome of a PD-like verification."""

    passed: bool
    checked: int
    counterexample: tuple | None = None

    def __bool__(self):
        return self.passed


def verify_pd_like(dec, gamma_exponents, s, mode="exhaustive", trials=10000,
                   seed=0, cap=DEFAULT_SUBSET_CAP, jobs=1):
    """Check that the cyclic shifts move any s exponents off ``gamma_exponents``.

    ``gamma_exponents`` are the exponents i (position prim^i) of the
    information set with position 0 removed.  In exhaustive mode every
    s-subset of Z_n is tested; in sampled mode ``trials`` uniform subsets.
    """
    n = dec.n
    gamma = sorted(set(int(g) for g in gamma_exponents))
    if not 0 < s <= n:
        raise ValueError(f"s={s} outside (0, {n}]")
    if mode == "exhaustive":
        total = math.comb(n, s)
        if total > cap:
            raise CapExceeded(f"C({n},{s}) = {total} subsets exceed cap {cap}")
        masks = _forbidden_masks(n, gamma)
        full = (1 << n) - 1
        tasks = [(f, n, s, masks, full) for f in range(n - s + 1)]
        checked = 0
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_search_task, tasks))
        else:
            results = []
            for task in tasks:
                res = _search_from(*task)
                results.append(res)
                if res[0] is not None:
                    break
        for bad, cnt in results:
            checked += cnt
            if bad is not None:
                return PDCheck(False, checked, bad)
        return PDCheck(True, checked)
    if mode == "sampled":
        if trials <= 0:
            raise ValueError("trials must be positive")
        rng = np.random.default_rng(seed)
        g = np.array(gamma, dtype=np.int64)
        batch = max(1, min(trials, (1 << 22) // max(1, n)))
        done = 0
        while done < trials:
            b = min(batch, trials - done)
            B = np.argsort(rng.random((b, n)), axis=1)[:, :s]
            covered = np.zeros((b, n), dtype=bool)
            rows = np.repeat(np.arange(b), s * len(g))
            cols = ((g[None, None, :] - B[:, :, None]) % n).reshape(-1)
            covered[rows, cols] = True
            bad = np.flatnonzero(covered.all(axis=1))
            if bad.size:
                return PDCheck(False, done + int(bad[0]) + 1,
                               tuple(sorted(int(x) for x in B[bad[0]])))
            done += b
        return PDCheck(True, trials)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# the decoder
# ---------------------------------------------------------------------------

@dataclass
class DecodeResult:
    codeword: np.ndarray
    sigma_index: int        # 0 is the identity, 1 + k is translate(k)
    shift: int              # exponent j of T^j
    perms_tried: int
    in_t2_prefix: bool


class PermDecoder:
    """Permutation decoder for R_q(1, m) and a decomposition of q^m - 1."""

    def __init__(self, code, dec, infoset=None, block=256):
        if code.rho != 1:
            raise ValueError("permutation decoding is implemented for first-order codes only")
        self.code = code
        self.dec = dec
        self.infoset = build_infoset(dec) if infoset is None else infoset
        self.positions = np.array(self.infoset.positions, dtype=np.int64)
        self.G_std = systematic_generator(code, self.positions)
        self._H_std = None
        self.pd_order = np.array(pd_enumeration_order(dec), dtype=np.int64)
        try:
            self.lambda0, self.s_bound = s_pd_bound(dec, code.m)
        except ValueError:
            self.lambda0, self.s_bound = None, None
        self.t = code.t
        self.s_eff = self.t if self.s_bound is None else min(self.s_bound, self.t)
        self.space = PositionSpace(code.field)
        self.block = block

    @property
    def H_std(self):
        if self._H_std is None:
            _, self._H_std = standard_form(self.code, self.positions)
        return self._H_std

    @property
    def n(self):
        return self.code.n

    def _sigma_dest(self, idx):
        if idx == 0:
            return np.arange(self.code.length)
        return self.space.dest(PermSpec.translate(idx - 1))

    def _try_shifts(self, w):
        """First entry of pd_order whose shifted word passes the syndrome test.

        wt(H_std w^T) equals the number of positions where w differs from
        the re-encoding of its information symbols, which is what is
        computed here in blocks of shifts.
        """
        F, n = self.code.sub, self.n
        order = self.pd_order
        cyc = w[1:]
        idx = np.arange(n)
        for start in range(0, n, self.block):
            js = order[start:start + self.block]
            # (T^j w)[1 + i] = w[1 + (i - j) mod n]
            W = np.empty((len(js), n + 1), dtype=np.int64)
            W[:, 0] = w[0]
            W[:, 1:] = cyc[(idx[None, :] - js[:, None]) % n]
            info = W[:, self.positions]
            C = linalg.matmul(F, info, self.G_std)
            dist = np.count_nonzero(C != W, axis=1)
            ok = np.flatnonzero(dist <= self.t)
            if ok.size:
                i = int(ok[0])
                return start + i, int(js[i]), C[i]
        return None

    def decode(self, r):
        r = np.asarray(r, dtype=np.int64)
        if r.shape != (self.code.length,):
            raise ValueError(f"received word must have length {self.code.length}")
        n = self.n
        for sig in range(n + 1):
            d_sig = self._sigma_dest(sig)
            w = apply_dest(d_sig, r)
            hit = self._try_shifts(w)
            if hit is None:
                continue
            order_idx, j, c_prime = hit
            d_shift = self.space.dest(PermSpec.shift(j))
            total = d_shift[d_sig]
            # undo exactly the composite applied: out[total] = r  =>  r = out[total]
            decoded = c_prime[total]
            return DecodeResult(codeword=decoded, sigma_index=sig, shift=j,
                                perms_tried=sig * n + order_idx + 1,
                                in_t2_prefix=order_idx < self.dec.r2)
        raise DecodeFailure(f"no composite passed after {n * (n + 1)} permutations",
                            perms_tried=n * (n + 1))
