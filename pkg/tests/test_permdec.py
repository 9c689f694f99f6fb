import itertools
import math

import numpy as np
import pytest

from grmpd import linalg
from grmpd.exceptions import CapExceeded, DecodeFailure
from grmpd.infoset import Decomposition, build_infoset, find_decompositions
from grmpd.permdec import (PermDecoder, PermSpec, PositionSpace, apply_perm,
                           find_mu, pd_enumeration_order, s_pd_bound, standard_form,
                           syndrome_test, syndrome_weight, verify_pd_like)

from conftest import cached_code


def naive_pd_check(n, gamma, s):
    """Set-based check of every s-subset; returns the first failing subset."""
    gamma = set(gamma)
    for B in itertools.combinations(range(n), s):
        if not any(all((b + j) % n not in gamma for b in B) for j in range(n)):
            return B
    return None


# -- permutations ----------------------------------------------------------------

@pytest.mark.parametrize("q,m", [(3, 2), (4, 2), (2, 4), (3, 3)])
def test_shift_group_law(q, m):
    code = cached_code(q, m)
    F, n = code.field, code.n
    space = PositionSpace(F)
    v = np.random.default_rng(0).integers(0, q, code.length)
    assert np.array_equal(apply_perm(PermSpec.identity(), v, F), v)
    assert np.array_equal(apply_perm(PermSpec.shift(n), v, F), v)
    for a in range(n):
        for b in range(n):
            lhs = space.dest([PermSpec.shift(b), PermSpec.shift(a)])
            assert np.array_equal(lhs, space.dest(PermSpec.shift((a + b) % n)))


@pytest.mark.parametrize("q,m", [(3, 2), (4, 2), (2, 4), (5, 2)])
def test_inverse_roundtrip(q, m):
    code = cached_code(q, m)
    F, n = code.field, code.n
    space = PositionSpace(F)
    v = np.random.default_rng(1).integers(0, q, code.length)
    for k in range(n):
        for spec in (PermSpec.shift(k), PermSpec.translate(k)):
            w = apply_perm(spec, v, F)
            assert np.array_equal(apply_perm(space.inverse(spec), w, F), v)


def test_perm_actions_on_elements():
    code = cached_code(3, 3)
    F = code.field
    space = PositionSpace(F)
    d = space.dest(PermSpec.shift(5))
    assert d[0] == 0
    assert all(d[1 + i] == 1 + (i + 5) % 26 for i in range(26))
    for k in range(26):
        d = space.dest(PermSpec.translate(k))
        assert space.elements[d[0]] == F.alpha_pow(k)
        assert np.array_equal(space.elements[d],
                              F.add(space.elements, int(F.alpha_pow(k))))
    with pytest.raises(ValueError):
        PermSpec("rotate", 1)


# -- standard form and syndromes -------------------------------------------------

@pytest.mark.parametrize("q,m", [(3, 3), (4, 2), (5, 2), (3, 4)])
def test_standard_form_structure(q, m):
    code = cached_code(q, m)
    info = build_infoset(find_decompositions(q, m)[0])
    G, H = standard_form(code, info)
    pos = list(info.positions)
    rest = [c for c in range(code.length) if c not in pos]
    assert np.array_equal(G[:, pos], np.eye(code.k, dtype=np.int64))
    assert np.array_equal(H[:, rest], np.eye(len(rest), dtype=np.int64))
    assert H.shape[0] == q ** m - (m + 1)
    assert not linalg.matmul(code.sub, H, G.T).any()
    assert linalg.row_space_equal(code.sub, G, code.gen_matrix)


def test_syndrome_examples():
    code = cached_code(3, 3)
    info = build_infoset(Decomposition(3, 3, 13, 2))
    _, H = standard_form(code, info)
    S = code.sub
    c = code.random_codeword(np.random.default_rng(3))
    assert syndrome_weight(H, c, S) == 0 and syndrome_test(H, c, 8, S)
    off = next(p for p in range(code.length) if p not in info.positions)
    r = c.copy()
    r[off] = S.add_table[r[off], 1]
    assert syndrome_weight(H, r, S) == 1 and syndrome_test(H, r, 8, S)
    for p in info.positions:
        r = c.copy()
        r[p] = S.add_table[r[p], 2]
        assert syndrome_weight(H, r, S) >= 17
        assert not syndrome_test(H, r, 8, S)


@pytest.mark.parametrize("q,m", [(3, 3), (4, 2), (5, 2)])
def test_syndrome_weight_equals_reencoding_distance(q, m):
    code = cached_code(q, m)
    info = build_infoset(find_decompositions(q, m)[0])
    G, H = standard_form(code, info)
    rng = np.random.default_rng(5)
    for _ in range(200):
        r = rng.integers(0, q, code.length)
        re = linalg.matmul(code.sub, r[None, list(info.positions)], G)[0]
        assert syndrome_weight(H, r, code.sub) == int(np.count_nonzero(re != r))


# -- enumeration order and bounds ------------------------------------------------

def test_pd_order_example():
    order = pd_enumeration_order(Decomposition(4, 2, 5, 3))
    assert order[:3] == [0, 10, 5]


@pytest.mark.parametrize("q,m", [(3, 3), (4, 2), (5, 2), (3, 6), (4, 4)])
def test_pd_order_structure(q, m):
    for dec in find_decompositions(q, m):
        order = pd_enumeration_order(dec)
        assert sorted(order) == list(range(dec.n))
        prefix = order[:dec.r2]
        assert all(k % dec.r1 == 0 for k in prefix)
        assert order[dec.r2:] == sorted(order[dec.r2:])


def test_s_pd_bound_examples():
    assert s_pd_bound(Decomposition(3, 3, 13, 2)) == (4, 9)
    assert s_pd_bound(Decomposition(3, 5, 121, 2)) == (24, 49)
    assert s_pd_bound(Decomposition(3, 6, 7, 104)) == (1, 207)
    with pytest.raises(ValueError):
        s_pd_bound(Decomposition(4, 2, 5, 3), m=5)


def test_s_pd_bound_matches_definition():
    for q in (3, 4, 5, 7):
        for m in range(2, 7):
            for dec in find_decompositions(q, m):
                if dec.r1 <= m:
                    continue
                lam = max(l for l in range(1, dec.r1 + 1) if -(-dec.r1 // l) > m)
                assert s_pd_bound(dec) == (lam, (lam + 1) * dec.r2 - 1)


def test_find_mu_examples():
    assert find_mu(13, [0, 5]) == 7
    for r in range(1, 15):
        assert find_mu(r, [r - 1]) == 0
    with pytest.raises(ValueError):
        find_mu(3, [])


def test_find_mu_exhaustive_small():
    for r in range(1, 10):
        for mask in range(1, 1 << r):
            xs = [i for i in range(r) if mask >> i & 1]
            mu = find_mu(r, xs)
            shifted = [(x + mu) % r for x in xs]
            assert min(shifted) >= -(-r // len(xs)) - 1 and r - 1 in shifted


# -- PD-like verification --------------------------------------------------------

def test_verify_pd_like_small_example():
    dec = Decomposition(4, 2, 5, 3)
    gamma = build_infoset(dec).exponents
    res = verify_pd_like(dec, gamma, 8)
    assert res.passed and res.checked == math.comb(15, 8)


def test_verify_pd_like_full_set_fails():
    dec = Decomposition(4, 2, 5, 3)
    res = verify_pd_like(dec, build_infoset(dec).exponents, 15)
    assert not res.passed and res.counterexample == tuple(range(15))


def test_one_past_the_bound_probe():
    # the bound is only a lower bound; this records what s + 1 does at (4, 2)
    dec = Decomposition(4, 2, 5, 3)
    gamma = build_infoset(dec).exponents
    res = verify_pd_like(dec, gamma, 9)
    assert res.passed == (naive_pd_check(15, gamma, 9) is None)
    print(f"(4,2) s=9: {'PASS' if res.passed else 'FAIL'} counterexample={res.counterexample}")


@pytest.mark.parametrize("q,m", [(4, 2), (2, 4), (3, 3)])
def test_verify_pd_like_against_naive(q, m):
    dec = find_decompositions(q, m)[0]
    gamma = build_infoset(dec).exponents
    for s in range(1, min(dec.n, 9) + 1):
        if math.comb(dec.n, s) > 3 * 10 ** 5:
            break
        res = verify_pd_like(dec, gamma, s)
        bad = naive_pd_check(dec.n, gamma, s)
        assert res.passed == (bad is None)
        if bad is not None:
            assert res.counterexample == bad


def test_verify_pd_like_sampled_and_parallel():
    dec = Decomposition(3, 3, 13, 2)
    gamma = build_infoset(dec).exponents
    assert verify_pd_like(dec, gamma, 9, mode="sampled", trials=20000, seed=4).passed
    bad = verify_pd_like(dec, gamma, 25, mode="sampled", trials=1000, seed=4)
    assert not bad.passed and len(bad.counterexample) == 25
    dec4 = Decomposition(4, 2, 5, 3)
    g4 = build_infoset(dec4).exponents
    assert verify_pd_like(dec4, g4, 8, jobs=2).checked == verify_pd_like(dec4, g4, 8).checked


def test_verify_pd_like_sampled_large():
    dec = Decomposition(3, 6, 7, 104)
    gamma = build_infoset(dec).exponents
    assert verify_pd_like(dec, gamma, 207, mode="sampled", trials=10 ** 4, seed=0).passed


def test_verify_pd_like_errors():
    dec = Decomposition(3, 3, 13, 2)
    gamma = build_infoset(dec).exponents
    with pytest.raises(CapExceeded):
        verify_pd_like(dec, gamma, 13, cap=10 ** 6)
    with pytest.raises(ValueError):
        verify_pd_like(dec, gamma, 0)
    with pytest.raises(ValueError):
        verify_pd_like(dec, gamma, 3, mode="guess")


# -- the decoder ---------------------------------------------------------------

def add_error(S, c, positions, values):
    r = c.copy()
    r[positions] = S.add_table[r[positions], values]
    return r


def test_decoder_attributes():
    dec = Decomposition(3, 3, 13, 2)
    pd = PermDecoder(cached_code(3, 3), dec)
    assert (pd.lambda0, pd.s_bound, pd.t, pd.s_eff) == (4, 9, 8, 8)
    with pytest.raises(ValueError):
        PermDecoder(cached_code(3, 3), dec).decode(np.zeros(5, dtype=np.int64))


def test_decode_codeword_uses_identity():
    code = cached_code(3, 3)
    pd = PermDecoder(code, Decomposition(3, 3, 13, 2))
    c = code.random_codeword(np.random.default_rng(2))
    res = pd.decode(c)
    assert np.array_equal(res.codeword, c)
    assert (res.sigma_index, res.shift, res.perms_tried) == (0, 0, 1)


@pytest.mark.parametrize("q,m,r1,r2", [(3, 3, 13, 2), (4, 2, 5, 3), (5, 2, 3, 8), (2, 4, 5, 3)])
def test_decode_random_within_guarantee(q, m, r1, r2):
    code = cached_code(q, m)
    pd = PermDecoder(code, Decomposition(q, m, r1, r2))
    S = code.sub
    rng = np.random.default_rng(q * 100 + m)
    for _ in range(300):
        c = code.random_codeword(rng)
        w = int(rng.integers(0, pd.s_eff + 1))
        pos = rng.choice(code.length, w, replace=False)
        r = add_error(S, c, pos, rng.integers(1, q, w))
        res = pd.decode(r)
        assert np.array_equal(res.codeword, c)
        assert res.perms_tried >= 1


def test_decode_sound_when_it_succeeds():
    code = cached_code(4, 2)
    pd = PermDecoder(code, Decomposition(4, 2, 5, 3))
    rng = np.random.default_rng(9)
    failures = 0
    for _ in range(300):
        r = rng.integers(0, 4, code.length)
        try:
            res = pd.decode(r)
        except DecodeFailure as exc:
            failures += 1
            assert exc.perms_tried == 15 * 16
            continue
        assert code.contains(res.codeword)
        assert np.count_nonzero(res.codeword != r) <= code.t
    assert failures > 0


def test_decode_all_supports_r4():
    code = cached_code(4, 2)
    pd = PermDecoder(code, Decomposition(4, 2, 5, 3))
    S = code.sub
    zero = np.zeros(code.length, dtype=np.int64)
    for w in range(6):
        for k, pos in enumerate(itertools.combinations(range(16), w)):
            vals = 1 + (np.arange(w) + k) % 3
            res = pd.decode(add_error(S, zero, list(pos), vals))
            assert not res.codeword.any()


@pytest.mark.slow
def test_decode_exhaustive_r4():
    code = cached_code(4, 2)
    pd = PermDecoder(code, Decomposition(4, 2, 5, 3))
    zero = np.zeros(code.length, dtype=np.int64)
    total = 0
    for w in range(6):
        for pos in itertools.combinations(range(16), w):
            for vals in itertools.product(range(1, 4), repeat=w):
                r = zero.copy()
                r[list(pos)] = vals
                assert not pd.decode(r).codeword.any()
                total += 1
    assert total == sum(math.comb(16, w) * 3 ** w for w in range(6))
