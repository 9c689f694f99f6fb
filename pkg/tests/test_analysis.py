import csv
import io
import itertools
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from grmpd.analysis import (PROBABILITY_ROWS, bounds_row, emit_tables,
                            inclusion_exclusion_count, prior_bounds, prob_bruteforce,
                            prob_exact, prob_montecarlo, probability_row, prop51_check)


def coprime_splits(limit):
    for r1 in range(2, limit + 1):
        for r2 in range(2, limit // r1 + 1):
            if math.gcd(r1, r2) == 1:
                yield r1, r2


def naive_prob(r1, r2, s):
    n = r1 * r2
    hit = sum(1 for B in itertools.combinations(range(n), s)
              if len({b % r2 for b in B}) < r2)
    return Fraction(hit, math.comb(n, s))


def test_bounds_row_examples():
    r = bounds_row(3, 4)
    assert (r.r1, r.r2, r.rho1_floor, r.s) == (5, 16, 16, 31)
    r = bounds_row(5, 3)
    assert (r.r1, r.r2, r.rho1_floor, r.s) == (31, 4, 31, 43)
    r = bounds_row(4, 8)
    assert (r.r1, r.r2, r.rho1_floor, r.s) == (257, 255, 7281, 8414)
    r = bounds_row(5, 6)
    assert (r.r1, r.r2, r.rho1_floor, r.s) == (7, 2232, 2232, 4463)
    r = bounds_row(3, 6)
    assert (r.r1, r.r2, r.rho1_floor, r.s) == (7, 104, 104, 207)


def test_bounds_row_invariants():
    for q in (3, 4, 5):
        for m in range(3, 11):
            r = bounds_row(q, m)
            assert r.s == (r.lambda0 + 1) * r.r2 - 1
            assert r.rho1 == Fraction(q ** m - 1, m + 1)
            assert r.rho2 == Fraction(q ** (m - 1) * (q - 1) - 1, 2)
            assert r.rho3 == Fraction(q ** m, m + 1)
            assert r.t == (q ** (m - 1) * (q - 1) - 1) // 2
            assert r.s_eff == min(r.s, r.t)
            assert r.as_dict()["rho1_floor"] == r.rho1_floor


def test_prop51_examples():
    rho1, rho2, rho3 = prior_bounds(3, 3)
    assert math.floor(rho1) == 6 and math.floor(rho3) == 6 and rho2 == Fraction(17, 2)
    rho1, _, rho3 = prior_bounds(4, 3)
    assert (math.floor(rho1), math.floor(rho3)) == (15, 16)
    rho1, rho2, _ = prior_bounds(5, 3)
    assert rho2 == Fraction(99, 2) and rho1 == 31


def test_prop51_grid():
    for q in (3, 4, 5, 7, 8, 9):
        for m in range(3, 11):
            assert prop51_check(q, m)


def test_prob_exact_small_example():
    res = prob_exact(6, 3, 2, 2)
    assert res.p_exact == Fraction(2, 5) == naive_prob(3, 2, 2)
    assert res.delta == 1


def test_prob_exact_matches_naive_enumeration():
    for r1, r2 in coprime_splits(15):
        n = r1 * r2
        for s in range(1, n + 1):
            assert prob_exact(n, r1, r2, s).p_exact == naive_prob(r1, r2, s)


def test_truncation_is_valid():
    for r1, r2 in coprime_splits(60):
        n = r1 * r2
        for s in range(1, n + 1):
            assert inclusion_exclusion_count(n, r1, r2, s) == \
                inclusion_exclusion_count(n, r1, r2, s, upper=r2)


def test_closed_form_sum():
    for r1, r2 in [(7, 104), (11, 93), (32, 205)]:
        n = r1 * r2
        s = 200
        delta = -(-s // r1)
        direct = sum((-1) ** (j + 1) * math.comb(r2, j) * math.comb(n - j * r1, s)
                     for j in range(1, r2 - delta + 1))
        assert inclusion_exclusion_count(n, r1, r2, s) == direct


def test_monotone_in_s():
    for r1, r2 in coprime_splits(40):
        n = r1 * r2
        ps = [prob_exact(n, r1, r2, s).p_exact for s in range(1, n + 1)]
        assert all(a >= b for a, b in zip(ps, ps[1:]))
        assert all(0 <= p <= 1 for p in ps)


def test_probability_rows():
    got = {(q, m): probability_row(q, m, r1, r2) for q, m, r1, r2 in PROBABILITY_ROWS}
    assert got[(3, 8)].s == 819 and got[(4, 5)].s == 278 and got[(3, 6)].s == 207
    assert got[(4, 5)].p_decimal(4) == "0.9516"
    assert got[(3, 8)].p_decimal(4) == "0.9481"
    assert abs(got[(3, 8)].p_float - 0.9482) < 1e-4
    assert got[(5, 6)].p_float > 0.99995


def test_p_decimal_truncates():
    res = prob_exact(6, 3, 2, 2)
    assert res.p_decimal(3) == "0.400"
    assert prob_exact(6, 3, 2, 1).p_decimal(2) == "1.00"


def test_montecarlo_edges():
    assert prob_montecarlo(15, 5, 3, 15, 200, 0) == 0.0
    assert prob_montecarlo(15, 5, 3, 2, 200, 0) == 1.0
    assert prob_montecarlo(35, 5, 7, 9, 500, 3) == prob_montecarlo(35, 5, 7, 9, 500, 3)
    with pytest.raises(ValueError):
        prob_montecarlo(15, 5, 3, 4, 0, 0)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(3, 5), (5, 3), (4, 7), (7, 4), (5, 6)]), st.data())
def test_montecarlo_close_to_exact(split, data):
    r1, r2 = split
    n = r1 * r2
    s = data.draw(st.integers(1, n))
    p = float(prob_exact(n, r1, r2, s).p_exact)
    est = prob_montecarlo(n, r1, r2, s, 4000, data.draw(st.integers(0, 1000)))
    assert abs(est - p) <= 5 * math.sqrt(p * (1 - p) / 4000) + 1e-12


def test_parameter_errors():
    with pytest.raises(ValueError):
        prob_exact(12, 3, 4, 0)
    with pytest.raises(ValueError):
        prob_exact(12, 2, 6, 3)
    with pytest.raises(ValueError):
        prob_exact(13, 3, 4, 3)
    with pytest.raises(ValueError):
        prob_bruteforce(3, 10, 2)


def test_bruteforce_oracle_small():
    assert prob_bruteforce(3, 2, 2) == Fraction(2, 5)
    assert prob_bruteforce(4, 3, 5) == naive_prob(4, 3, 5)


def test_emit_tables_formats():
    doc = json.loads(emit_tables([3], range(2, 6), fmt="json", probability=False))
    tab = doc["bounds"][0]
    assert tab["missing"] == [2]
    assert [r["m"] for r in tab["rows"]] == [3, 4, 5]
    rows = list(csv.reader(io.StringIO(emit_tables([3], range(2, 5), fmt="csv",
                                                  probability=False))))
    assert rows[0][:3] == ["table", "q", "m"]
    assert any(r[2] == "2" and r[3] == "" for r in rows[1:])
    md = emit_tables([4], range(2, 4), fmt="markdown", probability=True, prob_digits=4)
    assert "| 2 | 5 | 3 | 5 | 8 | 5 |" in md
    assert "0.9516" in md
    with pytest.raises(ValueError):
        emit_tables([3], range(3, 4), fmt="xml")
