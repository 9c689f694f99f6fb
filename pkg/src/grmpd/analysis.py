"""Correction bounds, example tables and the <T2>-only success probability."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .infoset import Decomposition, find_decompositions
from .permdec import s_pd_bound

# (q, m, r1, r2) rows of the probability table; (3, 8) uses 32 * 205
# rather than the best-s split 41 * 160.
PROBABILITY_ROWS = [
    (3, 6, 7, 104),
    (3, 8, 32, 205),
    (5, 5, 11, 284),
    (5, 6, 7, 2232),
    (4, 5, 11, 93),
    (4, 6, 13, 315),
]


@dataclass
class BoundsRow:
    q: int
    m: int
    r1: int
    r2: int
    rho1: Fraction
    rho2: Fraction
    rho3: Fraction
    lambda0: int
    s: int
    k: int
    d: int
    t: int

    @property
    def rho1_floor(self):
        return math.floor(self.rho1)

    @property
    def rho2_floor(self):
        return math.floor(self.rho2)

    @property
    def rho3_floor(self):
        return math.floor(self.rho3)

    @property
    def s_eff(self):
        return min(self.s, self.t)

    def as_dict(self):
        d = asdict(self)
        for key in ("rho1", "rho2", "rho3"):
            d[key] = str(d[key])
        d.update(rho1_floor=self.rho1_floor, rho2_floor=self.rho2_floor,
                 rho3_floor=self.rho3_floor, s_eff=self.s_eff)
        return d


def prior_bounds(q, m):
    """(rho1, rho2, rho3) as exact rationals."""
    rho1 = Fraction(q ** m - 1, m + 1)
    rho2 = Fraction(q ** (m - 1) * (q - 1) - 1, 2)
    rho3 = Fraction(q ** m, m + 1)
    return rho1, rho2, rho3


def best_decomposition(q, m):
    """Decomposition with the largest s; ties go to the smaller r1."""
    best, best_s = None, -1
    for dec in find_decompositions(q, m):
        if dec.r1 <= m:
            continue
        _, s = s_pd_bound(dec, m)
        if s > best_s:
            best, best_s = dec, s
    return best


def bounds_row(q, m, dec=None):
    if dec is None:
        dec = best_decomposition(q, m)
        if dec is None:
            raise ValueError(f"no usable decomposition of {q}^{m} - 1")
    lam0, s = s_pd_bound(dec, m)
    rho1, rho2, rho3 = prior_bounds(q, m)
    d = q ** (m - 1) * (q - 1)
    return BoundsRow(q=q, m=m, r1=dec.r1, r2=dec.r2, rho1=rho1, rho2=rho2,
                     rho3=rho3, lambda0=lam0, s=s, k=m + 1, d=d, t=(d - 1) // 2)


def prop51_check(q, m):
    """Both comparison clauses: floor(rho3) in {floor(rho1), floor(rho1)+1}
    and rho2 >= rho1."""
    rho1, rho2, rho3 = prior_bounds(q, m)
    f1, f3 = math.floor(rho1), math.floor(rho3)
    return f3 in (f1, f1 + 1) and rho2 >= rho1


# ---------------------------------------------------------------------------
# probability that the <T2> shifts alone suffice
# ---------------------------------------------------------------------------

@dataclass
class ProbResult:
    n: int
    r1: int
    r2: int
    s: int
    delta: int
    p_exact: Fraction
    mc_estimate: float | None = None
    mc_trials: int | None = None
    mc_seed: int | None = None

    def p_decimal(self, digits=20):
        """Exact value rendered to ``digits`` decimals (truncated)."""
        num, den = self.p_exact.numerator, self.p_exact.denominator
        whole, rem = divmod(num, den)
        frac = rem * 10 ** digits // den
        return f"{whole}.{frac:0{digits}d}"

    @property
    def p_float(self):
        return float(self.p_exact)

    def as_dict(self, digits=20):
        return {"n": self.n, "r1": self.r1, "r2": self.r2, "s": self.s,
                "delta": self.delta, "p_exact": f"{self.p_exact.numerator}/{self.p_exact.denominator}",
                "p": self.p_decimal(digits), "mc_estimate": self.mc_estimate,
                "mc_trials": self.mc_trials, "mc_seed": self.mc_seed}


def _check_params(n, r1, r2, s):
    if r1 * r2 != n:
        raise ValueError(f"{r1} * {r2} != {n}")
    if math.gcd(r1, r2) != 1:
        raise ValueError(f"gcd({r1}, {r2}) != 1")
    if not 0 < s <= n:
        raise ValueError(f"s={s} outside (0, {n}]")


def inclusion_exclusion_count(n, r1, r2, s, upper=None):
    """Number of s-subsets of Z_r1 x Z_r2 missing at least one pi2-fiber.

    Avoiding j chosen fibers leaves n - j*r1 elements, so the j-fold
    intersections contribute C(r2, j) * C(n - j*r1, s).  The sum runs to
    ``r2 - ceil(s/r1)`` unless ``upper`` is given.
    """
    delta = -(-s // r1)
    upper = r2 - delta if upper is None else upper
    total = 0
    avoid = math.comb(n - r1, s) if upper >= 1 else 0   # C(n - j*r1, s)
    choose = r2                                          # C(r2, j)
    for j in range(1, upper + 1):
        term = choose * avoid
        total += term if j % 2 else -term
        # step N = n - j*r1 down by r1: C(N - r1, s) = C(N, s) (N-s)_r1 / (N)_r1
        N = n - j * r1
        if N - r1 < s:
            avoid = 0
        else:
            num = math.prod(range(N - s - r1 + 1, N - s + 1))
            avoid = avoid * num // math.prod(range(N - r1 + 1, N + 1))
        choose = choose * (r2 - j) // (j + 1)
    return total


def prob_exact(n, r1, r2, s):
    _check_params(n, r1, r2, s)
    delta = -(-s // r1)
    count = inclusion_exclusion_count(n, r1, r2, s)
    return ProbResult(n=n, r1=r1, r2=r2, s=s, delta=delta,
                      p_exact=Fraction(count, math.comb(n, s)))


def bruteforce_counts(r1, r2):
    """``(hits, totals)`` indexed by s, from one pass over every subset of Z_n.

    ``hits[s]`` counts the s-subsets whose residues mod r2 miss some class.
    """
    n = r1 * r2
    if n > 26:
        raise ValueError("brute force limited to n <= 26")
    fibers = [sum(1 << i for i in range(n) if i % r2 == j) for j in range(r2)]
    hits = np.zeros(n + 1, dtype=np.int64)
    totals = np.zeros(n + 1, dtype=np.int64)
    chunk = 1 << 21
    for start in range(0, 1 << n, chunk):
        x = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        pop = np.bitwise_count(x)
        covers = np.ones(x.shape, dtype=bool)
        for f in fibers:
            covers &= (x & f) != 0
        totals += np.bincount(pop, minlength=n + 1)
        hits += np.bincount(pop[~covers], minlength=n + 1)
    return hits, totals


def prob_bruteforce(r1, r2, s):
    """Exact probability by enumerating every subset of Z_n as a bitmask."""
    hits, totals = bruteforce_counts(r1, r2)
    return Fraction(int(hits[s]), int(totals[s]))


def prob_montecarlo(n, r1, r2, s, trials, seed):
    """Fraction of uniform s-subsets of Z_n whose residues mod r2 miss some class."""
    _check_params(n, r1, r2, s)
    if trials <= 0:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    batch = max(1, min(trials, (1 << 23) // n))
    hits = 0
    done = 0
    while done < trials:
        b = min(batch, trials - done)
        B = np.argpartition(rng.random((b, n)), s - 1, axis=1)[:, :s] if s < n \
            else np.tile(np.arange(n), (b, 1))
        seen = np.zeros((b, r2), dtype=bool)
        seen[np.repeat(np.arange(b), s), (B % r2).reshape(-1)] = True
        hits += int(np.count_nonzero(~seen.all(axis=1)))
        done += b
    return hits / trials


def probability_row(q, m, r1, r2, trials=0, seed=0):
    dec = Decomposition(q, m, r1, r2)
    _, s = s_pd_bound(dec, m)
    res = prob_exact(dec.n, r1, r2, s)
    if trials:
        res.mc_estimate = prob_montecarlo(dec.n, r1, r2, s, trials, seed)
        res.mc_trials, res.mc_seed = trials, seed
    return res


# ---------------------------------------------------------------------------
# table emission
# ---------------------------------------------------------------------------

def bounds_table(q, m_values):
    rows, missing = [], []
    for m in m_values:
        try:
            rows.append(bounds_row(q, m))
        except ValueError:
            missing.append(m)
    return rows, missing


def emit_tables(q_list=(3, 4, 5), m_list=range(2, 11), fmt="json",
                probability=True, prob_digits=6):
    """Regenerate the correction-capability tables and the probability table.

    Returns a string in ``fmt`` (json, csv or markdown).  Rows that have no
    usable decomposition are listed under ``missing``.
    """
    tables = []
    for q in q_list:
        rows, missing = bounds_table(q, m_list)
        tables.append({"q": q, "rows": [r.as_dict() for r in rows], "missing": missing})
    prob_rows = []
    if probability:
        for q, m, r1, r2 in PROBABILITY_ROWS:
            res = probability_row(q, m, r1, r2)
            prob_rows.append({"q": q, "m": m, "r1": r1, "r2": r2, "s": res.s,
                              "p": res.p_decimal(prob_digits)})
    doc = {"bounds": tables, "probability": prob_rows}
    if fmt == "json":
        return json.dumps(doc, indent=2)
    if fmt == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["table", "q", "m", "r1", "r2", "rho1", "s", "t", "p"])
        for tab in tables:
            for r in tab["rows"]:
                w.writerow(["bounds", r["q"], r["m"], r["r1"], r["r2"],
                            r["rho1_floor"], r["s"], r["t"], ""])
            for m in tab["missing"]:
                w.writerow(["bounds", tab["q"], m, "", "", "", "", "", ""])
        for r in prob_rows:
            w.writerow(["probability", r["q"], r["m"], r["r1"], r["r2"], "", r["s"], "", r["p"]])
        return out.getvalue()
    if fmt == "markdown":
        lines = []
        for tab in tables:
            lines += [f"### R_{tab['q']}(1,m)", "",
                      "| m | r1 | r2 | rho1 | s | t |", "|---|---|---|---|---|---|"]
            for r in tab["rows"]:
                lines.append(f"| {r['m']} | {r['r1']} | {r['r2']} | {r['rho1_floor']} | {r['s']} | {r['t']} |")
            for m in tab["missing"]:
                lines.append(f"| {m} | - | - | - | - | - |")
            lines.append("")
        if prob_rows:
            lines += ["### Probability", "", "| q | m | r1 | r2 | s | p |",
                      "|---|---|---|---|---|---|"]
            for r in prob_rows:
                lines.append(f"| {r['q']} | {r['m']} | {r['r1']} | {r['r2']} | {r['s']} | {r['p']} |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
