"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 cap exceeded, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .analysis import best_decomposition, emit_tables, prob_exact, prob_montecarlo
from .exceptions import CapExceeded, DecodeFailure, InfoSetError
from .grm_code import build_code, encode, format_codeword, parse_codeword
from .infoset import Decomposition, build_infoset, find_decompositions, verify_infoset
from .permdec import PermDecoder, s_pd_bound, verify_pd_like

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(doc, out):
    out.write(json.dumps(doc, sort_keys=True) + "\n")


def _envelope(cmd, config, **payload):
    return {"tool": "grmpd", "version": __version__, "command": cmd,
            "config": config, **payload}


def _resolve_dec(q, m, r1=None, r2=None):
    """Decomposition from explicit factors, else the best-s one."""
    if r1 is not None or r2 is not None:
        n = q ** m - 1
        if r1 is None:
            r1 = n // r2
        if r2 is None:
            r2 = n // r1
        return Decomposition(q, m, r1, r2)
    dec = best_decomposition(q, m)
    if dec is None:
        raise UsageError(f"no usable decomposition of {q}^{m} - 1")
    return dec


def _read_word(args):
    if args.word is not None:
        return parse_codeword(args.word)
    if args.input:
        with open(args.input) as fh:
            return parse_codeword(fh.read())
    return parse_codeword(sys.stdin.read())


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_code(args, out):
    code = build_code(args.q, args.m, args.rho, method=args.method)
    desc = code.descriptor()
    config = {"q": args.q, "m": args.m, "rho": args.rho, "method": args.method}
    doc = _envelope("code", config, code=desc, defining_set_size=len(code.defining_set))
    if args.rho == 1:
        doc["expected"] = {"k": args.m + 1, "d": args.q ** (args.m - 1) * (args.q - 1)}
    if args.matrices:
        doc["gen_matrix"] = code.gen_matrix.tolist()
        doc["par_matrix"] = code.par_matrix.tolist()
    _dump(doc, out)
    return EXIT_OK


def cmd_decomp(args, out):
    decs = find_decompositions(args.q, args.m)
    rows = []
    for dec in decs:
        row = dec.to_dict()
        try:
            row["lambda0"], row["s"] = s_pd_bound(dec, args.m)
        except ValueError:
            row["lambda0"], row["s"] = None, None
        rows.append(row)
    config = {"q": args.q, "m": args.m}
    _dump(_envelope("decomp", config, q=args.q, m=args.m, n=args.q ** args.m - 1,
                    decompositions=rows), out)
    return EXIT_OK


def cmd_infoset(args, out):
    dec = _resolve_dec(args.q, args.m, args.r1, args.r2)
    info = build_infoset(dec, full_order=not args.general)
    code = build_code(args.q, args.m, 1)
    ok = verify_infoset(code, info)
    config = {"q": args.q, "m": args.m, "r1": dec.r1, "r2": dec.r2, "general": args.general}
    _dump(_envelope("infoset", config, gamma=[list(g) for g in info.gamma],
                    exponents=list(info.exponents), positions=list(info.positions),
                    verified=ok), out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_encode(args, out):
    dec = _resolve_dec(args.q, args.m, args.r1, args.r2)
    info = build_infoset(dec)
    code = build_code(args.q, args.m, 1)
    msg = parse_codeword(args.message)
    if len(msg) != code.k or (msg >= args.q).any() or (msg < 0).any():
        raise UsageError(f"message must be {code.k} symbols in [0, {args.q})")
    out.write(format_codeword(encode(code, msg, info.positions)) + "\n")
    return EXIT_OK


def cmd_decode(args, out):
    dec = _resolve_dec(args.q, args.m, args.r1, args.r2)
    code = build_code(args.q, args.m, 1)
    decoder = PermDecoder(code, dec)
    r = _read_word(args)
    if len(r) != code.length:
        raise UsageError(f"received word must have {code.length} symbols")
    try:
        res = decoder.decode(r)
    except DecodeFailure as exc:
        sys.stderr.write(f"decode failure: {exc}\n")
        return EXIT_VERIFY
    if args.json:
        config = {"q": args.q, "m": args.m, "r1": dec.r1, "r2": dec.r2}
        _dump(_envelope("decode", config, codeword=res.codeword.tolist(),
                        sigma_index=res.sigma_index, shift=res.shift,
                        perms_tried=res.perms_tried), out)
    else:
        out.write(format_codeword(res.codeword) + "\n")
    return EXIT_OK


_WORKER = {}


def _trial_worker(payload):
    q, m, r1, r2, seed, indices, weights = payload
    key = (q, m, r1, r2)
    if key not in _WORKER:
        code = build_code(q, m, 1)
        _WORKER[key] = PermDecoder(code, Decomposition(q, m, r1, r2))
    return [_one_trial(_WORKER[key], seed, i, w) for i, w in zip(indices, weights)]


def _one_trial(decoder, seed, index, weight):
    code = decoder.code
    rng = np.random.default_rng([seed, index])
    c = code.random_codeword(rng)
    e = np.zeros(code.length, dtype=np.int64)
    support = rng.choice(code.length, size=weight, replace=False)
    e[support] = rng.integers(1, code.q, size=weight)
    r = code.sub.add(c, e)
    try:
        res = decoder.decode(r)
        success = bool(np.array_equal(res.codeword, c))
        tried, t2 = res.perms_tried, res.in_t2_prefix and res.sigma_index == 0
    except DecodeFailure as exc:
        success, tried, t2 = False, exc.perms_tried, False
    return {"trial": index, "seed": seed, "error_weight": int(weight),
            "perms_tried": int(tried), "success": success,
            "in_guarantee": bool(weight <= decoder.s_eff), "t2_only": bool(t2)}


def cmd_trials(args, out):
    dec = _resolve_dec(args.q, args.m, args.r1, args.r2)
    code = build_code(args.q, args.m, 1)
    decoder = PermDecoder(code, dec)
    if args.error_weight is not None:
        weights = [args.error_weight] * args.trials
    else:
        top = decoder.s_eff if args.max_weight is None else args.max_weight
        wrng = np.random.default_rng([args.seed, 2 ** 32 - 1])
        weights = [int(w) for w in wrng.integers(0, top + 1, size=args.trials)]
    if any(w > code.length for w in weights):
        raise UsageError("error weight exceeds the code length")

    if args.jobs > 1:
        chunks = np.array_split(np.arange(args.trials), args.jobs)
        payloads = [(args.q, args.m, dec.r1, dec.r2, args.seed, list(map(int, ch)),
                     [weights[i] for i in ch]) for ch in chunks if len(ch)]
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            records = [r for part in ex.map(_trial_worker, payloads) for r in part]
    else:
        records = [_one_trial(decoder, args.seed, i, w) for i, w in enumerate(weights)]
    records.sort(key=lambda r: r["trial"])

    transcript = None
    if args.transcript:
        transcript = open(args.transcript, "w")
    try:
        for rec in records:
            if transcript is not None:
                _dump(rec, transcript)
    finally:
        if transcript is not None:
            transcript.close()

    guaranteed = [r for r in records if r["in_guarantee"]]
    hist = Counter(r["perms_tried"] for r in records)
    config = {"q": args.q, "m": args.m, "r1": dec.r1, "r2": dec.r2,
              "trials": args.trials, "seed": args.seed,
              "error_weight": args.error_weight, "max_weight": args.max_weight}
    summary = {
        "success_rate": sum(r["success"] for r in records) / max(1, len(records)),
        "guaranteed_trials": len(guaranteed),
        "guaranteed_success_rate": (sum(r["success"] for r in guaranteed) / len(guaranteed)
                                    if guaranteed else None),
        "out_of_guarantee_trials": len(records) - len(guaranteed),
        "t2_only_fraction": sum(r["t2_only"] for r in records) / max(1, len(records)),
        "perms_histogram": {str(k): v for k, v in sorted(hist.items())},
        "s_bound": decoder.s_bound, "t": decoder.t, "s_eff": decoder.s_eff,
    }
    if args.transcript is None and args.lines:
        for rec in records:
            _dump(rec, out)
    _dump(_envelope("trials", config, summary=summary), out)
    failed = [r for r in guaranteed if not r["success"]]
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_verify_pd(args, out):
    dec = _resolve_dec(args.q, args.m, args.r1, args.r2)
    info = build_infoset(dec)
    s = args.s if args.s is not None else s_pd_bound(dec, args.m)[1]
    mode = "sampled" if args.sampled else "exhaustive"
    res = verify_pd_like(dec, info.exponents, s, mode=mode, trials=args.trials,
                         seed=args.seed, cap=args.cap, jobs=args.jobs)
    config = {"q": args.q, "m": args.m, "r1": dec.r1, "r2": dec.r2, "s": s,
              "mode": mode, "trials": args.trials if mode == "sampled" else None,
              "seed": args.seed, "cap": args.cap}
    _dump(_envelope("verify-pd", config, result="PASS" if res.passed else "FAIL",
                    checked=res.checked,
                    counterexample=list(res.counterexample) if res.counterexample else None),
          out)
    return EXIT_OK if res.passed else EXIT_VERIFY


def cmd_prob(args, out):
    dec = _resolve_dec(args.q, args.m, args.r1, args.r2)
    s = args.s if args.s is not None else s_pd_bound(dec, args.m)[1]
    res = prob_exact(dec.n, dec.r1, dec.r2, s)
    if args.mc_trials:
        res.mc_estimate = prob_montecarlo(dec.n, dec.r1, dec.r2, s, args.mc_trials, args.seed)
        res.mc_trials, res.mc_seed = args.mc_trials, args.seed
    config = {"q": args.q, "m": args.m, "r1": dec.r1, "r2": dec.r2, "s": s,
              "mc_trials": args.mc_trials, "seed": args.seed, "digits": args.digits}
    _dump(_envelope("prob", config, **res.as_dict(args.digits)), out)
    return EXIT_OK


def cmd_tables(args, out):
    q_list = [int(x) for x in args.q_list.split(",")]
    text = emit_tables(q_list, range(args.m_min, args.m_max + 1), fmt=args.format,
                       probability=not args.no_probability)
    if args.format == "json":
        doc = json.loads(text)
        config = {"q_list": q_list, "m_min": args.m_min, "m_max": args.m_max,
                  "format": args.format}
        _dump(_envelope("tables", config, **doc), out)
    else:
        out.write(f"# grmpd {__version__} tables q={args.q_list} m={args.m_min}..{args.m_max}\n")
        out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="grmpd", description="First-order GRM codes and permutation decoding")
    p.add_argument("--version", action="version", version=f"grmpd {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def code_args(sp, decomp=False):
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        if decomp:
            sp.add_argument("--r1", type=int)
            sp.add_argument("--r2", type=int)

    sp = sub.add_parser("code", help="build R_q(rho, m) and report its parameters")
    code_args(sp)
    sp.add_argument("--rho", type=int, default=1)
    sp.add_argument("--method", choices=["auto", "kernel", "cyclic"], default="auto")
    sp.add_argument("--matrices", action="store_true", help="include G and H as JSON rows")
    sp.set_defaults(func=cmd_code)

    sp = sub.add_parser("decomp", help="admissible decompositions of q^m - 1")
    code_args(sp)
    sp.set_defaults(func=cmd_decomp)

    sp = sub.add_parser("infoset", help="information set of a decomposition")
    code_args(sp, decomp=True)
    sp.add_argument("--general", action="store_true",
                    help="use the a = ord_r1(q) form instead of requiring a = m")
    sp.set_defaults(func=cmd_infoset)

    sp = sub.add_parser("encode", help="systematic encoding on the information set")
    code_args(sp, decomp=True)
    sp.add_argument("--message", required=True, help="k whitespace separated symbols")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="permutation-decode one received word")
    code_args(sp, decomp=True)
    sp.add_argument("--word", help="whitespace separated symbols")
    sp.add_argument("--input", help="file holding the received word")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("trials", help="seeded noisy-channel decoding experiment")
    code_args(sp, decomp=True)
    sp.add_argument("--trials", type=int, default=1000)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--error-weight", type=int)
    grp.add_argument("--max-weight", type=int, help="uniform weight in [0, W] (default s_eff)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--transcript", help="write per-trial JSON lines to this file")
    sp.add_argument("--lines", action="store_true", help="print per-trial JSON lines to stdout")
    sp.set_defaults(func=cmd_trials)

    sp = sub.add_parser("verify-pd", help="check the PD-like property of the cyclic shifts")
    code_args(sp, decomp=True)
    sp.add_argument("--s", type=int)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--exhaustive", action="store_true")
    grp.add_argument("--sampled", action="store_true")
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cap", type=int, default=10 ** 7)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify_pd)

    sp = sub.add_parser("prob", help="probability that <T2> alone suffices")
    code_args(sp, decomp=True)
    sp.add_argument("--s", type=int)
    sp.add_argument("--mc-trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--digits", type=int, default=20)
    sp.set_defaults(func=cmd_prob)

    sp = sub.add_parser("tables", help="regenerate the bounds and probability tables")
    sp.add_argument("--format", choices=["json", "csv", "markdown"], default="markdown")
    sp.add_argument("--q-list", default="3,4,5")
    sp.add_argument("--m-min", type=int, default=2)
    sp.add_argument("--m-max", type=int, default=10)
    sp.add_argument("--no-probability", action="store_true")
    sp.set_defaults(func=cmd_tables)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except (UsageError, InfoSetError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
