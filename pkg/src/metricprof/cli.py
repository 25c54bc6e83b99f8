"""Command-line entry point: ``metricprof <subcommand> ...``.

Exit codes: 0 success, 1 hash validation found violations, 2 bad input,
3 overflow or sample budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
import time

import numpy as np

from . import hash_family, metric, oracle
from .approximator import ApproxParams, DistanceProfile, approximate_profile
from .convolution import exact_profile_per_letter
from .errors import BudgetExceeded, MetricProfError, OverflowRisk
from .io import DEFAULT_WILDCARD_TOKEN, load_metric, read_symbols, read_tokens
from .one_mismatch import one_mismatch
from .streams import DEFAULT_SEED, stream

SEED_ENV = "METRICPROF_SEED"


def resolve_seed(value) -> int:
    """``--seed`` value, else $METRICPROF_SEED, else the fixed default."""
    if value is None:
        value = os.environ.get(SEED_ENV)
    if value is None:
        return DEFAULT_SEED
    if str(value).lower() == "random":
        return int.from_bytes(os.urandom(8), "little")
    return int(value)


def _inputs(args):
    ms = load_metric(args.metric, check_triangle=not args.skip_triangle)
    text = read_symbols(args.text, ms, args.wildcard, args.bytes)
    pattern = read_symbols(args.pattern, ms, args.wildcard, args.bytes)
    if pattern.size == 0 or pattern.size > text.size:
        raise ValueError(f"need 1 <= m <= n, got m={pattern.size}, n={text.size}")
    return ms, text, pattern


def _write(args, payload: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _profile_csv(values, low=None) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["offset", "value"] + (["low_confidence"] if low is not None else [])
    w.writerow(header)
    for i, v in enumerate(values.tolist()):
        row = [i, repr(v)]
        if low is not None:
            row.append(int(low[i]))
        w.writerow(row)
    return buf.getvalue()


def _dump(doc: dict) -> str:
    return json.dumps(doc) + "\n"


def cmd_exact(args) -> int:
    ms, text, pattern = _inputs(args)
    if args.method == "naive":
        values = oracle.naive_profile(text, pattern, ms)
    else:
        values = exact_profile_per_letter(text, pattern, ms)
    doc = {"mode": "exact", "method": args.method, "n": int(text.size), "m": int(pattern.size),
           "offsets": int(values.size), "profile": values.tolist(), "scale": ms.scale}
    if args.verify:
        other = (exact_profile_per_letter(text, pattern, ms) if args.method == "naive"
                 else oracle.naive_profile(text, pattern, ms))
        err = np.abs(values - other) / np.maximum(np.abs(other), np.finfo(float).tiny)
        small = np.abs(other) < 1e-9 * max(1.0, float(np.abs(other).max()))
        worst = float(np.where(small, 0.0, err).max())
        doc["verify"] = {"max_relative_error": worst, "ok": worst <= 1e-9}
        if worst > 1e-9:
            sys.stderr.write(_dump({"error": "VerifyMismatch", "max_relative_error": worst}))
            _write(args, _dump(doc))
            return 1
    _write(args, _dump(doc) if args.format == "json" else _profile_csv(values))
    return 0


def cmd_approx(args) -> int:
    ms, text, pattern = _inputs(args)
    params = ApproxParams(epsilon=args.epsilon, t=args.t, k_const=args.k_const,
                          master_seed=resolve_seed(args.seed), c_part=args.c_part,
                          max_samples=args.max_samples, threads=args.threads)
    prof: DistanceProfile = approximate_profile(text, pattern, ms, args.family, params)
    if args.format == "json":
        _write(args, _dump(prof.to_dict()))
    else:
        _write(args, _profile_csv(prof.values, prof.low_confidence))
    return 0


def cmd_mismatch1(args) -> int:
    if args.metric:
        ms = load_metric(args.metric, check_triangle=False)
        text = read_symbols(args.text, ms, args.wildcard, args.bytes)
        pattern = read_symbols(args.pattern, ms, args.wildcard, args.bytes)
    else:
        ids: dict = {}
        def convert(tokens):
            return np.array([metric.WILDCARD if tok == args.wildcard
                             else ids.setdefault(tok, len(ids)) for tok in tokens], dtype=np.int64)
        text = convert(read_tokens(args.text))
        pattern = convert(read_tokens(args.pattern))
    if pattern.size == 0 or pattern.size > text.size:
        raise ValueError(f"need 1 <= m <= n, got m={pattern.size}, n={text.size}")
    labels = one_mismatch(text, pattern).labels()
    if args.format == "json":
        _write(args, _dump({"mode": "mismatch1", "n": int(text.size), "m": int(pattern.size),
                            "offsets": len(labels), "labels": labels}))
    else:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["offset", "label"])
        w.writerows(enumerate(labels))
        _write(args, buf.getvalue())
    return 0


def validate_family(ms: metric.MetricSpace, D: float, draws: int, seed: int,
                    kind=None, c_part: float = hash_family.DEFAULT_C_PART):
    """Check both separation conditions over ``draws`` draws.

    Returns the report dict and the ``(draws, sigma)`` table array.
    """
    ms = metric.normalize(ms)
    fam = hash_family.make_family(ms, kind, threshold=D, c_part=c_part)
    tables = fam.sample_tables(stream(seed, "hash-validate"), draws)
    C = fam.factor
    iu, ju = np.triu_indices(ms.size, k=1)
    d = ms.matrix[iu, ju]
    freq = (tables[:, iu] != tables[:, ju]).mean(axis=0)
    far = d >= D
    c1 = int((freq[far] < 1.0).sum())
    bound = np.minimum(1.0, C * d / D)
    slack = 3 * np.sqrt(bound * (1 - bound) / draws)
    excess = freq - bound - slack
    c2 = int((excess > 0).sum())
    report = {
        "family": fam.kind, "D": float(D), "C": C, "draws": draws, "seed": seed,
        "pairs": int(d.size), "pairs_far": int(far.sum()),
        "condition1_violations": c1, "condition2_violations": c2,
        "max_excess": float(excess.max()) if excess.size else 0.0,
        "ok": c1 == 0 and c2 == 0,
    }
    return report, tables


def cmd_hash_validate(args) -> int:
    ms = load_metric(args.metric, check_triangle=not args.skip_triangle)
    report, tables = validate_family(ms, args.D, args.draws, resolve_seed(args.seed),
                                     args.family, args.c_part)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["draw_id", "symbol", "bucket"])
            names = ms.symbols or [str(i) for i in range(ms.size)]
            for k, row in enumerate(tables.tolist()):
                for sym, bucket in zip(names, row):
                    w.writerow([k, sym, bucket])
    _write(args, _dump(report))
    return 0 if report["ok"] else 1


def cmd_bench(args) -> int:
    seed = resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    ms = metric.random_metric(args.sigma, args.b_d, rng)
    params = ApproxParams(epsilon=args.epsilon, t=args.t, k_const=args.k_const,
                          master_seed=seed, threads=args.threads)
    rows = []
    for n in args.n:
        for m in args.m:
            if m > n:
                continue
            text = rng.integers(0, ms.size, n)
            pattern = rng.integers(0, ms.size, m)
            for method in args.methods:
                start = time.perf_counter()
                if method == "naive":
                    oracle.naive_profile(text, pattern, ms)
                elif method == "per-letter":
                    exact_profile_per_letter(text, pattern, ms)
                elif method == "mismatch1":
                    one_mismatch(text, pattern)
                else:
                    approximate_profile(text, pattern, ms, params=params)
                rows.append({"method": method, "n": n, "m": m,
                             "seconds": time.perf_counter() - start})
    if args.format == "json":
        _write(args, _dump({"mode": "bench", "sigma": args.sigma, "b_d": args.b_d, "rows": rows}))
    else:
        buf = _io.StringIO()
        w = csv.DictWriter(buf, ["method", "n", "m", "seconds"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _write(args, buf.getvalue())
    return 0


def _epsilon(value: str) -> float:
    v = float(value)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1)")
    return v


def _confidence(value: str) -> float:
    v = float(value)
    if v < 1:
        raise argparse.ArgumentTypeError("t must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricprof",
                                     description="Pattern-to-text distance profiles under an alphabet metric.")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, metric_required=True):
        p.add_argument("--metric", required=metric_required)
        p.add_argument("--text", required=True)
        p.add_argument("--pattern", required=True)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--wildcard", default=DEFAULT_WILDCARD_TOKEN)
        p.add_argument("--bytes", action="store_true", help="treat raw bytes as symbols 0..255")
        p.add_argument("--skip-triangle", action="store_true")

    p = sub.add_parser("exact", help="exact profile")
    io_flags(p)
    p.add_argument("--method", choices=("naive", "per-letter"), default="per-letter")
    p.add_argument("--verify", action="store_true", help="cross-check both exact methods")
    p.set_defaults(func=cmd_exact)

    def approx_flags(p):
        p.add_argument("--epsilon", type=_epsilon, default=0.25)
        p.add_argument("--t", type=_confidence, default=3.0)
        p.add_argument("--k-const", type=float, default=4.0)
        p.add_argument("--seed")
        p.add_argument("--threads", type=int)

    p = sub.add_parser("approx", help="approximate profile")
    io_flags(p)
    approx_flags(p)
    p.add_argument("--family", choices=(hash_family.GRID, hash_family.PARTITION))
    p.add_argument("--c-part", type=float, default=hash_family.DEFAULT_C_PART)
    p.add_argument("--max-samples", type=int, default=ApproxParams.max_samples)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("mismatch1", help="label offsets match / single mismatch / many")
    io_flags(p, metric_required=False)
    p.set_defaults(func=cmd_mismatch1)

    p = sub.add_parser("hash-validate", help="check separation conditions of a hash family")
    p.add_argument("--metric", required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--family", choices=(hash_family.GRID, hash_family.PARTITION))
    p.add_argument("--c-part", type=float, default=hash_family.DEFAULT_C_PART)
    p.add_argument("--seed")
    p.add_argument("--dump", help="CSV file of (draw_id, symbol, bucket) rows")
    p.add_argument("--out")
    p.add_argument("--skip-triangle", action="store_true")
    p.set_defaults(func=cmd_hash_validate)

    p = sub.add_parser("bench", help="timing table over n and m")
    p.add_argument("--n", type=int, nargs="+", default=[1000, 2000, 4000])
    p.add_argument("--m", type=int, nargs="+", default=[50, 200])
    p.add_argument("--methods", nargs="+", default=["naive", "per-letter", "mismatch1", "approx"],
                   choices=("naive", "per-letter", "mismatch1", "approx"))
    p.add_argument("--sigma", type=int, default=16)
    p.add_argument("--b-d", type=float, default=8.0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    approx_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OverflowRisk, BudgetExceeded) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 3
    except (MetricProfError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
