"""Command-line entry point: ``matinv {delta,degseq,picard,verify,cache}``.

Output is JSON by default, with the full run configuration embedded.
``degseq`` also speaks CSV; every verb has a short text form. Exit status
is 0 iff no hard failure occurred; usage errors exit with status 2.

Environment: ``MATINV_CACHE_DIR`` and ``MATINV_PRIME_BITS`` supply defaults
that command-line flags override.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from gmpy2 import mpq

from . import charts, picard
from .degree_engine import DegreeCache, probe_degrees, symbolic_degree_oracle
from .errors import MatinvError, ProbeFailureError

PROPS = ("1.1", "2.1", "2.2", "3.1", "4.4", "5.1", "6.1")
DEFAULT_CACHE = Path.home() / ".cache" / "matinv"


class UsageError(Exception):
    pass


def _env_prime_bits() -> int:
    raw = os.environ.get("MATINV_PRIME_BITS")
    if raw is None:
        return 61
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MATINV_PRIME_BITS must be an integer, got {raw!r}")


def _cache_dir(args) -> Path:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    env = os.environ.get("MATINV_CACHE_DIR")
    return Path(env) if env else DEFAULT_CACHE


def _config(args) -> dict:
    cfg = {"command": args.command}
    for key in ("q", "n", "method", "convention", "seed", "prime_bits", "trials", "emit", "props", "precision", "format"):
        if hasattr(args, key):
            val = getattr(args, key)
            cfg[key.replace("_", "-")] = val
    if args.command == "degseq":
        cfg["cache-dir"] = None if args.no_cache else str(_cache_dir(args))
    return cfg


def _emit_json(obj) -> str:
    return json.dumps(obj, indent=2, default=str)


# -- verbs -------------------------------------------------------------------------------


def cmd_delta(args):
    if args.q < 3:
        raise UsageError("delta: q must be >= 3 (the dynamical degree formula is stated for q >= 3)")
    precision = mpq(1, 10**args.precision)
    res = picard.delta(args.q, precision)
    report = {"config": _config(args), **res.to_dict()}
    if args.format == "text":
        lines = [
            f"q = {args.q}",
            f"P(lambda) = lambda^2 - {args.q ** 2 - 4 * args.q + 2} lambda + 1",
            f"delta = {float(res.interval):.{min(args.precision, 15)}f}  in [{res.interval.lo}, {res.interval.hi}]  (closed-form)",
            f"spectral radius = {float(res.full_interval):.{min(args.precision, 15)}f}  (picard)",
            f"agree = {res.agree}",
        ]
        return "\n".join(lines), 0 if res.agree else 1
    return _emit_json(report), 0 if res.agree else 1


def _degseq_records(args):
    cache = None if args.no_cache else _cache_dir(args)
    out = {}
    if args.method in ("picard", "both"):
        out["picard"] = picard.predicted_degrees(args.q, args.n, args.convention)
    if args.method in ("probe", "both"):
        out["probe"] = probe_degrees(
            args.q, args.n, seed=args.seed, prime_bits=args.prime_bits, cache_path=cache
        )
    if args.method == "symbolic":
        out["symbolic"] = [symbolic_degree_oracle(args.q, n, seed=args.seed) for n in range(args.n + 1)]
    return out


def cmd_degseq(args):
    if args.n < 0:
        raise UsageError("degseq: --n must be >= 0")
    if args.method == "symbolic" and not (args.q <= 3 and args.n <= 2):
        raise UsageError("degseq: the symbolic method is limited to q <= 3 and n <= 2")
    if args.method == "probe" and args.q < 2:
        raise UsageError("degseq: q must be >= 2")
    recs = _degseq_records(args)
    rows = []
    agree = True
    for n in range(args.n + 1):
        row = {"q": args.q, "n": n}
        for method in sorted(recs):
            row[method] = recs[method][n].degree
        if args.method == "both":
            row["agreement"] = row["picard"] == row["probe"]
            agree = agree and row["agreement"]
        rows.append(row)
    status = 0 if agree else 1
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue().rstrip("\n"), status
    if args.format == "text":
        header = "  ".join(f"{k:>10}" for k in rows[0])
        body = ["  ".join(f"{str(v):>10}" for v in r.values()) for r in rows]
        return "\n".join([header] + body), status
    report = {
        "config": _config(args),
        "table": rows,
        "records": {m: [r.to_dict() for r in rs] for m, rs in sorted(recs.items())},
    }
    if args.method == "both":
        report["agreement"] = agree
    return _emit_json(report), status


def cmd_picard(args):
    if args.q < 2:
        raise UsageError("picard: q must be >= 2")
    conv = picard.SignConvention(args.convention)
    status = 0
    if args.emit == "matrix":
        m = picard.pullback_matrix(args.q, conv)
        payload = {"basis": picard.PicBasis(args.q).labels(), "matrix": m.tolist(), "dimension": m.dim}
    elif args.emit == "charpoly":
        cp = picard.pullback_matrix(args.q, conv).charpoly()
        payload = {"charpoly": cp.int_coeffs(), "order": "constant term first", "degree": cp.degree()}
    elif args.emit == "factors":
        if args.q < 3:
            raise UsageError("picard --emit factors: q must be >= 3")
        rep = picard.charpoly_factor_check(args.q, conv)
        payload = rep.to_dict()
        payload["s1_restriction"] = picard.s1_restriction(args.q, conv).tolist()
        payload["s1_determinant"] = picard.s1_restriction(args.q, conv).det()
        status = 0 if rep.success else 1
    else:
        if args.q < 3:
            raise UsageError("picard --emit invariants: q must be >= 3")
        if conv != picard.SignConvention.ALL_NEGATIVE:
            raise UsageError("picard --emit invariants uses the all-negative convention")
        payload = picard.invariant_subspace_check(args.q)
        payload["transpose"] = picard.transpose_symmetry_check(args.q)
        status = 0 if payload["success"] else 1
    report = {"config": _config(args), "method": "picard", "convention": conv.value, **payload}
    if args.format == "text":
        return _picard_text(args, payload), status
    return _emit_json(report), status


def _picard_text(args, payload) -> str:
    if args.emit == "matrix":
        return "\n".join(" ".join(f"{x:>4}" for x in row) for row in payload["matrix"])
    if args.emit == "charpoly":
        return " ".join(str(c) for c in payload["charpoly"])
    if args.emit == "factors":
        lines = [f"q = {args.q}, convention = {payload['convention']}"]
        for st in payload["stages"]:
            lines.append("  " + ", ".join(f"{k}={v}" for k, v in st.items()))
        lines.append(f"success = {payload['success']}")
        return "\n".join(lines)
    lines = []
    for sub in payload["subspaces"]:
        lines.append(f"{sub['subspace']:>16}  invariant={sub['invariant']}  match={sub.get('match')}")
    lines.append(f"success = {payload['success']}")
    return "\n".join(lines)


def _parse_props(raw: str) -> List[str]:
    if raw == "all":
        return list(PROPS)
    props = [p.strip() for p in raw.split(",") if p.strip()]
    bad = [p for p in props if p not in PROPS]
    if bad or not props:
        raise UsageError(f"verify: unknown proposition id(s) {bad}; choose from {', '.join(PROPS)} or 'all'")
    return props


def _degree_anchor(q, seed, prime_bits):
    recs = probe_degrees(q, 1, seed=seed, prime_bits=prime_bits)
    expected = q * q - q + 1
    fails = [] if recs[1].degree == expected else [{"measured": recs[1].degree}]
    out = {
        "proposition": "1.1",
        "q": q,
        "trials": 1,
        "passes": 1 - len(fails),
        "failures": len(fails),
        "samples_of_failure": fails,
        "expected": expected,
        "probe": recs[1].to_dict(),
    }
    if q <= 3:
        sym = symbolic_degree_oracle(q, 1)
        out["symbolic"] = sym.to_dict()
        if sym.degree != expected:
            out["failures"] += 1
            out["samples_of_failure"].append({"symbolic": sym.degree})
    return out


def _valuation_part(rep, function, prop):
    rows = [r for r in rep["valuations"] if r["function"] == function]
    fails = [r for r in rows if not r["ok"]]
    return {
        "proposition": prop,
        "q": rep["q"],
        "trials": len(rows),
        "passes": len(rows) - len(fails),
        "failures": len(fails),
        "samples_of_failure": fails,
        "valuations": rows,
    }


def cmd_verify(args):
    props = _parse_props(args.props)
    if args.q < 3:
        raise UsageError("verify: q must be >= 3")
    t = args.trials
    reports = []
    val_rep = None
    for prop in props:
        if prop == "1.1":
            reports.append(_degree_anchor(args.q, args.seed, args.prime_bits))
        elif prop == "2.1":
            reports.append(charts.prop21_limit_check(args.q, t or 10, args.seed))
        elif prop == "2.2":
            reports.append(charts.rank_one_adjugate_check(args.q, t or 100, args.seed))
        elif prop == "3.1":
            reports.append(charts.prop31_image_check(args.q, t or 20, args.seed, args.prime_bits))
        elif prop == "4.4":
            reports.append(charts.prop4_homogeneity_check(args.q, t or 50, args.seed, args.prime_bits))
        else:
            if val_rep is None:
                val_rep = charts.valuation_orders_check(args.q, args.seed)
            fn = "P" if prop == "5.1" else "hyperplane"
            reports.append(_valuation_part(val_rep, fn, prop))
    hard = sum(r["failures"] for r in reports)
    hard += sum(c["failures"] for r in reports for c in r.get("valuation_checks", []))
    status = 0 if hard == 0 else 1
    if args.format == "text":
        lines = []
        for r in reports:
            lines.append(f"{r['proposition']:>5}  q={r['q']}  passes={r['passes']}/{r['trials']}  failures={r['failures']}")
            for c in r.get("valuation_checks", []):
                lines.append(f"{c['proposition']:>5}  q={c['q']}  passes={c['passes']}/{c['trials']}  failures={c['failures']}")
        lines.append("PASS" if status == 0 else "FAIL")
        return "\n".join(lines), status
    return _emit_json({"config": _config(args), "reports": reports, "hard_failures": hard}), status


def cmd_cache(args):
    cache = DegreeCache(_cache_dir(args))
    if args.action == "inspect":
        payload = {"path": str(cache.path), "groups": cache.summary(), "records": len(cache.records())}
    else:
        payload = {"path": str(cache.path), "removed": cache.clear()}
    if args.format == "text":
        return "\n".join(f"{k}: {v}" for k, v in payload.items()), 0
    return _emit_json(payload), 0


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matinv",
        description="Degree growth of K = I o J on q x q matrices: probes, Picard action, chart checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json", "text")):
        p.add_argument("--q", type=int, required=True, help="matrix size")
        p.add_argument("--format", choices=fmt, default="json")

    p = sub.add_parser("delta", help="dynamical degree as the largest root modulus of P")
    common(p)
    p.add_argument("--precision", type=int, default=12, help="interval width 10**-precision")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("degseq", help="degree sequence d_0..d_n")
    common(p, ("json", "csv", "text"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("probe", "picard", "symbolic", "both"), default="both")
    p.add_argument("--convention", choices=[c.value for c in picard.SignConvention], default="all-negative")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime-bits", type=int, default=None, choices=(61, 62, 63))
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true", help="do not read or write the degree cache")
    p.set_defaults(func=cmd_degseq)

    p = sub.add_parser("picard", help="pullback matrix on the Picard group")
    common(p)
    p.add_argument("--emit", choices=("matrix", "charpoly", "factors", "invariants"), default="factors")
    p.add_argument("--convention", choices=[c.value for c in picard.SignConvention], default="all-negative")
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("verify", help="exact chart and image checks")
    common(p)
    p.add_argument("--props", default="all", help=f"comma-separated subset of {', '.join(PROPS)}, or 'all'")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime-bits", type=int, default=None, choices=(61, 62, 63))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cache", help="inspect or clear the degree cache")
    p.add_argument("action", choices=("inspect", "clear"))
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "prime_bits") and args.prime_bits is None:
            args.prime_bits = _env_prime_bits()
            if args.prime_bits not in (61, 62, 63):
                raise UsageError("MATINV_PRIME_BITS must be 61, 62 or 63")
        text, status = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ProbeFailureError, MatinvError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
