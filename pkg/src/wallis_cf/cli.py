"""Command-line front end.

Exit codes: 0 success / certified, 1 claim failure (table mismatch, violated
inequality, failed sign probe), 2 usage error, 3 indeterminate certificate.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from .approx import PUBLISHED_KINDS, ApproxKind
from .corrector import DEFAULT_MAX_DEPTH, derive, reference_discrepancies
from .numerics import BallValue, DomainError, EvalContext
from .verify import (
    CLAIMS,
    PUBLISHED_N,
    certify,
    compare_entry,
    error_table,
    format_ball,
    rate_probe,
    sign_probe_FG,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INDETERMINATE = 0, 1, 2, 3

DEFAULT_SIGN_GRID = "1.5,2,3,5,10,100,1000,10000"


class UsageError(Exception):
    pass


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def frac_decimal(q: Fraction, digits: int = 30) -> str:
    with decimal.localcontext() as dc:
        dc.prec = digits
        d = decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator)
    return f"{d:.{digits - 1}e}".replace("e-0", "e-").replace("e+0", "e+").replace("e+", "e")


def ball_json(x: BallValue, digits: int) -> dict:
    return {"center": format_ball(x, digits), "radius": format_ball(x.radius_fraction(), 3)}


def render(fmt: str, header: list[str], rows: list[list[str]], meta: dict | None = None,
           payload: dict | None = None) -> str:
    """Render a table as markdown or csv; json uses ``payload`` (falls back to rows)."""
    if fmt == "json":
        doc = payload if payload is not None else {"columns": header, "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    lines = []
    for k, v in (meta or {}).items():
        lines.append(f"**{k}**: {v}  ")
    if lines:
        lines.append("")
        if not rows:
            return "\n".join(lines)
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines.extend("| " + " | ".join(r) + " |" for r in rows)
    return "\n".join(lines) + "\n"


def parse_int_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")
    if not values:
        raise UsageError("empty list")
    return values


def parse_kinds(text: str) -> list[ApproxKind]:
    try:
        return [ApproxKind.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc))


# --- subcommands -------------------------------------------------------------------

def cmd_derive(args, ctx: EvalContext) -> int:
    if not 1 <= args.depth <= args.max_depth:
        raise UsageError(f"--depth must be in [1, {args.max_depth}]")
    cf = derive(args.depth, max_depth=args.max_depth)
    header = ["k", "a", "b", "a_decimal", "b_decimal"]
    rows = [[str(k), frac_str(a), frac_str(b), frac_decimal(a), frac_decimal(b)]
            for k, (a, b) in enumerate(cf.pairs, start=1)]
    mismatches = reference_discrepancies(cf)
    for m in mismatches:
        print(f"WARNING: {m}", file=sys.stderr)
    payload = {
        "depth": cf.depth,
        "pairs": [{"k": int(r[0]), "a": r[1], "b": r[2]} for r in rows],
        "reference_mismatches": mismatches,
    }
    sys.stdout.write(render(args.format, header, rows, {"depth": cf.depth}, payload))
    return EXIT_OK


def cmd_table(args, ctx: EvalContext) -> int:
    paper = args.paper or (args.n is None and args.kinds is None)
    n_values = parse_int_list(args.n) if args.n else list(PUBLISHED_N)
    kinds = parse_kinds(args.kinds) if args.kinds else list(PUBLISHED_KINDS)
    for k in kinds:
        for n in n_values:
            if n < k.min_n:
                raise UsageError(f"{k.label} needs n >= {k.min_n}, got {n}")
    table = error_table(n_values, kinds, ctx)
    header = ["n"] + [f"(W-{k.label})/W" for k in kinds]
    rows, entries, mismatches = [], [], []
    for row in table:
        cells = [str(row.n)]
        for k in kinds:
            m = compare_entry(row.n, k, row.rel_error[k], args.digits)
            cells.append(m.computed)
            entries.append({"n": row.n, "kind": k.label, "value": m.computed,
                            "radius": ball_json(row.rel_error[k], args.digits)["radius"],
                            "published": m.published})
            if paper and not m.ok:
                mismatches.append(f"n={row.n} {k.label}: computed {m.computed}, published {m.published}"
                                  + ("" if m.radius_ok else " (radius too large)"))
        rows.append(cells)
    payload = {"digits": args.digits, "entries": entries}
    if paper:
        payload["matches_published"] = not mismatches
    sys.stdout.write(render(args.format, header, rows, None, payload))
    if paper:
        total = len(entries)
        print(f"{total - len(mismatches)}/{total} entries match the published table", file=sys.stderr)
        for m in mismatches:
            print(f"MISMATCH {m}", file=sys.stderr)
        return EXIT_FAIL if mismatches else EXIT_OK
    return EXIT_OK


def cmd_certify(args, ctx: EvalContext) -> int:
    try:
        cert = certify(args.claim, args.n_from, args.n_to, ctx, probe_below=True)
    except ValueError as exc:
        raise UsageError(str(exc))
    digits = 20
    header = ["n", "reason", "lower", "W(n)", "upper"]
    rows = [[str(w.n), w.reason, format_ball(w.lower, digits), format_ball(w.middle, digits),
             format_ball(w.upper, digits)] for w in cert.witnesses]
    payload = {
        "claim": cert.claim,
        "range": list(cert.range),
        "status": cert.status,
        "precision_used": cert.precision_used,
        "equalities": cert.equalities,
        "notes": cert.notes,
        "witnesses": [
            {"n": w.n, "reason": w.reason, "lower": ball_json(w.lower, digits),
             "middle": ball_json(w.middle, digits), "upper": ball_json(w.upper, digits)}
            for w in cert.witnesses
        ],
    }
    meta = {
        "claim": cert.claim,
        "range": f"{cert.range[0]}..{cert.range[1]}",
        "status": cert.status,
        "precision_used": cert.precision_used,
        "equalities (non-strict bound attained)": ", ".join(map(str, cert.equalities)) or "none",
    }
    for i, note in enumerate(cert.notes, 1):
        meta[f"note {i}"] = note
    if args.format == "csv":
        # status first so CI scripts can read a single line
        sys.stdout.write(render("csv", ["claim", "n_from", "n_to", "status", "precision_used"],
                                [[cert.claim, str(cert.range[0]), str(cert.range[1]), cert.status,
                                  str(cert.precision_used)]]))
        if rows:
            sys.stdout.write(render("csv", header, rows))
    else:
        sys.stdout.write(render(args.format, header, rows, meta, payload))
    return {"certified": EXIT_OK, "violated": EXIT_FAIL}.get(cert.status, EXIT_INDETERMINATE)


def cmd_probe(args, ctx: EvalContext) -> int:
    if not 0 <= args.depth <= args.max_depth:
        raise UsageError(f"depth must be in [0, {args.max_depth}]")
    n_list = parse_int_list(args.n)
    if min(n_list) < 1:
        raise UsageError("n must be >= 1")
    probe = rate_probe(args.depth, n_list, ctx, args.max_depth)
    limit = probe.claimed_limit
    header = ["n", f"n^{probe.rate}*u_{probe.depth}(n)", "claimed_limit"]
    lim_txt = frac_decimal(limit, 12) if limit is not None else ""
    rows = [[str(n), format_ball(v, 12), lim_txt] for n, v in probe.samples]
    payload = {
        "depth": probe.depth,
        "rate": probe.rate,
        "claimed_limit": frac_str(limit) if limit is not None else None,
        "samples": [{"n": n, "value": ball_json(v, 12)} for n, v in probe.samples],
        "indeterminate": probe.indeterminate,
    }
    meta = {"depth": probe.depth, "rate": probe.rate,
            "claimed_limit": f"{frac_str(limit)} = {lim_txt}" if limit is not None else "unknown"}
    sys.stdout.write(render(args.format, header, rows, meta, payload))
    return EXIT_INDETERMINATE if probe.indeterminate else EXIT_OK


def cmd_signs(args, ctx: EvalContext) -> int:
    try:
        xs = [Fraction(t) for t in args.x.split(",") if t.strip()]
        samples = sign_probe_FG(xs, ctx)
    except (ValueError, DomainError) as exc:
        raise UsageError(str(exc))
    header = ["x", "F(x)", "G(x)", "F<0 and G>0"]
    rows = [[str(s.x), format_ball(s.F, 10), format_ball(s.G, 10), "yes" if s.ok else "no"]
            for s in samples]
    payload = {"samples": [{"x": frac_str(s.x), "F": ball_json(s.F, 10), "G": ball_json(s.G, 10),
                            "ok": s.ok} for s in samples]}
    sys.stdout.write(render(args.format, header, rows, None, payload))
    return EXIT_OK if all(s.ok for s in samples) else EXIT_FAIL


# --- entry point -------------------------------------------------------------------

def _default_precision() -> int:
    env = os.environ.get("WALLIS_PRECISION")
    if env is None:
        return 50
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"WALLIS_PRECISION must be an integer, got {env!r}")


def build_parser(default_precision: int = 50) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help=f"working decimal digits (default {default_precision}, env WALLIS_PRECISION)")
    common.add_argument("--format", choices=("markdown", "csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--max-depth", type=int, default=argparse.SUPPRESS,
                        help=f"cap on continued-fraction depth (default {DEFAULT_MAX_DEPTH})")

    p = argparse.ArgumentParser(prog="wallis-cf", parents=[common],
                                description="Continued-fraction approximation of the Wallis ratio.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", parents=[common], help="derive the (a_k, b_k) coefficients")
    d.add_argument("--depth", type=int, default=3)
    d.set_defaults(func=cmd_derive)

    t = sub.add_parser("table", parents=[common], help="relative errors of the approximations")
    t.add_argument("--paper", action="store_true", help="reproduce and check the published table")
    t.add_argument("--n", help="comma-separated n values")
    t.add_argument("--kinds", help="comma-separated kinds: alpha,beta,gamma,chi,sigma,cf<d>,...")
    t.add_argument("--digits", type=int, default=5, help="significant figures")
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("certify", parents=[common], help="certify a double inequality over a range")
    c.add_argument("claim", choices=sorted(CLAIMS))
    c.add_argument("n_from", type=int)
    c.add_argument("n_to", type=int)
    c.set_defaults(func=cmd_certify)

    r = sub.add_parser("probe", parents=[common], help="scaled remainders n^rate * u_depth(n)")
    r.add_argument("depth", type=int)
    r.add_argument("--n", default="100,1000,10000")
    r.set_defaults(func=cmd_probe)

    s = sub.add_parser("signs", parents=[common], help="signs of F(x) and G(x) on a grid")
    s.add_argument("--x", default=DEFAULT_SIGN_GRID, help="comma-separated rationals > 1")
    s.set_defaults(func=cmd_signs)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        default_precision = _default_precision()
        args = build_parser(default_precision).parse_args(argv)
        args.precision = getattr(args, "precision", default_precision)
        args.format = getattr(args, "format", "markdown")
        args.max_depth = getattr(args, "max_depth", DEFAULT_MAX_DEPTH)
        try:
            ctx = EvalContext(args.precision)
        except ValueError as exc:
            raise UsageError(str(exc))
        return args.func(args, ctx)
    except UsageError as exc:
        print(f"wallis-cf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
