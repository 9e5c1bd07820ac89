"""Table reproduction, inequality certification and convergence probes."""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import numerics as nm
from .approx import (
    BOUND_PAIRS,
    PUBLISHED_KINDS,
    ApproxKind,
    approx_eval,
    bound_pair,
    cf_coefficients,
    cf_eval,
    gamma_eval,
)
from .corrector import DEFAULT_MAX_DEPTH, limit_of_scaled_remainder, rate_of
from .numerics import DEFAULT_CONTEXT, BallValue, DomainError, EvalContext
from .series import cf_value

MAX_DOUBLINGS = 4

PUBLISHED_N = (50, 500, 1000, 2000)
# Published relative errors (W - approx)/W, columns alpha, beta, gamma, sigma.
PUBLISHED_TABLE = {
    50: ("-6.1876e-6", "7.3576e-14", "5.5532e-8", "-3.8082e-19"),
    500: ("-6.2438e-8", "7.1643e-20", "5.5554e-11", "-3.8138e-28"),
    1000: ("-1.5617e-8", "1.1177e-21", "6.9443e-12", "-7.4489e-31"),
    2000: ("-3.9053e-9", "1.7452e-23", "8.6805e-13", "-1.4549e-33"),
}

# (lower strict?, upper strict?) and the smallest n each claim is stated for
CLAIMS = {
    "theorem2": ((True, True), 2),
    "chen_qi": ((False, False), 1),
    "guo": ((True, False), 2),
}


def escalating(ctx: EvalContext, doublings: int = MAX_DOUBLINGS) -> Iterable[EvalContext]:
    yield ctx
    for _ in range(doublings):
        ctx = ctx.doubled()
        yield ctx


def round_sig(x: BallValue | Fraction, digits: int = 5) -> decimal.Decimal:
    """Round the (exact) center to ``digits`` significant decimal figures."""
    q = x.center_fraction() if isinstance(x, BallValue) else Fraction(x)
    with decimal.localcontext() as dc:
        dc.prec = digits
        dc.rounding = decimal.ROUND_HALF_EVEN
        return decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator)


def half_ulp(d: decimal.Decimal) -> Fraction:
    """Half a unit in the last place of a rounded decimal."""
    exp = d.as_tuple().exponent
    return Fraction(1, 2) * Fraction(10) ** exp


def format_ball(x: BallValue | Fraction, digits: int = 5) -> str:
    """Scientific notation with lowercase ``e`` and ``digits`` significant figures."""
    d = round_sig(x, digits)
    if d == 0:
        return "0"
    return f"{d:.{digits - 1}e}".replace("e-0", "e-").replace("e+0", "e+").replace("e+", "e")


# --- relative errors and the published table -------------------------------------------------

def relative_error(kind: ApproxKind | str, n: int, ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    """``(W(n) - approx(n)) / W(n)`` with ``W(n)`` taken exactly."""
    kind = ApproxKind.parse(kind) if isinstance(kind, str) else kind
    approx = approx_eval(kind, n, ctx)
    w = nm.wallis_exact(n)
    with nm.working_precision(ctx):
        # (W - A)/W = 1 - A/W with W exact
        return 1 - approx / nm.rational_to_ball(w, ctx)


def _well_resolved(x: BallValue, factor: int = 100) -> bool:
    return x.radius * factor < abs(x.center)


def resolved_relative_error(kind: ApproxKind, n: int, ctx: EvalContext) -> tuple[BallValue, EvalContext]:
    """Relative error, recomputed at higher precision until radius < |center|/100."""
    for c in escalating(ctx):
        r = relative_error(kind, n, c)
        if _well_resolved(r):
            return r, c
    return r, c


@dataclass(frozen=True)
class TableRow:
    n: int
    rel_error: dict[ApproxKind, BallValue]
    precision_used: int


@dataclass(frozen=True)
class TableMatch:
    n: int
    kind: ApproxKind
    computed: str
    published: str | None
    radius_ok: bool

    @property
    def ok(self) -> bool:
        return (self.published is not None and self.radius_ok
                and decimal.Decimal(self.computed) == decimal.Decimal(self.published))


def error_table(n_values: Sequence[int], kinds: Sequence[ApproxKind],
                ctx: EvalContext = DEFAULT_CONTEXT) -> list[TableRow]:
    rows = []
    for n in n_values:
        entries, used = {}, ctx.precision_digits
        for k in kinds:
            r, c = resolved_relative_error(k, n, ctx)
            entries[k] = r
            used = max(used, c.precision_digits)
        rows.append(TableRow(n, entries, used))
    return rows


def reproduce_published_table(ctx: EvalContext = DEFAULT_CONTEXT) -> list[TableRow]:
    return error_table(PUBLISHED_N, PUBLISHED_KINDS, ctx)


def compare_entry(n: int, kind: ApproxKind, value: BallValue, digits: int = 5) -> TableMatch:
    published = None
    if n in PUBLISHED_TABLE and kind in PUBLISHED_KINDS:
        published = PUBLISHED_TABLE[n][PUBLISHED_KINDS.index(kind)]
    rounded = round_sig(value, digits)
    radius_ok = value.radius_fraction() < half_ulp(rounded)
    return TableMatch(n, kind, format_ball(value, digits), published, radius_ok)


def compare_with_published(rows: Sequence[TableRow]) -> list[TableMatch]:
    return [compare_entry(r.n, k, v) for r in rows for k, v in r.rel_error.items()]


# --- certification ----------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    n: int
    lower: BallValue
    middle: BallValue
    upper: BallValue
    reason: str


@dataclass
class Certificate:
    claim: str
    range: tuple[int, int]
    status: str = "certified"  # certified | violated | indeterminate
    witnesses: list[Witness] = field(default_factory=list)
    precision_used: int = 0
    equalities: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def _side(lo: BallValue, hi: BallValue, strict: bool) -> tuple[str, bool]:
    """Decide ``lo < hi`` (or ``<=``): returns ('ok'|'violated'|'unknown', equality?)."""
    if lo.certainly_lt(hi):
        return "ok", False
    if not strict and lo.certainly_le(hi):
        # only possible when both sides are the same exact point
        return "ok", True
    if hi.certainly_lt(lo) or (strict and hi.certainly_le(lo)):
        return "violated", False
    return "unknown", False


def _check_point(claim: str, n: int, w: Fraction, ctx: EvalContext):
    (strict_lo, strict_hi), _ = CLAIMS[claim]
    lower, upper = _bounds(claim, n, ctx)
    mid = nm.rational_to_ball(w, ctx)
    s1, e1 = _side(lower, mid, strict_lo)
    s2, e2 = _side(mid, upper, strict_hi)
    return (lower, mid, upper), (s1, s2), e1 or e2


def _bounds(claim: str, n: int, ctx: EvalContext) -> tuple[BallValue, BallValue]:
    if claim == "theorem2" and n == 1:
        # probed only; the claim itself starts at n = 2
        base = gamma_eval(1, ctx)
        return cf_eval(1, 2, ctx, base), cf_eval(1, 3, ctx, base)
    return bound_pair(n, claim, ctx)


def certify(claim: str, n_from: int, n_to: int, ctx: EvalContext = DEFAULT_CONTEXT,
            probe_below: bool = False) -> Certificate:
    """Certify ``lower(n) < W(n) < upper(n)`` (or ``<=`` per claim) for every n in range.

    Each overlap is retried with the precision doubled, up to four times.
    With ``probe_below`` and a claim starting at n = 2, n = 1 is also evaluated
    and reported in ``notes`` without affecting the status.
    """
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {sorted(CLAIMS)}")
    _, n_min = CLAIMS[claim]
    if n_from < n_min or n_from > n_to:
        raise ValueError(f"invalid range [{n_from}, {n_to}] for {claim} (needs {n_min} <= from <= to)")
    cert = Certificate(claim, (n_from, n_to), precision_used=ctx.precision_digits)
    for n, w in nm.wallis_sequence(n_from, n_to):
        for c in escalating(ctx):
            balls, (s1, s2), eq = _check_point(claim, n, w, c)
            cert.precision_used = max(cert.precision_used, c.precision_digits)
            if "unknown" not in (s1, s2):
                break
        if eq:
            cert.equalities.append(n)
        if "violated" in (s1, s2):
            cert.witnesses.append(Witness(n, *balls, reason="violated"))
            cert.status = "violated"
        elif "unknown" in (s1, s2):
            cert.witnesses.append(Witness(n, *balls, reason="overlap"))
            if cert.status == "certified":
                cert.status = "indeterminate"
    if probe_below and claim in ("theorem2", "guo") and n_from == 2:
        cert.notes.append(_probe_n1(claim, ctx))
    return cert


def _probe_n1(claim: str, ctx: EvalContext) -> str:
    if claim == "guo":
        return "n = 1: bounds vanish (factor sqrt(n - 1)); not evaluated"
    _, (s1, s2), _ = _check_point(claim, 1, nm.wallis_exact(1), ctx)
    held = s1 == "ok" and s2 == "ok"
    return f"n = 1 (outside the stated range): inequality {'holds' if held else 'does not hold'} ({s1}, {s2})"


# --- convergence probes -------------------------------------------------------------

def ln_gamma_formula(x: Fraction, ctx: EvalContext) -> BallValue:
    """ln of sqrt(e/pi) (1 - 1/(2(x+1/3)))^(x+1/3) / sqrt(x)."""
    m = x + Fraction(1, 3)
    with nm.working_precision(ctx):
        return (Fraction(1, 2) - nm.ln(nm.pi_ball(ctx), ctx) / 2
                + m * nm.ln(1 - 1 / (2 * m), ctx) - nm.ln(x, ctx) / 2)


def remainder(depth: int, n: int, ctx: EvalContext, max_depth: int = DEFAULT_MAX_DEPTH) -> BallValue:
    """``u_depth(n) = ln W(n) - ln gamma(n) - T_depth(n)``."""
    t = cf_value(cf_coefficients(depth, max_depth).pairs, n) if depth else Fraction(0)
    with nm.working_precision(ctx):
        return nm.ln(nm.wallis_exact(n), ctx) - ln_gamma_formula(Fraction(n), ctx) - t


@dataclass
class RateProbe:
    depth: int
    rate: int
    samples: list[tuple[int, BallValue]]
    claimed_limit: Fraction | None
    indeterminate: list[int] = field(default_factory=list)


def rate_probe(depth: int, n_list: Sequence[int], ctx: EvalContext = DEFAULT_CONTEXT,
               max_depth: int = DEFAULT_MAX_DEPTH) -> RateProbe:
    """Samples of ``n**rate * u_depth(n)``; the limit is l/(s-1) from the difference expansion."""
    if depth < 0 or depth > max_depth:
        raise ValueError(f"depth must be in [0, {max_depth}]")
    rate = rate_of(depth, max_depth)
    probe = RateProbe(depth, rate, [], limit_of_scaled_remainder(depth, max_depth))
    for n in n_list:
        if n < 1:
            raise DomainError("n must be >= 1")
        for c in escalating(ctx):
            u = remainder(depth, n, c, max_depth)
            if _well_resolved(u):
                break
        else:
            probe.indeterminate.append(n)
        with nm.working_precision(c):
            probe.samples.append((n, u * n**rate))
    return probe


@dataclass(frozen=True)
class SignSample:
    x: Fraction
    F: BallValue
    G: BallValue

    @property
    def ok(self) -> bool:
        return self.F.is_negative() and self.G.is_positive()


def _as_fraction(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def step_difference(depth: int, x: Fraction, ctx: EvalContext) -> BallValue:
    """h(x+1) - h(x) for h = ln W - ln gamma - T_depth, with the ln W step taken from
    W(x+1)/W(x) = (2x+1)/(2x+2), so x need not be an integer."""
    pairs = cf_coefficients(depth).pairs
    m0, m1 = x + Fraction(1, 3), x + Fraction(4, 3)
    t = cf_value(pairs, x + 1) - cf_value(pairs, x)
    with nm.working_precision(ctx):
        s_step = m1 * nm.ln(1 - 1 / (2 * m1), ctx) - m0 * nm.ln(1 - 1 / (2 * m0), ctx)
        return (nm.ln((2 * x + 1) / (2 * x + 2), ctx) - s_step
                + nm.ln((x + 1) / x, ctx) / 2 - t)


def sign_probe_FG(x_list: Iterable, ctx: EvalContext = DEFAULT_CONTEXT) -> list[SignSample]:
    """F(x) = f(x+1) - f(x) and G(x) = g(x+1) - g(x) for the gaps f (depth 2), g (depth 3)."""
    out = []
    for raw in x_list:
        x = _as_fraction(raw)
        if x <= 1:
            raise DomainError(f"sign probe needs x > 1, got {raw}")
        for c in escalating(ctx):
            F, G = step_difference(2, x, c), step_difference(3, x, c)
            s = SignSample(x, F, G)
            if s.ok:
                break
        out.append(s)
    return out


def gap_sequence(depth: int, n_from: int, n_to: int, ctx: EvalContext = DEFAULT_CONTEXT) -> list[tuple[int, BallValue]]:
    """f(n) (depth 2) or g(n) (depth 3): ln W(n) minus ln of the cf formula."""
    return [(n, remainder(depth, n, ctx)) for n in range(n_from, n_to + 1)]


def monotone_direction(seq: Sequence[tuple[int, BallValue]]) -> str:
    """'increasing', 'decreasing' (both certified strictly) or 'undetermined'."""
    vals = [v for _, v in seq]
    if all(a.certainly_lt(b) for a, b in zip(vals, vals[1:])):
        return "increasing"
    if all(b.certainly_lt(a) for a, b in zip(vals, vals[1:])):
        return "decreasing"
    return "undetermined"
