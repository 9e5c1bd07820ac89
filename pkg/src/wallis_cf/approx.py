"""Ball evaluators for the Wallis ratio approximations and classical bounds.

Kinds
-----
alpha       1/sqrt(pi (n + 1/4))
beta        sqrt(e/pi) (1 - 1/(2n))^n n^-1/2 exp(1/(24n^2) + 1/(48n^3) + 1/(160n^4) + 1/(960n^5))
gamma       sqrt(e/pi) (1 - 1/(2(n+1/3)))^(n+1/3) n^-1/2
chi         sqrt(e/pi) (1 - 1/(2n))^n sqrt(n-1)/n
cf<d>       gamma(n) * exp(correction term of depth d); ``sigma`` is cf3
chen_qi_lower, chen_qi_upper   1/sqrt(pi (n + 4/pi - 1)), 1/sqrt(pi (n + 1/4))
guo_lower, guo_upper           chi(n) and (4/3) (1 - 1/(2n))^n sqrt(n-1)/n
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import numerics as nm
from .corrector import DEFAULT_MAX_DEPTH, CFCoefficients, derive
from .numerics import DEFAULT_CONTEXT, BallValue, DomainError, EvalContext
from .series import cf_value

_SIMPLE = (
    "alpha", "beta", "gamma", "chi",
    "chen_qi_lower", "chen_qi_upper", "guo_lower", "guo_upper",
)
_MIN_N = {"chi": 2, "guo_lower": 2, "guo_upper": 2}


@dataclass(frozen=True)
class ApproxKind:
    name: str
    depth: int | None = None

    def __post_init__(self):
        if self.name == "cf":
            if self.depth is None or self.depth < 1:
                raise ValueError("cf kinds need a depth >= 1")
        elif self.name not in _SIMPLE:
            raise ValueError(f"unknown approximation kind {self.name!r}")
        elif self.depth is not None:
            raise ValueError(f"{self.name} takes no depth")

    @classmethod
    def parse(cls, text: str) -> "ApproxKind":
        """Parse ``alpha``, ``sigma``, ``cf3``, ``cf(2)`` and friends."""
        t = text.strip().lower()
        if t == "sigma":
            return cls("cf", 3)
        if t.startswith("cf"):
            digits = t[2:].strip("()")
            if not digits.isdigit():
                raise ValueError(f"bad cf kind {text!r}")
            return cls("cf", int(digits))
        return cls(t)

    @property
    def label(self) -> str:
        if self.name == "cf":
            return "sigma" if self.depth == 3 else f"cf{self.depth}"
        return self.name

    @property
    def min_n(self) -> int:
        return _MIN_N.get(self.name, 1)

    def __str__(self):
        return self.label


ALPHA, BETA, GAMMA, CHI = (ApproxKind(k) for k in ("alpha", "beta", "gamma", "chi"))
SIGMA = ApproxKind("cf", 3)
PUBLISHED_KINDS = (ALPHA, BETA, GAMMA, SIGMA)


def _check_n(kind: ApproxKind, n: int) -> None:
    if not isinstance(n, int) or n < kind.min_n:
        raise DomainError(f"{kind.label} is defined for integers n >= {kind.min_n}, got {n!r}")


def sqrt_e_over_pi(ctx: EvalContext) -> BallValue:
    with nm.working_precision(ctx):
        return nm.sqrt(nm.e_ball(ctx) / nm.pi_ball(ctx), ctx)


def shifted_power(n: int, c: Fraction, ctx: EvalContext) -> BallValue:
    """``(1 - 1/(2(n+c)))**(n+c)``.

    For ``c = 0`` the power is a rational computed exactly; otherwise it goes
    through exp((n+c) ln(1 - 1/(2(n+c)))).
    """
    if c == 0:
        return nm.rational_to_ball(Fraction(2 * n - 1, 2 * n) ** n, ctx)
    m = n + Fraction(c)
    with nm.working_precision(ctx):
        return nm.exp(m * nm.ln(1 - 1 / (2 * m), ctx), ctx)


def _sqrt_int(k: int, ctx: EvalContext) -> BallValue:
    r = math.isqrt(k)
    if r * r == k:
        return nm.rational_to_ball(r, ctx)
    return nm.sqrt(k, ctx)


def gamma_eval(n: int, ctx: EvalContext) -> BallValue:
    with nm.working_precision(ctx):
        return sqrt_e_over_pi(ctx) * shifted_power(n, Fraction(1, 3), ctx) / _sqrt_int(n, ctx)


_cf_cache: dict[int, CFCoefficients] = {}


def cf_coefficients(depth: int, max_depth: int = DEFAULT_MAX_DEPTH) -> CFCoefficients:
    """Derived (never typed-in) coefficients for a cf kind."""
    if depth not in _cf_cache:
        _cf_cache[depth] = derive(depth, max_depth=max(max_depth, depth))
    return _cf_cache[depth]


def cf_eval(n, depth: int, ctx: EvalContext, base: BallValue | None = None) -> BallValue:
    """gamma(n) * exp(T_depth(n)); ``base`` may carry a precomputed gamma(n)."""
    if base is None:
        base = gamma_eval(n, ctx)
    t = cf_value(cf_coefficients(depth).pairs, n)
    with nm.working_precision(ctx):
        return base * nm.exp(t, ctx)


def approx_eval(kind: ApproxKind | str, n: int, ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    kind = ApproxKind.parse(kind) if isinstance(kind, str) else kind
    _check_n(kind, n)
    name = kind.name
    with nm.working_precision(ctx):
        if name == "cf":
            return cf_eval(n, kind.depth, ctx)
        if name == "gamma":
            return gamma_eval(n, ctx)
        if name in ("alpha", "chen_qi_upper"):
            return 1 / nm.sqrt(nm.pi_ball(ctx) * (n + Fraction(1, 4)), ctx)
        if name == "chen_qi_lower":
            # pi (n + 4/pi - 1) = pi (n - 1) + 4, exact at n = 1
            return 1 / nm.sqrt(nm.pi_ball(ctx) * (n - 1) + 4, ctx)
        if name == "beta":
            poly = (Fraction(1, 24 * n**2) + Fraction(1, 48 * n**3)
                    + Fraction(1, 160 * n**4) + Fraction(1, 960 * n**5))
            return (sqrt_e_over_pi(ctx) * shifted_power(n, Fraction(0), ctx)
                    / _sqrt_int(n, ctx) * nm.exp(poly, ctx))
        # chi and the Guo bounds share (1 - 1/(2n))^n sqrt(n-1)/n
        core = shifted_power(n, Fraction(0), ctx) * _sqrt_int(n - 1, ctx) / n
        if name in ("chi", "guo_lower"):
            return sqrt_e_over_pi(ctx) * core
        if name == "guo_upper":
            return core * 4 / 3
    raise AssertionError(name)


BOUND_PAIRS = {
    "chen_qi": (ApproxKind("chen_qi_lower"), ApproxKind("chen_qi_upper")),
    "guo": (ApproxKind("guo_lower"), ApproxKind("guo_upper")),
    "theorem2": (ApproxKind("cf", 2), ApproxKind("cf", 3)),
}


def bound_pair(n: int, pair: str, ctx: EvalContext = DEFAULT_CONTEXT) -> tuple[BallValue, BallValue]:
    """(lower, upper) balls for a named double inequality at ``n``."""
    if pair not in BOUND_PAIRS:
        raise ValueError(f"unknown bound pair {pair!r}")
    if pair == "theorem2":
        if n < 2:
            raise DomainError("theorem2 bounds are stated for n >= 2")
        base = gamma_eval(n, ctx)
        return cf_eval(n, 2, ctx, base), cf_eval(n, 3, ctx, base)
    lo, hi = BOUND_PAIRS[pair]
    return approx_eval(lo, n, ctx), approx_eval(hi, n, ctx)
