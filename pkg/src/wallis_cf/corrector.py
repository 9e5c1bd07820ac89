"""Multiple-correction derivation of the continued-fraction coefficients.

Writing ``W(n) = gamma(n) * exp(T_k(n)) * exp(u_k(n))`` with ``T_k`` the depth-k
correction term, each new level ``(a, b)`` is chosen so that the expansion of
``u_k(n) - u_k(n+1)`` loses its two leading coefficients.  The unknowns enter
those two coefficients affinely, so they are found by exact interpolation at
trial points; a third trial point checks the affinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .series import (
    LaurentSeries,
    series_cf_term,
    series_log_ratio,
    series_scale,
    series_shift,
    series_stirling_factor,
)

DEFAULT_MAX_DEPTH = 6

# Reference constants, used only to cross-check derived values.
REFERENCE_PAIRS = (
    (Fraction(1, 144), Fraction(1, 60)),
    (Fraction(781, 3600), Fraction(-4309, 109340)),
    (Fraction(51396085, 89664267), Fraction(25682346121, 449571834712)),
)


class CorrectionError(ArithmeticError):
    """A correction level cannot cancel the target coefficient."""


@dataclass(frozen=True)
class CFCoefficients:
    """Ordered ``(a_k, b_k)`` levels of the correction continued fraction."""

    pairs: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        pairs = tuple((Fraction(a), Fraction(b)) for a, b in self.pairs)
        if any(a == 0 for a, _ in pairs):
            raise ValueError("continued fraction numerators must be nonzero")
        object.__setattr__(self, "pairs", pairs)

    @property
    def depth(self) -> int:
        return len(self.pairs)

    def prefix(self, depth: int) -> "CFCoefficients":
        return CFCoefficients(self.pairs[:depth])

    def extended(self, a, b) -> "CFCoefficients":
        return CFCoefficients(self.pairs + ((a, b),))


@dataclass(frozen=True)
class DifferenceExpansion:
    """Expansion of ``u_k(n) - u_k(n+1)`` for a correction of depth ``k``."""

    series: LaurentSeries
    depth: int
    cf: CFCoefficients = field(default_factory=CFCoefficients)

    def leading_exponent(self) -> int | None:
        """The first exponent ``-s`` with a nonzero coefficient, as ``s``."""
        v = self.series.valuation()
        return None if v is None else -v


def default_order(depth: int) -> int:
    return 2 * depth + 8


@lru_cache(maxsize=None)
def base_difference(order: int) -> DifferenceExpansion:
    """``u_0(n) - u_0(n+1)`` expanded in ``1/n``.

    ln((2n+2)/(2n+1)) - S(1/3) + S(4/3) - 1/2 ln((n+1)/n), where
    S(c) = (n+c) ln(1 - 1/(2(n+c))).
    """
    if order < 5:
        raise ValueError("order must be >= 5")
    s = (
        series_log_ratio(1, Fraction(1, 2), order)
        - series_stirling_factor(Fraction(1, 3), order)
        + series_stirling_factor(Fraction(4, 3), order)
        - series_scale(Fraction(1, 2), series_log_ratio(1, 0, order))
    )
    return DifferenceExpansion(s, 0)


def cf_difference(cf: CFCoefficients, order: int) -> DifferenceExpansion:
    if cf.depth == 0:
        return base_difference(order)
    if order < 2 * cf.depth + 5:
        raise ValueError(f"order must be >= {2 * cf.depth + 5} for depth {cf.depth}")
    term = series_cf_term(cf.pairs, order)
    s = base_difference(order).series - term + series_shift(term)
    return DifferenceExpansion(s, cf.depth, cf)


def _affine_root(values: list[Fraction]) -> Fraction:
    """Root of the affine map sampled at 0, 1, 2; checks the second difference."""
    c0, c1, c2 = values
    if c2 - 2 * c1 + c0 != 0:
        raise CorrectionError("target coefficient is not affine in the unknown")
    slope = c1 - c0
    if slope == 0:
        raise CorrectionError("correction layer cannot cancel this order (zero slope)")
    return -c0 / slope


def solve_next_pair(prefix: CFCoefficients, order: int | None = None) -> tuple[Fraction, Fraction]:
    """Solve the next ``(a, b)`` level given an already-solved prefix.

    ``a`` cancels the first surviving coefficient (at ``n**-(2k+4)`` for a
    prefix of depth ``k``) with ``b = 0``; then ``b`` cancels the next one.
    """
    depth = prefix.depth
    if order is None:
        order = default_order(depth + 1)
    m = 2 * depth + 4
    if order < m + 1:
        raise ValueError(f"order must be >= {m + 1}")
    current = cf_difference(prefix, order).series
    if any(current.coeff(-e) != 0 for e in range(0, m)):
        raise CorrectionError("prefix is not solved: low-order terms survive")

    def coefficient(a, b, e) -> Fraction:
        # a = 0 switches the new level off
        cf = prefix if a == 0 else prefix.extended(a, b)
        return cf_difference(cf, order).series.coeff(-e)

    a = _affine_root([coefficient(t, 0, m) for t in (0, 1, 2)])
    b = _affine_root([coefficient(a, t, m + 1) for t in (0, 1, 2)])
    solved = cf_difference(prefix.extended(a, b), order).series
    if solved.coeff(-m) != 0 or solved.coeff(-m - 1) != 0:
        raise CorrectionError(f"level {depth + 1} failed to cancel n^-{m} and n^-{m + 1}")
    return a, b


def derive(depth: int, order: int | None = None, max_depth: int = DEFAULT_MAX_DEPTH) -> CFCoefficients:
    """Derive the first ``depth`` levels of the correction continued fraction."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the configured cap {max_depth}")
    return _derive(depth, order if order is not None else default_order(depth))


@lru_cache(maxsize=None)
def _derive(depth: int, order: int) -> CFCoefficients:
    cf = CFCoefficients()
    for _ in range(depth):
        cf = cf.extended(*solve_next_pair(cf, order))
    return cf


def rate_of(depth: int, max_depth: int = DEFAULT_MAX_DEPTH) -> int:
    """Convergence order of ``u_depth``: first surviving difference exponent minus one."""
    return difference_for_depth(depth, max_depth).leading_exponent() - 1


def difference_for_depth(depth: int, max_depth: int = DEFAULT_MAX_DEPTH) -> DifferenceExpansion:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    order = default_order(depth)
    cf = derive(depth, order, max_depth) if depth else CFCoefficients()
    return cf_difference(cf, order)


def limit_of_scaled_remainder(depth: int, max_depth: int = DEFAULT_MAX_DEPTH) -> Fraction:
    """``lim n**rate * u_depth(n) = l/(s - 1)`` for leading difference term ``l n**-s``."""
    d = difference_for_depth(depth, max_depth)
    s = d.leading_exponent()
    return d.series.coeff(-s) / (s - 1)


def reference_discrepancies(cf: CFCoefficients) -> list[str]:
    """Compare derived levels against the reference constants, one message per mismatch."""
    out = []
    for k, (got, ref) in enumerate(zip(cf.pairs, REFERENCE_PAIRS), start=1):
        for name, g, r in (("a", got[0], ref[0]), ("b", got[1], ref[1])):
            if g != r:
                out.append(f"{name}{k}: derived {g} but reference value is {r}")
    return out
