"""Truncated Laurent series in ``1/n`` with exact rational coefficients.

A series is known through ``n**(-order)``; everything below is unknown, not
zero.  Every operation keeps only coefficients that the discarded tails
cannot touch, so comparing two series coefficient-by-coefficient is a sound
test.

    >>> s = series_inv_linear(Fraction(1, 3), 3)
    >>> [str(s.coeff(-k)) for k in (1, 2, 3)]
    ['1', '-1/3', '1/9']
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class SeriesError(ArithmeticError):
    """Structural failure, e.g. inverting a series with no invertible leading term."""


def _binom(top: int, k: int) -> int:
    """Generalized binomial coefficient C(top, k) for any integer ``top``."""
    if top >= 0:
        return comb(top, k)
    # C(-m, k) = (-1)^k C(m + k - 1, k)
    return (-1) ** k * comb(-top + k - 1, k)


@dataclass(frozen=True)
class LaurentSeries:
    """``sum(coeffs[i] * n**(top - i))``, known through ``n**(-order)``.

    ``top`` is the highest power of ``n`` stored (``>= 0``); ``coeffs`` runs
    from ``n**top`` down to ``n**(-order)``.
    """

    top: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.top < 0:
            raise ValueError("top exponent must be >= 0")
        if len(self.coeffs) < self.top + 2:
            raise ValueError("a series must retain at least the n**-1 coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - self.top - 1

    @classmethod
    def from_terms(cls, terms: dict[int, Scalar], order: int) -> "LaurentSeries":
        """Build from ``{exponent: coefficient}``; exponents below ``-order`` are dropped."""
        top = max([0] + [e for e, c in terms.items() if c != 0])
        coeffs = [Fraction(terms.get(e, 0)) for e in range(top, -order - 1, -1)]
        return cls(top, tuple(coeffs))

    @classmethod
    def zero(cls, order: int) -> "LaurentSeries":
        return cls(0, (Fraction(0),) * (order + 1))

    @classmethod
    def constant(cls, c: Scalar, order: int) -> "LaurentSeries":
        return cls.from_terms({0: c}, order)

    @classmethod
    def monomial(cls, exponent: int, order: int, c: Scalar = 1) -> "LaurentSeries":
        return cls.from_terms({exponent: c}, order)

    def coeff(self, exponent: int) -> Fraction:
        """Coefficient of ``n**exponent``; raises if it is below the truncation."""
        if exponent < -self.order:
            raise IndexError(f"n^{exponent} lies below the truncation n^{-self.order}")
        if exponent > self.top:
            return Fraction(0)
        return self.coeffs[self.top - exponent]

    def terms(self) -> dict[int, Fraction]:
        return {self.top - i: c for i, c in enumerate(self.coeffs) if c != 0}

    def valuation(self) -> int | None:
        """Highest exponent with a nonzero coefficient (``None`` for zero)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return self.top - i
        return None

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series known to order {self.order} to {order}")
        return LaurentSeries(self.top, self.coeffs[: self.top + order + 1])

    def _with_top(self, top: int) -> tuple[Fraction, ...]:
        return (Fraction(0),) * (top - self.top) + self.coeffs

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_add(self, other)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_sub(self, other)

    def __neg__(self) -> "LaurentSeries":
        return series_scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return series_scale(other, self)
        return NotImplemented

    __rmul__ = __mul__

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Coefficient-wise equality over the common retained range."""
        low = min(self.order, other.order)
        top = max(self.top, other.top)
        return all(self.coeff(e) == other.coeff(e) for e in range(top, -low - 1, -1))

    def evaluate(self, n):
        """Evaluate the retained terms at ``n`` (any numeric type supporting ``**``)."""
        total = 0
        for e, c in self.terms().items():
            total = total + c * n ** e if e >= 0 else total + c / n ** (-e)
        return total

    def __str__(self):
        parts = [f"({c})*n^{e}" for e, c in self.terms().items()]
        return " + ".join(parts or ["0"]) + f" + O(n^{-self.order - 1})"


def _combine(a: LaurentSeries, b: LaurentSeries, sign: int) -> LaurentSeries:
    order = min(a.order, b.order)
    top = max(a.top, b.top)
    ca, cb = a._with_top(top), b._with_top(top)
    n = top + order + 1
    return LaurentSeries(top, tuple(x + sign * y for x, y in zip(ca[:n], cb[:n])))


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return _combine(a, b, 1)


def series_sub(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return _combine(a, b, -1)


def series_scale(c: Scalar, a: LaurentSeries) -> LaurentSeries:
    c = Fraction(c)
    return LaurentSeries(a.top, tuple(c * x for x in a.coeffs))


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Truncated Cauchy product.

    With ``a = A + O(n**(-oa-1))`` and leading exponent ``va`` of ``A`` (likewise
    for ``b``) the product is exact through ``n**-min(oa - vb, ob - va)``.
    """
    va, vb = a.valuation(), b.valuation()
    limits = []
    if vb is not None:
        limits.append(a.order - vb)
    if va is not None:
        limits.append(b.order - va)
    if not limits:
        return LaurentSeries.zero(min(a.order, b.order))
    order = min(limits)
    if order < 1:
        raise SeriesError("product would retain no negative powers")
    prod: dict[int, Fraction] = {}
    ta, tb = a.terms(), b.terms()
    for ea, ca in ta.items():
        for eb, cb in tb.items():
            e = ea + eb
            if e >= -order:
                prod[e] = prod.get(e, Fraction(0)) + ca * cb
    return LaurentSeries.from_terms(prod, order)


def series_inverse(s: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse of a series with a nonzero leading coefficient.

    Requires the leading exponent ``v`` to satisfy ``v >= 0`` so the inverse
    has no positive powers beyond ``n**0``.
    """
    v = s.valuation()
    if v is None:
        raise SeriesError("cannot invert the zero series")
    if v < 0:
        raise SeriesError("inverse would have positive powers of n beyond the stored top")
    # s = n**v * sum_i s_i n**-i ; 1/s = n**-v * sum_i r_i n**-i
    depth = v + s.order  # s_i known for i <= depth
    sc = [s.coeff(v - i) for i in range(depth + 1)]
    r = [Fraction(1) / sc[0]]
    for i in range(1, depth + 1):
        acc = sum((sc[j] * r[i - j] for j in range(1, i + 1)), Fraction(0))
        r.append(-acc / sc[0])
    return LaurentSeries.from_terms({-v - i: c for i, c in enumerate(r)}, v + depth)


def series_inv_linear(c: Scalar, order: int) -> LaurentSeries:
    """``1/(n + c) = sum_{k>=1} (-c)**(k-1) n**-k``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    c = Fraction(c)
    return LaurentSeries.from_terms({-k: (-c) ** (k - 1) for k in range(1, order + 1)}, order)


def series_log_ratio(p: Scalar, q: Scalar, order: int) -> LaurentSeries:
    """``ln((n + p)/(n + q)) = sum_{k>=1} ((-q)**k - (-p)**k)/k * n**-k``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    p, q = Fraction(p), Fraction(q)
    return LaurentSeries.from_terms(
        {-k: ((-q) ** k - (-p) ** k) / k for k in range(1, order + 1)}, order
    )


def series_stirling_factor(c: Scalar, order: int) -> LaurentSeries:
    """Expansion of ``(n + c) * ln(1 - 1/(2(n + c)))``.

    With ``m = n + c`` this is ``-1/2 - sum_{j>=2} m**(1-j) / (j 2**j)``, and
    each ``m**-i`` expands binomially in ``1/n``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    c = Fraction(c)
    terms: dict[int, Fraction] = {0: Fraction(-1, 2)}
    for j in range(2, order + 2):
        i = j - 1
        w = Fraction(-1, j * 2**j)
        for t in range(0, order - i + 1):
            e = -i - t
            terms[e] = terms.get(e, Fraction(0)) + w * _binom(-i, t) * c**t
    return LaurentSeries.from_terms(terms, order)


def series_shift(a: LaurentSeries) -> LaurentSeries:
    """Substitute ``n -> n + 1`` and re-expand in ``1/n``."""
    order = a.order
    out: dict[int, Fraction] = {}
    for e, c in a.terms().items():
        if e >= 0:
            for t in range(e + 1 + order):
                if e - t < -order:
                    break
                out[e - t] = out.get(e - t, Fraction(0)) + c * _binom(e, t)
        else:
            for t in range(order + e + 1):
                out[e - t] = out.get(e - t, Fraction(0)) + c * _binom(e, t)
    return LaurentSeries.from_terms(out, order)


def linear_poly(c: Scalar, order: int) -> LaurentSeries:
    """The exact polynomial ``n + c``."""
    return LaurentSeries.from_terms({1: 1, 0: c}, order)


def series_cf_term(pairs: Sequence[tuple[Scalar, Scalar]], order: int) -> LaurentSeries:
    """Expand ``n**-2 * a1/(n + b1 + a2/(n + b2 + ... + a_d/(n + b_d)))``.

    Built from the innermost level outward; the result begins ``a1 n**-3``.
    """
    pairs = list(getattr(pairs, "pairs", pairs))
    if not pairs:
        raise SeriesError("continued fraction needs at least one level")
    if any(Fraction(a) == 0 for a, _ in pairs):
        raise SeriesError("continued fraction numerators must be nonzero")
    work = order  # 1/(n + ...) is known two orders deeper than its denominator
    a, b = pairs[-1]
    tail = series_scale(a, series_inv_linear(b, work))
    for a, b in reversed(pairs[:-1]):
        denom = series_add(linear_poly(b, work), tail)
        tail = series_scale(a, series_inverse(denom).truncate(work))
    # multiply by n**-2: coefficients move down two places
    out = {e - 2: c for e, c in tail.terms().items()}
    return LaurentSeries.from_terms(out, order)


def cf_value(pairs: Iterable[tuple[Scalar, Scalar]], n: Scalar) -> Fraction:
    """Exact value of the correction term at a rational point ``n``."""
    pairs = list(getattr(pairs, "pairs", pairs))
    n = Fraction(n)
    tail = Fraction(0)
    for a, b in reversed(pairs):
        tail = Fraction(a) / (n + Fraction(b) + tail)
    return tail / (n * n)
