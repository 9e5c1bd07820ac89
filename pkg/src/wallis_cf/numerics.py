"""Exact rationals, exact Wallis ratios and ball arithmetic.

Balls are midpoint-radius enclosures.  Internally each ball is carried as an
outward-rounded ``mpmath.iv`` interval, so every arithmetic step and every
elementary function returns an enclosure of the exact result.  ``center`` and
``radius`` are derived views: the radius is rounded upward, so
``[center - radius, center + radius]`` always contains the interval.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from mpmath import iv, mp, mpf
from mpmath.libmp import (finf, fnan, fninf, from_man_exp, fzero, mpf_gt, mpf_le,
                          mpf_lt, round_ceiling, to_str)

Rational = Fraction

Number = Union[int, Fraction, "BallValue"]


class DomainError(ValueError):
    """Argument outside the domain of a function (or formula)."""


@dataclass(frozen=True)
class EvalContext:
    """Decimal precision settings for ball evaluation."""

    precision_digits: int = 50
    guard_digits: int = 10

    def __post_init__(self):
        if self.precision_digits < 10:
            raise ValueError("precision_digits must be >= 10")
        if self.guard_digits < 5:
            raise ValueError("guard_digits must be >= 5")

    @property
    def working_digits(self) -> int:
        return self.precision_digits + self.guard_digits

    def doubled(self) -> "EvalContext":
        return EvalContext(2 * self.precision_digits, self.guard_digits)


DEFAULT_CONTEXT = EvalContext()


@contextmanager
def working_precision(ctx: EvalContext) -> Iterator[None]:
    """Run interval operations at ``ctx.working_digits`` decimal digits.

    Precision is only ever raised here, never lowered, so nested calls keep
    the finer setting.  The mpmath interval context is process-global.
    """
    saved = iv.prec
    iv.dps = max(ctx.working_digits, iv.dps)
    try:
        yield
    finally:
        iv.prec = saved


def _to_interval(x):
    if isinstance(x, BallValue):
        return x.interval
    if isinstance(x, int):
        return iv.mpf(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a ball")


def _straddles_zero(x) -> bool:
    a, b = x._mpi_
    return mpf_le(a, fzero) and mpf_le(fzero, b)


class BallValue:
    """Enclosure ``[center - radius, center + radius]`` of an exact real.

    Operators round outward at the ambient interval precision; wrap them in
    ``working_precision(ctx)`` to get ``ctx``-level radii.
    """

    __slots__ = ("interval",)

    def __init__(self, interval):
        object.__setattr__(self, "interval", interval)

    def __setattr__(self, name, value):
        raise AttributeError("BallValue is immutable")

    @classmethod
    def exact(cls, x: Union[int, Fraction]) -> "BallValue":
        return cls(_to_interval(x))

    @classmethod
    def from_center_radius(cls, center: Union[int, Fraction], radius: Union[int, Fraction]) -> "BallValue":
        if radius < 0:
            raise ValueError("radius must be non-negative")
        c, r = _to_interval(Fraction(center)), _to_interval(Fraction(radius))
        lo, hi = (c - r)._mpi_[0], (c + r)._mpi_[1]
        return cls(iv.mpf((mp.make_mpf(lo), mp.make_mpf(hi))))

    @property
    def lower(self) -> mpf:
        return mp.make_mpf(self.interval._mpi_[0])

    @property
    def upper(self) -> mpf:
        return mp.make_mpf(self.interval._mpi_[1])

    @property
    def center(self) -> mpf:
        # the midpoint of two binary floats is itself an exact binary float
        return _fraction_to_mpf(self.center_fraction(), exact=True)

    @property
    def radius(self) -> mpf:
        return _fraction_to_mpf(self.radius_fraction())

    def radius_fraction(self) -> Fraction:
        return self._endpoints()[1] - self.center_fraction()

    def _endpoints(self) -> tuple[Fraction, Fraction]:
        a, b = self.interval._mpi_
        return _raw_to_fraction(a), _raw_to_fraction(b)

    def center_fraction(self) -> Fraction:
        a, b = self._endpoints()
        return (a + b) / 2

    def is_exact(self) -> bool:
        a, b = self.interval._mpi_
        return a == b

    def contains(self, x: Union[int, Fraction, "BallValue"]) -> bool:
        lo, hi = self._endpoints()
        if isinstance(x, BallValue):
            xlo, xhi = x._endpoints()
            return lo <= xlo and xhi <= hi
        return lo <= Fraction(x) <= hi

    def is_positive(self) -> bool:
        return mpf_gt(self.interval._mpi_[0], fzero)

    def is_negative(self) -> bool:
        return mpf_lt(self.interval._mpi_[1], fzero)

    def certainly_lt(self, other: "BallValue") -> bool:
        return mpf_lt(self.interval._mpi_[1], other.interval._mpi_[0])

    def certainly_le(self, other: "BallValue") -> bool:
        return mpf_le(self.interval._mpi_[1], other.interval._mpi_[0])

    def __add__(self, other):
        return BallValue(self.interval + _to_interval(other))

    __radd__ = __add__

    def __sub__(self, other):
        return BallValue(self.interval - _to_interval(other))

    def __rsub__(self, other):
        return BallValue(_to_interval(other) - self.interval)

    def __mul__(self, other):
        return BallValue(self.interval * _to_interval(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = _to_interval(other)
        if _straddles_zero(d):
            raise DomainError("division by a ball containing zero")
        return BallValue(self.interval / d)

    def __rtruediv__(self, other):
        if _straddles_zero(self.interval):
            raise DomainError("division by a ball containing zero")
        return BallValue(_to_interval(other) / self.interval)

    def __neg__(self):
        return BallValue(-self.interval)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("use eval_elementary('pow_real', ...) for real exponents")
        return BallValue(self.interval ** k)

    def __repr__(self):
        return f"BallValue({to_str(self.center._mpf_, 20)} +/- {to_str(self.radius._mpf_, 3)})"


def _raw_to_fraction(raw) -> Fraction:
    if raw in (finf, fninf, fnan):
        raise DomainError("ball has an infinite endpoint")
    sign, man, exp, _ = raw
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _fraction_to_mpf(q: Fraction, exact: bool = False) -> mpf:
    """Convert a binary rational; exactly, or rounded up at 64 + mp.prec bits."""
    num, den = q.numerator, q.denominator
    exp = 1 - den.bit_length()  # den is a power of two
    prec = max(num.bit_length(), 1) if exact else mp.prec + 64
    return mpf(from_man_exp(num, exp, prec, round_ceiling))


def double_factorial(k: int) -> int:
    """Return ``k!! = k (k-2) (k-4) ...``, with ``0!! = 1``."""
    if k < 0:
        raise ValueError("double_factorial requires k >= 0")
    return math.prod(range(k, 0, -2))


def wallis_exact(n: int) -> Fraction:
    """``W(n) = (2n-1)!!/(2n)!!`` as a normalized fraction, for ``n >= 1``."""
    if n < 1:
        raise DomainError("the Wallis ratio is defined here only for n >= 1")
    # C(2n, n) / 4^n; the 2-adic valuation of C(2n, n) is popcount(n)
    shift = bin(n).count("1")
    return Fraction(math.comb(2 * n, n) >> shift, 1 << (2 * n - shift))


def wallis_sequence(n_from: int, n_to: int) -> Iterator[tuple[int, Fraction]]:
    """Yield ``(n, W(n))`` for ``n_from <= n <= n_to`` via the exact recurrence."""
    w = wallis_exact(n_from)
    for n in range(n_from, n_to + 1):
        yield n, w
        w = w * Fraction(2 * n + 1, 2 * n + 2)


def rational_to_ball(r: Union[int, Fraction], ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    with working_precision(ctx):
        return BallValue.exact(Fraction(r))


def pi_ball(ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    with working_precision(ctx):
        return BallValue(+iv.pi)


def e_ball(ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    with working_precision(ctx):
        return BallValue(+iv.e)


def _as_ball(x: Number) -> BallValue:
    return x if isinstance(x, BallValue) else BallValue.exact(x)


def eval_elementary(kind: str, x: Number, y: Number | None = None,
                    ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    """Evaluate ``ln``, ``exp``, ``sqrt`` or ``pow_real`` (``x**y``) on balls.

    ln, sqrt and pow_real raise DomainError unless the argument ball lies
    strictly inside the positive reals.
    """
    with working_precision(ctx):
        bx = _as_ball(x)
        if kind == "exp":
            return BallValue(iv.exp(bx.interval))
        if kind in ("ln", "sqrt", "pow_real") and not bx.is_positive():
            raise DomainError(f"{kind} needs a strictly positive argument, got {bx!r}")
        if kind == "ln":
            return BallValue(iv.log(bx.interval))
        if kind == "sqrt":
            return BallValue(iv.sqrt(bx.interval))
        if kind == "pow_real":
            if y is None:
                raise TypeError("pow_real needs an exponent")
            by = _as_ball(y)
            return BallValue(iv.exp(by.interval * iv.log(bx.interval)))
    raise ValueError(f"unknown elementary function {kind!r}")


def ln(x: Number, ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    return eval_elementary("ln", x, ctx=ctx)


def exp(x: Number, ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    return eval_elementary("exp", x, ctx=ctx)


def sqrt(x: Number, ctx: EvalContext = DEFAULT_CONTEXT) -> BallValue:
    return eval_elementary("sqrt", x, ctx=ctx)
