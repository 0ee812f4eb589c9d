"""Exact nonnegative real values arising from point evaluations.

Every evaluation of a polynomial at one of the supported spectrum points
produces a value of one of two special shapes:

* ``c * p**a``  with rational ``c >= 0``, a prime ``p`` and rational
  exponent ``a`` (non-archimedean branches), or
* ``c * m**(e/2)`` with rational ``c, m >= 0`` and rational ``e``
  (archimedean branches, where ``m`` is the squared complex modulus of an
  exact Gaussian-rational evaluation).

Both shapes are closed under multiplication at a fixed point and compare
exactly by clearing the rational exponent: ``c1*p**(s/q) <= c2`` holds iff
``c1**q * p**s <= c2**q``.  This is what makes domain membership and
covering checks exact instead of float-thresholded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

_ZERO = Fraction(0)
_ONE = Fraction(1)

Real = Union[int, float, Fraction]


def _as_fraction(x: Real) -> Fraction:
    # Floats are taken at face value (exact binary expansion).
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    raise TypeError(f"not a real value: {x!r}")


def _int_nth_root(value: int, n: int) -> int:
    """Floor n-th root of a nonnegative integer (Newton on big ints)."""
    if value < 0:
        raise ValueError("negative radicand")
    if value == 0:
        return 0
    if n == 1:
        return value
    if n == 2:
        return math.isqrt(value)
    x = 1 << ((value.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + value // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x**n > value:
        x -= 1
    return x


def fraction_nth_root(x: Fraction, n: int) -> Fraction | None:
    """Exact n-th root of a nonnegative rational, or None if irrational."""
    if n <= 0:
        raise ValueError("root index must be positive")
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return _ZERO
    num = _int_nth_root(x.numerator, n)
    den = _int_nth_root(x.denominator, n)
    if num**n == x.numerator and den**n == x.denominator:
        return Fraction(num, den)
    return None


def _log_fraction(x: Fraction) -> float:
    """log of a positive rational, safe for huge numerators/denominators."""
    if x <= 0:
        raise ValueError("log of nonpositive value")

    def log_int(n: int) -> float:
        if n.bit_length() <= 900:
            return math.log(n)
        shift = n.bit_length() - 53
        return math.log(n >> shift) + shift * math.log(2.0)

    return log_int(x.numerator) - log_int(x.denominator)


@dataclass(frozen=True, eq=False)
class ExactValue:
    """A nonnegative real of the form ``rat * p**pexp * msq**(eps/2)``."""

    rat: Fraction
    p: int | None = None
    pexp: Fraction = _ZERO
    msq: Fraction | None = None
    eps: Fraction = _ONE

    def __post_init__(self) -> None:
        rat = _as_fraction(self.rat)
        if rat < 0:
            raise ValueError("exact values are nonnegative")
        p, pexp = self.p, Fraction(self.pexp)
        msq = None if self.msq is None else Fraction(self.msq)
        eps = Fraction(self.eps)
        if msq is not None and msq < 0:
            raise ValueError("squared modulus must be nonnegative")
        if msq is not None and eps <= 0:
            raise ValueError("archimedean exponent must be positive")
        if msq == 0:
            rat = _ZERO
        if rat == 0:
            p, pexp, msq = None, _ZERO, None
        if p is not None and pexp == 0:
            p = None
        if p is not None and pexp.denominator == 1:
            # Integer prime powers are plain rationals.
            rat *= Fraction(p) ** int(pexp)
            p, pexp = None, _ZERO
        if msq is not None:
            if msq == 1:
                msq = None
            elif eps.denominator == 1 and int(eps) % 2 == 0:
                rat *= msq ** (int(eps) // 2)
                msq = None
            elif eps.denominator == 1:
                root = fraction_nth_root(msq, 2)
                if root is not None:
                    rat *= root ** int(eps)
                    msq = None
        if msq is None:
            eps = _ONE
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "pexp", pexp)
        object.__setattr__(self, "msq", msq)
        object.__setattr__(self, "eps", eps)

    # -- constructors -------------------------------------------------

    @staticmethod
    def rational(c: Real) -> "ExactValue":
        return ExactValue(_as_fraction(c))

    @staticmethod
    def p_power(c: Real, p: int, exponent: Real) -> "ExactValue":
        return ExactValue(_as_fraction(c), p=p, pexp=_as_fraction(exponent))

    @staticmethod
    def arch(c: Real, msq: Real, eps: Real) -> "ExactValue":
        return ExactValue(_as_fraction(c), msq=_as_fraction(msq), eps=_as_fraction(eps))

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.rat == 0

    @property
    def is_rational(self) -> bool:
        return self.p is None and self.msq is None

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not exactly rational")
        return self.rat

    # -- arithmetic ---------------------------------------------------

    def __mul__(self, other: "ExactValue | Real") -> "ExactValue":
        if not isinstance(other, ExactValue):
            other = ExactValue.rational(other)
        if self.is_zero or other.is_zero:
            return ExactValue.rational(0)
        if self.p is not None and other.p is not None and self.p != other.p:
            raise ValueError("cannot multiply values over different primes exactly")
        p = self.p if self.p is not None else other.p
        pexp = self.pexp + other.pexp
        if self.msq is not None and other.msq is not None:
            if self.eps != other.eps:
                raise ValueError("cannot multiply archimedean values at different exponents")
            msq, eps = self.msq * other.msq, self.eps
        elif self.msq is not None:
            msq, eps = self.msq, self.eps
        else:
            msq, eps = other.msq, other.eps
        return ExactValue(self.rat * other.rat, p=p, pexp=pexp, msq=msq, eps=eps)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactValue":
        if n < 0:
            return self.invert() ** (-n)
        if n == 0:
            return ExactValue.rational(1)
        msq = None if self.msq is None else self.msq**n
        return ExactValue(self.rat**n, p=self.p, pexp=self.pexp * n, msq=msq, eps=self.eps)

    def invert(self) -> "ExactValue":
        if self.is_zero:
            raise ZeroDivisionError("inverting the zero value")
        msq = None if self.msq is None else 1 / self.msq
        return ExactValue(1 / self.rat, p=self.p, pexp=-self.pexp, msq=msq, eps=self.eps)

    # -- comparison ---------------------------------------------------

    def le(self, other: "ExactValue | Real") -> bool:
        if not isinstance(other, ExactValue):
            other = ExactValue.rational(other)
        if self.is_zero:
            return True
        if other.is_zero:
            return False
        if self.p is not None and other.p is not None and self.p != other.p:
            raise ValueError("values over different primes do not compare exactly")
        p = self.p if self.p is not None else other.p
        d = self.pexp - other.pexp
        m1 = self.msq if self.msq is not None else _ONE
        m2 = other.msq if other.msq is not None else _ONE
        if self.msq is not None and other.msq is not None and self.eps != other.eps:
            raise ValueError("archimedean values at different exponents do not compare exactly")
        eps = self.eps if self.msq is not None else other.eps
        r = self.rat / other.rat
        if d != 0 and m1 != m2:
            raise ValueError("mixed prime/archimedean comparison is not exact")
        if d != 0:
            assert p is not None
            s, q = d.numerator, d.denominator
            return r**q * Fraction(p) ** s <= 1
        if m1 != m2:
            s, q = eps.numerator, eps.denominator
            return r ** (2 * q) * (m1 / m2) ** s <= 1
        return r <= 1

    def lt(self, other: "ExactValue | Real") -> bool:
        if not isinstance(other, ExactValue):
            other = ExactValue.rational(other)
        return not other.le(self)

    def eq(self, other: "ExactValue | Real") -> bool:
        if not isinstance(other, ExactValue):
            other = ExactValue.rational(other)
        return self.le(other) and other.le(self)

    # -- conversion ---------------------------------------------------

    def __float__(self) -> float:
        if self.is_zero:
            return 0.0
        log = _log_fraction(self.rat)
        if self.p is not None:
            log += float(self.pexp) * math.log(self.p)
        if self.msq is not None:
            log += float(self.eps) / 2.0 * _log_fraction(self.msq)
        return math.exp(log)

    def __repr__(self) -> str:
        parts = [str(self.rat)]
        if self.p is not None:
            parts.append(f"{self.p}^({self.pexp})")
        if self.msq is not None:
            parts.append(f"({self.msq})^({self.eps}/2)")
        return " * ".join(parts)


PointValue = Union[ExactValue, float]

#: Relative slack used whenever a comparison has to fall back to floats.
FLOAT_SLACK = 1e-12


def value_float(v: PointValue) -> float:
    return float(v)


def value_le(a: PointValue, b: PointValue, slack: float = FLOAT_SLACK) -> bool:
    """a <= b, exact when both sides are exact and comparable."""
    if isinstance(a, ExactValue) and isinstance(b, ExactValue):
        try:
            return a.le(b)
        except ValueError:
            pass
    fa, fb = float(a), float(b)
    return fa <= fb + slack * max(abs(fa), abs(fb), 1.0)


def value_lt(a: PointValue, b: PointValue, slack: float = FLOAT_SLACK) -> bool:
    """a < b, exact when both sides are exact and comparable."""
    if isinstance(a, ExactValue) and isinstance(b, ExactValue):
        try:
            return a.lt(b)
        except ValueError:
            pass
    fa, fb = float(a), float(b)
    return fa < fb - slack * max(abs(fa), abs(fb), 1.0)


def value_eq(a: PointValue, b: PointValue, slack: float = FLOAT_SLACK) -> bool:
    if isinstance(a, ExactValue) and isinstance(b, ExactValue):
        try:
            return a.eq(b)
        except ValueError:
            pass
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= slack * max(abs(fa), abs(fb), 1.0)


def value_mul(a: PointValue, b: PointValue) -> PointValue:
    if isinstance(a, ExactValue) and isinstance(b, ExactValue):
        try:
            return a * b
        except ValueError:
            pass
    return float(a) * float(b)


def value_max(values: Iterable[PointValue]) -> PointValue:
    """Maximum of point values taken at a single point (exact when possible)."""
    best: PointValue | None = None
    for v in values:
        if best is None or value_lt(best, v, slack=0.0):
            best = v
    if best is None:
        raise ValueError("maximum of an empty collection")
    return best
