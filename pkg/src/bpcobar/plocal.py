"""Exact arithmetic in the integers localized at an odd prime p.

A p-local scalar is a rational whose denominator is prime to p; it carries
the p-adic valuation nu.  Unconstrained ``Fraction`` values are used for
intermediate linear solves; everything stored in algebra elements goes
through :class:`PLocalScalar`, which enforces p-locality.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf


class PLocalityViolation(ValueError):
    """A value with p in its denominator was forced into Z_(p)."""


def nu(x, p: int):
    """p-adic valuation.  nu(0) = +inf; for a/b with b prime to p, nu(a) - nu(b)."""
    if isinstance(x, PLocalScalar):
        x = x.as_fraction()
    if isinstance(x, Fraction):
        if x == 0:
            return INF
        return _int_nu(x.numerator, p) - _int_nu(x.denominator, p)
    if x == 0:
        return INF
    return _int_nu(int(x), p)


def _int_nu(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def require_p_local(q: Fraction, p: int) -> Fraction:
    if q.denominator % p == 0:
        raise PLocalityViolation(f"denominator of {q} is divisible by {p}")
    return q


class PLocalScalar:
    """Exact rational with denominator prime to p."""

    __slots__ = ("p", "_q")

    def __init__(self, value, p: int = 3):
        if isinstance(value, PLocalScalar):
            value = value._q
        q = Fraction(value)
        self.p = p
        self._q = require_p_local(q, p)

    # -- accessors -------------------------------------------------------

    @property
    def numerator(self) -> int:
        return self._q.numerator

    @property
    def denominator(self) -> int:
        return self._q.denominator

    def as_fraction(self) -> Fraction:
        return self._q

    @property
    def nu(self):
        return nu(self._q, self.p)

    # -- ring/field operations --------------------------------------------

    def _coerce(self, other) -> Fraction:
        if isinstance(other, PLocalScalar):
            if other.p != self.p:
                raise ValueError("mixed primes in scalar arithmetic")
            return other._q
        return Fraction(other)

    def __add__(self, other):
        return PLocalScalar(self._q + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return PLocalScalar(self._q - self._coerce(other), self.p)

    def __rsub__(self, other):
        return PLocalScalar(self._coerce(other) - self._q, self.p)

    def __mul__(self, other):
        return PLocalScalar(self._q * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = self._coerce(other)
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return PLocalScalar(self._q / d, self.p)

    def __rtruediv__(self, other):
        if self._q == 0:
            raise ZeroDivisionError("division by zero")
        return PLocalScalar(self._coerce(other) / self._q, self.p)

    def __neg__(self):
        return PLocalScalar(-self._q, self.p)

    def __eq__(self, other):
        if isinstance(other, PLocalScalar):
            return self._q == other._q
        try:
            return self._q == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self._q)

    def __bool__(self):
        return self._q != 0

    # -- canonical text form "n/d" (omit /d when d = 1) ---------------------

    def __str__(self):
        if self._q.denominator == 1:
            return str(self._q.numerator)
        return f"{self._q.numerator}/{self._q.denominator}"

    def __repr__(self):
        return f"PLocalScalar({self}, p={self.p})"

    @classmethod
    def parse(cls, text: str, p: int = 3) -> "PLocalScalar":
        return cls(Fraction(text.strip()), p)
