"""Exact complex scalars over the Gaussian rationals.

Real values are plain ``Fraction`` (or ``int``); a :class:`Cx` only appears
when the imaginary part is nonzero, and every operation on a ``Cx`` collapses
back to ``Fraction`` when the imaginary part cancels.  This keeps the common
real case on the fast ``Fraction`` path.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def cx(re, im=0):
    re = Fraction(re)
    im = Fraction(im)
    if im == 0:
        return re
    return Cx(re, im)


class Cx:
    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _parts(other):
        if isinstance(other, Cx):
            return other.re, other.im
        if isinstance(other, Rational):
            return Fraction(other), Fraction(0)
        return NotImplemented

    def __add__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return p
        return cx(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return p
        return cx(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return p
        return cx(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return p
        a, b = self.re, self.im
        c, d = p
        return cx(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return p
        c, d = p
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("Cx division by zero")
        a, b = self.re, self.im
        return cx((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return p
        return cx(*p) * inverse(self)

    def __neg__(self):
        return Cx(-self.re, -self.im)

    def __eq__(self, other):
        p = self._parts(other)
        if p is NotImplemented:
            return False
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True  # imaginary part is nonzero by construction

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Cx({self.re}, {self.im})"


def inverse(v):
    if isinstance(v, Cx):
        den = v.re * v.re + v.im * v.im
        return cx(v.re / den, -v.im / den)
    return 1 / Fraction(v)


def conj(v):
    if isinstance(v, Cx):
        return Cx(v.re, -v.im)
    return v


def abs2(v):
    """Exact squared modulus."""
    if isinstance(v, Cx):
        return v.re * v.re + v.im * v.im
    return Fraction(v) * Fraction(v)


def absf(v) -> float:
    if isinstance(v, Cx):
        return math.sqrt(float(abs2(v)))
    return abs(float(v))


def to_complex(v) -> complex:
    if isinstance(v, Cx):
        return complex(v)
    return complex(float(v), 0.0)


def real_part(v) -> Fraction:
    return v.re if isinstance(v, Cx) else Fraction(v)


def imag_part(v) -> Fraction:
    return v.im if isinstance(v, Cx) else Fraction(0)


def format_fraction(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise ValueError("floats are not accepted where exact rationals are required; use 'num/den'")
    return Fraction(str(s).strip())
