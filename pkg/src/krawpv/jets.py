"""Order-2 jets: a value together with its first two derivatives along a curve.

Arithmetic follows the Leibniz/quotient rules truncated at order 2, so
evaluating any rational expression with jet-valued inputs yields the value,
first and second t-derivative of that expression along the curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

ScalarLike = Union[int, Fraction, float]


class JetDivisionError(ZeroDivisionError):
    """Division by a jet whose value slot is zero."""


def _coerce(x) -> "Jet2":
    if isinstance(x, Jet2):
        return x
    if isinstance(x, (int, Fraction, float)):
        return Jet2(x, 0 * x, 0 * x)
    return NotImplemented


@dataclass(frozen=True)
class Jet2:
    v: ScalarLike
    d1: ScalarLike
    d2: ScalarLike

    @staticmethod
    def constant(v: ScalarLike) -> "Jet2":
        return Jet2(v, 0 * v, 0 * v)

    @staticmethod
    def variable(v: ScalarLike) -> "Jet2":
        """Jet of the curve parameter itself: (v, 1, 0)."""
        if isinstance(v, float):
            return Jet2(v, 1.0, 0.0)
        return Jet2(v, Fraction(1), Fraction(0))

    def __neg__(self) -> "Jet2":
        return Jet2(-self.v, -self.d1, -self.d2)

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet2(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet2(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet2(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2 * self.d1 * o.d1 + self.v * o.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.v == 0:
            raise JetDivisionError("jet division by zero value slot")
        q0 = self.v / o.v
        q1 = (self.d1 - q0 * o.d1) / o.v
        q2 = (self.d2 - q0 * o.d2 - 2 * q1 * o.d1) / o.v
        return Jet2(q0, q1, q2)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if isinstance(self.v, float):
            result = Jet2(1.0, 0.0, 0.0)
        else:
            result = Jet2(Fraction(1), Fraction(0), Fraction(0))
        base = self
        e = k
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.v == o.v and self.d1 == o.d1 and self.d2 == o.d2
