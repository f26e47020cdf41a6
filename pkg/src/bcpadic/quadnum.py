"""Elements x0 + x1*X of R[X]/(X^2 - a X + b).

The coefficient ring R is anything with +, -, * (Fraction, int,
CyclotomicElement, PadicScalar).  This carries exact values in Q(alpha)
or Q(zeta)(alpha), where alpha is a root of the Hecke polynomial
X^2 - a_p X + p^(k+1).
"""

from __future__ import annotations

from fractions import Fraction


class QuadNumber:
    __slots__ = ("x0", "x1", "a", "b")

    def __init__(self, x0, x1, a: int, b: int):
        self.x0 = x0
        self.x1 = x1
        self.a = a
        self.b = b

    @classmethod
    def root(cls, a: int, b: int, one=Fraction(1), zero=Fraction(0)) -> "QuadNumber":
        return cls(zero, one, a, b)

    def _wrap(self, other) -> "QuadNumber":
        if isinstance(other, QuadNumber):
            if (other.a, other.b) != (self.a, self.b):
                raise ValueError("different quadratic relations")
            return other
        return QuadNumber(other, self.x1 * 0, self.a, self.b)

    def __add__(self, other):
        o = self._wrap(other)
        return QuadNumber(self.x0 + o.x0, self.x1 + o.x1, self.a, self.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.x0, -self.x1, self.a, self.b)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuadNumber):
            return QuadNumber(self.x0 * other, self.x1 * other, self.a, self.b)
        o = self._wrap(other)
        # X^2 = a X - b
        t = self.x1 * o.x1
        return QuadNumber(self.x0 * o.x0 - t * self.b,
                          self.x0 * o.x1 + self.x1 * o.x0 + t * self.a, self.a, self.b)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNumber":
        # X -> a - X
        return QuadNumber(self.x0 + self.x1 * self.a, -self.x1, self.a, self.b)

    def norm(self):
        return self.x0 * self.x0 + self.x0 * self.x1 * self.a + self.x1 * self.x1 * self.b

    def inverse(self) -> "QuadNumber":
        n = self.norm()
        inv = n.inverse() if hasattr(n, "inverse") else Fraction(1) / Fraction(n)
        c = self.conjugate()
        return QuadNumber(c.x0 * inv, c.x1 * inv, self.a, self.b)

    def __truediv__(self, other):
        if isinstance(other, QuadNumber):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return QuadNumber(self.x0 / other, self.x1 / other, self.a, self.b)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._wrap(self.x0 * 0 + 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return _is_zero(self.x0) and _is_zero(self.x1)

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((repr(self.x0), repr(self.x1), self.a, self.b))

    def map_coeffs(self, f) -> "QuadNumber":
        return QuadNumber(f(self.x0), f(self.x1), self.a, self.b)

    def __repr__(self):
        return f"({self.x0}) + ({self.x1})*alpha"


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0
