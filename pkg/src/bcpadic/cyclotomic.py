"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are polynomials in zeta_m reduced modulo the m-th cyclotomic
polynomial, so the coefficient vector (length phi(m)) is canonical.
Polynomial arithmetic is delegated to FLINT.  An element can be tagged
with a p-power modulus, after which its coefficients are integers mod
p^N; the tag is one-way.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import flint


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(m))


def euler_phi(m: int) -> int:
    result, n, q = m, m, 2
    while q * q <= n:
        if n % q == 0:
            while n % q == 0:
                n //= q
            result -= result // q
        q += 1
    if n > 1:
        result -= result // n
    return result


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _to_fraction(c) -> Fraction:
    if isinstance(c, flint.fmpq):
        return Fraction(int(c.p), int(c.q))
    return Fraction(c)


class CyclotomicElement:
    """An element of Q(zeta_m), optionally reduced to Z[zeta_m]/p^N."""

    __slots__ = ("m", "_poly", "modulus")

    def __init__(self, m: int, poly, modulus: int | None = None, _reduced: bool = False):
        if m < 1:
            raise ValueError("conductor must be positive")
        # Q(zeta_m) = Q(zeta_2m) for odd m; keep the given conductor anyway
        self.m = m
        if not isinstance(poly, flint.fmpq_poly):
            poly = flint.fmpq_poly(list(poly))
        if not _reduced:
            poly = poly % cyclotomic_poly(m)
        self.modulus = modulus
        if modulus is not None:
            poly = _reduce_coeffs(poly, modulus)
        self._poly = poly

    # construction helpers
    @classmethod
    def zeta(cls, m: int, e: int = 1) -> "CyclotomicElement":
        e %= m
        coeffs = [0] * (e + 1)
        coeffs[e] = 1
        return cls(m, flint.fmpq_poly(coeffs))

    @classmethod
    def from_int(cls, m: int, n) -> "CyclotomicElement":
        return cls(m, flint.fmpq_poly([flint.fmpq(n.numerator, n.denominator)
                                       if isinstance(n, Fraction) else n]))

    @classmethod
    def from_power_counts(cls, m: int, counts: Sequence[int]) -> "CyclotomicElement":
        """Sum of counts[e] * zeta_m^e for e in range(m)."""
        if len(counts) != m:
            raise ValueError("need exactly m counts")
        return cls(m, flint.fmpq_poly([int(c) for c in counts]))

    # accessors
    def coeffs(self) -> list[Fraction]:
        n = euler_phi(self.m)
        cs = [_to_fraction(c) for c in self._poly.coeffs()]
        return cs + [Fraction(0)] * (n - len(cs))

    def int_coeffs(self) -> list[int]:
        out = []
        for c in self.coeffs():
            if c.denominator != 1:
                raise ValueError("element is not integral in the power basis")
            out.append(int(c))
        return out

    def is_zero(self) -> bool:
        return self._poly == 0

    def rational_value(self) -> Fraction | None:
        """The value as a rational number, or None if not in Q."""
        if self._poly.degree() <= 0:
            return _to_fraction(self._poly[0]) if self._poly.degree() == 0 else Fraction(0)
        return None

    # conductor changes
    def lift_to(self, m2: int) -> "CyclotomicElement":
        if m2 % self.m:
            raise ValueError(f"{self.m} does not divide {m2}")
        if m2 == self.m:
            return self
        step = m2 // self.m
        cs = self._poly.coeffs()
        big = [0] * ((len(cs) - 1) * step + 1 if cs else 1)
        for i, c in enumerate(cs):
            big[i * step] = c
        return CyclotomicElement(m2, flint.fmpq_poly(big), self.modulus)

    def _common(self, other) -> tuple["CyclotomicElement", "CyclotomicElement"]:
        if not isinstance(other, CyclotomicElement):
            if isinstance(other, (int, Fraction)):
                other = CyclotomicElement.from_int(self.m, other)
            else:
                return NotImplemented, NotImplemented
        if self.modulus != other.modulus and None not in (self.modulus, other.modulus):
            raise ValueError("incompatible moduli")
        m = lcm(self.m, other.m)
        return self.lift_to(m), other.lift_to(m)

    def _result_modulus(self, other) -> int | None:
        if isinstance(other, CyclotomicElement) and other.modulus is not None:
            return other.modulus
        return self.modulus

    # ring operations
    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicElement(a.m, a._poly + b._poly, self._result_modulus(other), True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.m, -self._poly, self.modulus, True)

    def __sub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicElement(a.m, a._poly - b._poly, self._result_modulus(other), True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicElement(a.m, a._poly * b._poly, self._result_modulus(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicElement.from_int(self.m, 1)
        if self.modulus is not None:
            result = result.reduce_mod(self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "CyclotomicElement":
        if self.modulus is not None:
            raise ValueError("inverse is only available before reduction")
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = self._poly.xgcd(cyclotomic_poly(self.m))
        # g is a nonzero constant because Phi_m is irreducible
        return CyclotomicElement(self.m, s / g[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.modulus is not None:
                raise ValueError("divide before reducing")
            f = Fraction(other)
            return CyclotomicElement(self.m, self._poly * flint.fmpq(f.denominator, f.numerator), None, True)
        if isinstance(other, CyclotomicElement):
            return self * other.inverse()
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.from_int(self.m, other)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        a, b = self._common(other)
        mod = self.modulus or other.modulus
        if mod is not None:
            return (a - b).reduce_mod(mod).is_zero()
        return a._poly == b._poly

    def __hash__(self):
        return hash((self.m, tuple(self.coeffs()), self.modulus))

    # Galois structure
    def galois(self, s: int) -> "CyclotomicElement":
        """Apply zeta_m -> zeta_m^s for s coprime to m."""
        if gcd(s, self.m) != 1:
            raise ValueError("s must be coprime to the conductor")
        s %= self.m
        counts = [flint.fmpq(0)] * self.m
        for i, c in enumerate(self._poly.coeffs()):
            counts[(i * s) % self.m] += c
        return CyclotomicElement(self.m, flint.fmpq_poly(counts), self.modulus)

    def conj(self) -> "CyclotomicElement":
        return self.galois(-1)

    def norm_to_q(self) -> Fraction:
        """Product of all Galois conjugates, a rational number."""
        prod = CyclotomicElement.from_int(self.m, 1)
        for s in range(1, self.m):
            if gcd(s, self.m) == 1:
                prod = prod * self.galois(s)
        val = prod.rational_value()
        assert val is not None
        return val

    # p-adic reduction
    def reduce_mod(self, modulus: int) -> "CyclotomicElement":
        if self.modulus is not None and self.modulus % modulus:
            raise ValueError("can only coarsen an existing modulus")
        return CyclotomicElement(self.m, self._poly, modulus, True)

    def __repr__(self) -> str:
        tag = f" mod {self.modulus}" if self.modulus else ""
        return f"CyclotomicElement(m={self.m}, {self._poly}{tag})"

    def to_json(self) -> dict:
        cs = self.coeffs()
        if all(c.denominator == 1 for c in cs):
            coeffs = [int(c) for c in cs]
        else:
            coeffs = [str(c) for c in cs]
        out = {"conductor": self.m, "coeffs": coeffs}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out


def _reduce_coeffs(poly: flint.fmpq_poly, modulus: int) -> flint.fmpq_poly:
    out = []
    for c in poly.coeffs():
        f = _to_fraction(c)
        if gcd(f.denominator, modulus) != 1:
            raise ZeroDivisionError("denominator not invertible modulo the p-power")
        out.append(f.numerator * pow(f.denominator, -1, modulus) % modulus)
    return flint.fmpq_poly(out)


def cyclotomic_sum(m: int, terms: Iterable[tuple[int, CyclotomicElement | int]]) -> CyclotomicElement:
    """Sum of coefficient * zeta_m^e over (e, coefficient) pairs."""
    total = CyclotomicElement.from_int(m, 0)
    ints = [0] * m
    have_int = False
    for e, c in terms:
        if isinstance(c, int):
            ints[e % m] += c
            have_int = True
        else:
            total = total + c * CyclotomicElement.zeta(m, e)
    if have_int:
        total = total + CyclotomicElement.from_power_counts(m, ints)
    return total
