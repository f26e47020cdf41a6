"""Fixed-precision p-adic scalars.

Two scalar types live here: residues modulo p^N (``PadicScalar``) and
elements of a quadratic extension ``Z_p[X]/(X^2 - aX + b)`` with both
coordinates carried modulo p^N (``QuadExtScalar``).  The second one
houses Hecke roots that are not in Z_p, such as the roots of X^2 + p.

Valuations are exact ``Fraction`` values.  A value that vanishes at the
working precision has valuation ``AtLeast(N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class PrecisionError(ArithmeticError):
    """Raised when an operation would need digits that are not available."""


@dataclass(frozen=True)
class AtLeast:
    """Lower bound returned as the valuation of a value that is zero mod p^N."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


def _vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(n: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of a nonzero integer, optionally capped."""
    if n == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    v = _vp_int(n, p)
    return v if cap is None else min(v, cap)


def _check_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is not supported; use an odd prime")
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not a prime")


@dataclass(frozen=True)
class PadicScalar:
    """An element of Z/p^N viewed as an approximation of a p-adic integer."""

    p: int
    N: int
    residue: int

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.N < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "residue", self.residue % self.p**self.N)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, int):
            return PadicScalar(self.p, self.N, other)
        return NotImplemented

    def _binary(self, other, op):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.N, o.N)
        return PadicScalar(self.p, n, op(self.residue, o.residue))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicScalar(self.p, self.N, -self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicScalar(self.p, self.N, pow(self.residue, e, self.modulus))

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> "PadicScalar":
        if not self.is_unit():
            raise ZeroDivisionError("division by a non-unit")
        return PadicScalar(self.p, self.N, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicScalar(self.p, self.N, other)
        if not isinstance(other, PadicScalar) or other.p != self.p:
            return NotImplemented
        n = min(self.N, other.N)
        return (self.residue - other.residue) % self.p**n == 0

    def __hash__(self):
        return hash((self.p, self.N, self.residue))

    def valuation(self) -> Union[Fraction, AtLeast]:
        if self.residue == 0:
            return AtLeast(self.N)
        return Fraction(_vp_int(self.residue, self.p))

    def shift_down(self, e: int) -> "PadicScalar":
        """Exact division by p^e; the result carries N - e digits."""
        if e < 0:
            raise ValueError("negative shift")
        if self.residue % self.p**e:
            raise PrecisionError(f"value not divisible by p^{e}")
        if e >= self.N:
            raise PrecisionError("shift exhausts all digits")
        return PadicScalar(self.p, self.N - e, self.residue // self.p**e)

    def lift(self) -> int:
        return self.residue

    def digits(self) -> list[int]:
        """Base-p digits, least significant first, exactly N of them."""
        out, r = [], self.residue
        for _ in range(self.N):
            out.append(r % self.p)
            r //= self.p
        return out

    def __repr__(self) -> str:
        return f"PadicScalar({self.residue} mod {self.p}^{self.N})"


@dataclass(frozen=True)
class QuadExtScalar:
    """c0 + c1*X in Z_p[X]/(X^2 - a X + b), coordinates mod p^N."""

    p: int
    N: int
    a: int
    b: int
    c0: int
    c1: int

    def __post_init__(self) -> None:
        _check_prime(self.p)
        m = self.p**self.N
        object.__setattr__(self, "c0", self.c0 % m)
        object.__setattr__(self, "c1", self.c1 % m)

    @classmethod
    def generator(cls, p: int, N: int, a: int, b: int) -> "QuadExtScalar":
        """The class of X, a root of X^2 - aX + b."""
        return cls(p, N, a, b, 0, 1)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _same(self, other: "QuadExtScalar") -> None:
        if (other.p, other.a, other.b) != (self.p, self.a, self.b):
            raise ValueError("incompatible quadratic extensions")

    def _coerce(self, other):
        if isinstance(other, QuadExtScalar):
            self._same(other)
            return other
        if isinstance(other, PadicScalar):
            return QuadExtScalar(self.p, other.N, self.a, self.b, other.residue, 0)
        if isinstance(other, int):
            return QuadExtScalar(self.p, self.N, self.a, self.b, other, 0)
        return NotImplemented

    def _make(self, n, c0, c1):
        return QuadExtScalar(self.p, n, self.a, self.b, c0, c1)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._make(min(self.N, o.N), self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self):
        return self._make(self.N, -self.c0, -self.c1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # (x0 + x1 X)(y0 + y1 X), X^2 = aX - b
        x0, x1, y0, y1 = self.c0, self.c1, o.c0, o.c1
        t = x1 * y1
        return self._make(
            min(self.N, o.N), x0 * y0 - self.b * t, x0 * y1 + x1 * y0 + self.a * t
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._make(self.N, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "QuadExtScalar":
        # X -> a - X
        return self._make(self.N, self.c0 + self.a * self.c1, -self.c1)

    def norm(self) -> PadicScalar:
        n = self.c0**2 + self.a * self.c0 * self.c1 + self.b * self.c1**2
        return PadicScalar(self.p, self.N, n)

    def trace(self) -> PadicScalar:
        return PadicScalar(self.p, self.N, 2 * self.c0 + self.a * self.c1)

    def is_unit(self) -> bool:
        return self.norm().is_unit()

    def inverse(self) -> "QuadExtScalar":
        nm = self.norm()
        if not nm.is_unit():
            raise ZeroDivisionError("division by a non-unit")
        inv = nm.inverse().residue
        c = self.conjugate()
        return self._make(self.N, c.c0 * inv, c.c1 * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        m = self.p ** min(self.N, o.N)
        return (self.c0 - o.c0) % m == 0 and (self.c1 - o.c1) % m == 0

    def __hash__(self):
        return hash((self.p, self.N, self.a, self.b, self.c0, self.c1))

    def valuation(self) -> Union[Fraction, AtLeast]:
        """Half the valuation of the norm.

        Only meaningful when X^2 - aX + b is irreducible over Q_p, which
        is checked by ``is_field``.
        """
        if self.c0 == 0 and self.c1 == 0:
            return AtLeast(self.N)
        nv = self.norm().valuation()
        if isinstance(nv, AtLeast):
            # the norm lost all digits; the coordinates still bound the valuation
            v = min(vp(self.c0, self.p, self.N), vp(self.c1, self.p, self.N))
            return AtLeast(v)
        return nv / 2

    def is_field(self) -> bool:
        return quadratic_is_irreducible(self.a, self.b, self.p)

    def shift_down(self, e: int) -> "QuadExtScalar":
        """Exact division by p^e; the result carries N - e digits."""
        q = self.p**e
        if self.c0 % q or self.c1 % q:
            raise PrecisionError(f"value not divisible by p^{e}")
        if e >= self.N:
            raise PrecisionError("shift exhausts all digits")
        return self._make(self.N - e, self.c0 // q, self.c1 // q)

    def with_precision(self, n: int) -> "QuadExtScalar":
        if n > self.N:
            raise PrecisionError("cannot raise precision")
        return self._make(n, self.c0, self.c1)

    def __repr__(self) -> str:
        return (
            f"QuadExtScalar({self.c0} + {self.c1}*X mod {self.p}^{self.N}, "
            f"X^2 - {self.a}X + {self.b})"
        )


def quadratic_is_irreducible(a: int, b: int, p: int) -> bool:
    """Whether X^2 - aX + b has no root in Q_p (p odd)."""
    disc = a * a - 4 * b
    if disc == 0:
        return False
    v = _vp_int(disc, p)
    if v % 2:
        return True
    u = (disc // p**v) % p
    return pow(u, (p - 1) // 2, p) != 1


def teichmuller(a: int, p: int, N: int) -> PadicScalar:
    """The (p-1)-st root of unity congruent to a mod p, to N digits."""
    _check_prime(p)
    if a % p == 0:
        raise ValueError("Teichmuller lift needs a unit")
    m = p**N
    x = a % m
    # x -> x^p gains one digit per step
    for _ in range(N):
        y = pow(x, p, m)
        if y == x:
            break
        x = y
    return PadicScalar(p, N, x)


def hensel_unit_root(a_p: int, k: int, p: int, N: int) -> tuple[PadicScalar, PadicScalar]:
    """Unit root alpha of X^2 - a_p X + p^(k+1) and the other root beta.

    Returns ``(alpha, beta)`` with alpha a unit and v(beta) = k + 1.
    """
    _check_prime(p)
    if a_p % p == 0:
        raise ValueError("a_p divisible by p: not ordinary, use QuadExtScalar")
    m = p**N
    c = p ** (k + 1)
    x = a_p % m
    # Newton on f(x) = x^2 - a_p x + c; f'(x) = 2x - a_p is a unit near a_p
    for _ in range(N.bit_length() + 2):
        f = (x * x - a_p * x + c) % m
        if f == 0:
            break
        x = (x - f * pow(2 * x - a_p, -1, m)) % m
    alpha = PadicScalar(p, N, x)
    beta = PadicScalar(p, N, a_p - x)
    return alpha, beta


def padic_valuation(x) -> Union[Fraction, AtLeast]:
    """Valuation of a p-adic scalar, or AtLeast(N) when zero at precision N."""
    return x.valuation()
