"""Dirichlet characters, imaginary quadratic fields and norm-composed characters.

A character mod M is stored as a vector of exponents on a fixed set of
generators of (Z/M)^x: chi(g_i) = exp(2 pi i e_i / n_i) with n_i the
order of g_i.  Values are returned either as an exponent modulo the
character order or as a ``CyclotomicElement``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Callable, Iterator

from .cyclotomic import CyclotomicElement, lcm


def factorize(n: int) -> list[tuple[int, int]]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        q += 1
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root(p: int) -> int:
    phi = p - 1
    fs = [q for q, _ in factorize(phi)]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in fs):
            return g
    return 1


def _crt_lift(residue: int, mod: int, M: int) -> int:
    """Element congruent to residue mod `mod` and to 1 modulo M / mod-part."""
    other = M // mod
    if other == 1:
        return residue % M
    # x = residue mod `mod`, x = 1 mod other
    t = ((residue - 1) * pow(other, -1, mod)) % mod
    return (1 + other * t) % M


@dataclass(frozen=True)
class UnitGroup:
    """Generators of (Z/M)^x with discrete-log tables per prime-power part."""

    M: int
    gens: tuple[int, ...]
    orders: tuple[int, ...]
    # per generator: (prime-power modulus, generator residue there)
    local: tuple[tuple[int, int], ...] = field(repr=False)

    def dlog(self, a: int) -> tuple[int, ...] | None:
        if gcd(a, self.M) != 1:
            return None
        return _dlog_table(self.M)[a % self.M]


@lru_cache(maxsize=None)
def unit_group(M: int) -> UnitGroup:
    if M < 1:
        raise ValueError("modulus must be positive")
    gens, orders, local = [], [], []
    for q, e in factorize(M):
        qe = q**e
        if q == 2:
            if e == 1:
                continue
            gens.append(_crt_lift(-1, qe, M))
            orders.append(2)
            local.append((qe, qe - 1))
            if e >= 3:
                gens.append(_crt_lift(5, qe, M))
                orders.append(2 ** (e - 2))
                local.append((qe, 5))
        else:
            g = _primitive_root(q)
            # a primitive root mod q that stays primitive mod q^2
            if e > 1 and pow(g, q - 1, q * q) == 1:
                g += q
            gens.append(_crt_lift(g, qe, M))
            orders.append(qe - qe // q)
            local.append((qe, g))
    return UnitGroup(M, tuple(gens), tuple(orders), tuple(local))


@lru_cache(maxsize=None)
def _dlog_table(M: int) -> dict[int, tuple[int, ...]]:
    G = unit_group(M)
    table: dict[int, tuple[int, ...]] = {}
    ranges = [range(n) for n in G.orders]
    powers = []
    for g, n in zip(G.gens, G.orders):
        row, x = [], 1
        for _ in range(n):
            row.append(x)
            x = x * g % M
        powers.append(row)
    for exps in product(*ranges):
        x = 1
        for row, e in zip(powers, exps):
            x = x * row[e] % M
        table[x] = exps
    if M == 1:
        table = {0: ()}
    return table


class DirichletCharacter:
    """A Dirichlet character modulo M given by exponents on unit-group generators."""

    __slots__ = ("M", "exps", "_group", "order", "_cache")

    def __init__(self, M: int, exps: tuple[int, ...] | list[int]):
        G = unit_group(M)
        if len(exps) != len(G.gens):
            raise ValueError("exponent vector length does not match the generators")
        self.M = M
        self._group = G
        self.exps = tuple(e % n for e, n in zip(exps, G.orders))
        o = 1
        for e, n in zip(self.exps, G.orders):
            o = lcm(o, n // gcd(e, n))
        self.order = o
        self._cache: dict[int, int | None] = {}

    # constructors
    @classmethod
    def trivial(cls, M: int = 1) -> "DirichletCharacter":
        return cls(M, (0,) * len(unit_group(M).gens))

    @classmethod
    def from_exponent_function(cls, M: int, f: Callable[[int], int], order: int) -> "DirichletCharacter":
        """Character with chi(a) = zeta_order^f(a), f given on units."""
        G = unit_group(M)
        exps = []
        for g, n in zip(G.gens, G.orders):
            e = f(g) % order
            # chi(g) has order dividing n, so e * n / order is an integer mod n
            if (e * n) % order:
                raise ValueError("values inconsistent with the group structure")
            exps.append(e * n // order)
        return cls(M, tuple(exps))

    @classmethod
    def all(cls, M: int) -> Iterator["DirichletCharacter"]:
        G = unit_group(M)
        for exps in product(*[range(n) for n in G.orders]):
            yield cls(M, exps)

    # evaluation
    def exponent(self, a: int) -> int | None:
        """e with chi(a) = zeta_order^e, or None if gcd(a, M) > 1."""
        a %= self.M
        if a in self._cache:
            return self._cache[a]
        d = self._group.dlog(a)
        if d is None:
            val = None
        else:
            val = 0
            for x, e, n in zip(d, self.exps, self._group.orders):
                val += x * (e * self.order // n)
            val %= self.order
        self._cache[a] = val
        return val

    def __call__(self, a: int) -> CyclotomicElement:
        e = self.exponent(a)
        if e is None:
            return CyclotomicElement.from_int(self.order, 0)
        return CyclotomicElement.zeta(self.order, e)

    def sign(self) -> int:
        e = self.exponent(-1)
        if e is None:  # M = 1 or 2
            return 1
        return 1 if e == 0 else -1

    def is_even(self) -> bool:
        return self.sign() == 1

    # group structure
    def lift(self, M2: int) -> "DirichletCharacter":
        if M2 % self.M:
            raise ValueError("new modulus must be a multiple")
        if M2 == self.M:
            return self
        return DirichletCharacter.from_exponent_function(
            M2, lambda a: self.exponent(a) or 0, self.order
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = lcm(self.M, other.M)
        a, b = self.lift(M), other.lift(M)
        return DirichletCharacter(M, tuple(x + y for x, y in zip(a.exps, b.exps)))

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.M, tuple(-e for e in self.exps))

    conj = inverse

    def __pow__(self, n: int) -> "DirichletCharacter":
        return DirichletCharacter(self.M, tuple(n * e for e in self.exps))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        M = lcm(self.M, other.M)
        return self.lift(M).exps == other.lift(M).exps

    def __hash__(self):
        return hash((self.M, self.exps))

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exps)

    @property
    def conductor(self) -> int:
        for c in sorted(_divisors(self.M)):
            if all(
                self.exponent(a) == 0
                for a in range(1 + c, self.M + 1, c)
                if gcd(a, self.M) == 1
            ):
                return c
        return self.M

    def is_primitive(self) -> bool:
        return self.conductor == self.M

    def label(self) -> str:
        return f"{self.M}." + ".".join(str(e) for e in self.exps) if self.exps else f"{self.M}.1"

    def __repr__(self) -> str:
        return f"DirichletCharacter(M={self.M}, exps={self.exps}, order={self.order})"


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def primitive_characters(M: int) -> list[DirichletCharacter]:
    return [c for c in DirichletCharacter.all(M) if c.is_primitive()]


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D / n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    for q, e in factorize(n):
        if q == 2:
            if D % 2 == 0:
                return 0
            s = 1 if D % 8 in (1, 7) else -1
        else:
            r = D % q
            if r == 0:
                return 0
            s = 1 if pow(r, (q - 1) // 2, q) == 1 else -1
        result *= s**e
    return result


def is_fundamental(d: int) -> bool:
    """Whether -d is a negative fundamental discriminant."""
    if d <= 0:
        return False

    def squarefree(n):
        return all(e == 1 for _, e in factorize(n))

    if d % 4 == 3:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (1, 2) and squarefree(m)
    return False


def kronecker_character(d: int) -> DirichletCharacter:
    """The quadratic character of Q(sqrt(-d)), modulo d."""
    if not is_fundamental(d):
        raise ValueError(f"-{d} is not a fundamental discriminant")
    return DirichletCharacter.from_exponent_function(
        d, lambda a: 0 if kronecker_symbol(-d, a % d or d) == 1 else 1, 2
    )


@dataclass(frozen=True)
class ImagQuadField:
    """K = Q(sqrt(-d)) with integral basis {1, w}.

    ``trace_w`` and ``norm_w`` give the minimal polynomial w^2 - t w + n.
    """

    d: int

    def __post_init__(self):
        if not is_fundamental(self.d):
            raise ValueError(f"-{self.d} is not a fundamental discriminant")

    @property
    def disc(self) -> int:
        return -self.d

    @property
    def trace_w(self) -> int:
        return 1 if self.d % 4 == 3 else 0

    @property
    def norm_w(self) -> int:
        return (1 + self.d) // 4 if self.d % 4 == 3 else self.d // 4

    @property
    def unit_count(self) -> int:
        return {3: 6, 4: 4}.get(self.d, 2)

    @property
    def chi(self) -> DirichletCharacter:
        return kronecker_character(self.d)

    def norm(self, x: int, y: int) -> int:
        return x * x + self.trace_w * x * y + self.norm_w * y * y

    def trace(self, x: int, y: int) -> int:
        return 2 * x + self.trace_w * y

    def mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        x1, y1 = a
        x2, y2 = b
        t, n = self.trace_w, self.norm_w
        yy = y1 * y2
        return (x1 * x2 - n * yy, x1 * y2 + x2 * y1 + t * yy)

    def residue_units(self, q: int) -> list[tuple[int, int]]:
        """Representatives x + y w of (O_K / q O_K)^x for a prime power q."""
        p = factorize(q)[0][0]
        return [
            (x, y) for x in range(q) for y in range(q) if self.norm(x, y) % p
        ]


def splitting_type(p: int, K: ImagQuadField) -> str:
    if K.d % p == 0:
        return "ramified"
    return "split" if kronecker_symbol(-K.d, p) == 1 else "inert"


@dataclass(frozen=True)
class NormResidueCharacter:
    """chi o N on (O_K / p^n)^x, tabulated as exponents mod chi.order."""

    chi: DirichletCharacter
    K: ImagQuadField
    p: int
    n: int
    table: dict = field(repr=False, compare=False, hash=False)

    def exponent(self, x: int, y: int) -> int | None:
        q = self.p**self.n
        return self.table.get((x % q, y % q))

    def __call__(self, x: int, y: int) -> CyclotomicElement:
        e = self.exponent(x, y)
        if e is None:
            return CyclotomicElement.from_int(self.chi.order, 0)
        return CyclotomicElement.zeta(self.chi.order, e)

    @property
    def order(self) -> int:
        return self.chi.order

    def inverse(self) -> "NormResidueCharacter":
        return compose_norm(self.chi.inverse(), self.K)

    def __mul__(self, other: "NormResidueCharacter") -> "NormResidueCharacter":
        if (self.K, self.p, self.n) != (other.K, other.p, other.n):
            raise ValueError("incompatible residue rings")
        return compose_norm(self.chi * other.chi, self.K)

    def values_equal(self, other: "NormResidueCharacter") -> bool:
        """Pointwise equality of the two tables as roots of unity."""
        for key in self.table:
            a = CyclotomicElement.zeta(self.order, self.table[key])
            b = CyclotomicElement.zeta(other.order, other.table[key])
            if a != b:
                return False
        return set(self.table) == set(other.table)


def prime_power(q: int) -> tuple[int, int]:
    fs = factorize(q)
    if len(fs) != 1:
        raise ValueError(f"{q} is not a prime power")
    return fs[0]


def compose_norm(chi: DirichletCharacter, K: ImagQuadField) -> NormResidueCharacter:
    if chi.M == 1:
        raise ValueError("modulus must be a nontrivial prime power")
    p, n = prime_power(chi.M)
    q = chi.M
    table = {}
    for x, y in K.residue_units(q):
        table[(x, y)] = chi.exponent(K.norm(x, y))
    return NormResidueCharacter(chi, K, p, n, table)
