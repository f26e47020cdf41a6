"""Exact Gauss sums over Q and over an imaginary quadratic field.

Over K the additive character is a -> exp(2 pi i Tr(a / (q * delta)))
where q = p^n and delta generates the different.  The choice of delta is
a convention; ``SQRT_CONVENTIONS`` lists the ones on offer:

``"sqrt(-d)"``    delta = sqrt(-d)
``"-sqrt(-d)"``   delta = -sqrt(-d)
``"unit"``        delta = 1 (the trace form without the different)

``hasse_davenport_report`` tells which of them satisfy the product
identity for a given character.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .characters import (
    DirichletCharacter,
    ImagQuadField,
    NormResidueCharacter,
    compose_norm,
)
from .cyclotomic import CyclotomicElement, lcm

SQRT_CONVENTIONS = ("sqrt(-d)", "-sqrt(-d)", "unit")
DEFAULT_CONVENTION = "sqrt(-d)"


@dataclass(frozen=True)
class GaussSumResult:
    description: str
    value: CyclotomicElement
    certificate: Fraction  # tau * conj(tau)

    def to_json(self) -> dict:
        return {
            "character": self.description,
            "value": self.value.to_json(),
            "certificate": str(self.certificate),
        }


def _certificate(v: CyclotomicElement) -> Fraction:
    c = (v * v.conj()).rational_value()
    assert c is not None, "tau * conj(tau) must be rational"
    return c


def tau_q(chi: DirichletCharacter) -> GaussSumResult:
    """sum over a mod M of chi(a) zeta_M^a."""
    M, o = chi.M, chi.order
    L = lcm(o, M)
    counts = [0] * L
    for a in range(M):
        e = chi.exponent(a)
        if e is None:
            continue
        counts[(e * (L // o) + a * (L // M)) % L] += 1
    v = CyclotomicElement.from_power_counts(L, counts)
    return GaussSumResult(chi.label(), v, _certificate(v))


def _delta(K: ImagQuadField, convention: str) -> tuple[int, int]:
    # sqrt(-d) = 2w - Tr(w) in the basis {1, w}
    if convention == "sqrt(-d)":
        return (-K.trace_w, 2)
    if convention == "-sqrt(-d)":
        return (K.trace_w, -2)
    if convention == "unit":
        return (1, 0)
    raise ValueError(f"unknown convention {convention!r}; choose from {SQRT_CONVENTIONS}")


def additive_exponent(K: ImagQuadField, a: tuple[int, int], q: int, convention: str) -> Fraction:
    """Tr(a / (q delta)) as an exact rational."""
    dx, dy = _delta(K, convention)
    nd = K.norm(dx, dy)
    # a / delta = a * conj(delta) / N(delta)
    conj = (dx + K.trace_w * dy, -dy)
    x, y = K.mul(a, conj)
    return Fraction(K.trace(x, y), q * nd)


def tau_K(eta: NormResidueCharacter, convention: str = DEFAULT_CONVENTION) -> GaussSumResult:
    """sum over a in (O_K / p^n)^x of eta(a) exp(2 pi i Tr(a / (p^n delta)))."""
    K, q, o = eta.K, eta.p**eta.n, eta.order
    dx, dy = _delta(K, convention)
    nd = abs(K.norm(dx, dy))
    L = lcm(o, q * nd)
    counts = [0] * L
    for (x, y), e in eta.table.items():
        if e is None:
            continue
        t = additive_exponent(K, (x, y), q, convention)
        assert (L % t.denominator) == 0
        counts[(e * (L // o) + t.numerator * (L // t.denominator)) % L] += 1
    v = CyclotomicElement.from_power_counts(L, counts)
    desc = f"({eta.chi.label()})oN over Q(sqrt(-{K.d})) [{convention}]"
    return GaussSumResult(desc, v, _certificate(v))


@dataclass(frozen=True)
class HasseDavenportResult:
    holds: bool
    lhs: CyclotomicElement
    rhs: CyclotomicElement
    convention: str


def hasse_davenport_check(
    chi: DirichletCharacter, K: ImagQuadField, convention: str = DEFAULT_CONVENTION
) -> HasseDavenportResult:
    """tau_K(chi o N) tau(chi_K)  versus  tau(chi) tau(chi chi_K)."""
    if not chi.is_primitive() or chi.M == 1:
        raise ValueError("needs a primitive character of nontrivial p-power conductor")
    if K.d % _prime_of(chi.M) == 0:
        raise ValueError("p must not divide the discriminant")
    chiK = K.chi
    lhs = tau_K(compose_norm(chi, K), convention).value * tau_q(chiK).value
    rhs = tau_q(chi).value * tau_q(chi * chiK).value
    return HasseDavenportResult(lhs == rhs, lhs, rhs, convention)


def hasse_davenport_report(chi: DirichletCharacter, K: ImagQuadField) -> dict[str, bool]:
    """For each additive-character convention, whether the identity holds."""
    return {c: hasse_davenport_check(chi, K, c).holds for c in SQRT_CONVENTIONS}


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            return p
    raise ValueError("no prime factor")


def norm_identity_holds(chi: DirichletCharacter) -> bool:
    """tau(chi) tau(chi^-1) == chi(-1) * conductor, for primitive chi."""
    lhs = tau_q(chi).value * tau_q(chi.inverse()).value
    return lhs == chi.sign() * chi.conductor


def galois_equivariance_holds(chi: DirichletCharacter, s: int) -> bool:
    """sigma_s(tau(chi)) == conj(chi(s)) tau(chi).

    sigma_s sends zeta_M to zeta_M^s and fixes the values of chi; such an
    automorphism exists when s = 1 mod gcd(M, order).
    """
    t = tau_q(chi).value
    lhs = t.galois(galois_lift(s, chi.M, chi.order, t.m))
    rhs = chi(s).conj() * t
    return lhs == rhs


def galois_lift(s: int, M: int, o: int, L: int) -> int:
    """t mod L with t = s mod M and t = 1 mod o."""
    if gcd(s, M) != 1:
        raise ValueError("s must be a unit mod M")
    for t in range(s % M, L + M, M):
        if t % o == 1 % o and gcd(t, L) == 1:
            return t % L
    raise ValueError("s does not fix the character values")
