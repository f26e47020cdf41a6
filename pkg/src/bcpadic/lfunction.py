"""p-adic L-functions as Mellin transforms of overconvergent symbols.

For a U_p-eigen-symbol Psi with eigenvalue alpha the distribution
mu = Psi({0} - {oo}) restricts to a disc b + p^n Z_p as

    alpha^-n * Psi({oo -> b/p^n}) | (1 b; 0 p^n),

read in the local parameter z with x = b + p^n z.  A twist by a
character eta mod C (C prime to p) replaces Psi by the sum of
eta(a) Psi | (1 a; 0 C); its discs come from the paths
{oo -> u/(C p^n)} with u = a (mod C), u = b (mod p^n), re-centred at b.

Values are p-adic numbers with coordinates in Z[zeta_m]: one coordinate
in the ordinary case, two (x0 + x1 alpha) otherwise, always carried
together with the number of p-adic digits they are known to.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Sequence

from .characters import DirichletCharacter
from .cyclotomic import CyclotomicElement, euler_phi, lcm
from .modsym import ClassicalSymbol, algebraic_L_value, twisted_period_sum
from .overconvergent import FamilySymbol, OverconvergentSymbol
from .padic import PrecisionError, vp
from .quadnum import QuadNumber


# ---------------------------------------------------------------------------
# p-adic values with cyclotomic coordinates


def _int_coeffs(x: CyclotomicElement) -> list[int]:
    return [int(c) for c in x.coeffs()]


def _coeff_valuation(x: CyclotomicElement, p: int) -> int | None:
    vals = [vp(c, p) for c in _int_coeffs(x) if c]
    return min(vals) if vals else None


@dataclass(frozen=True)
class LValue:
    """sum_i comps[i] * alpha^i / p^scale, coordinates known modulo p^precision.

    Each stored coordinate is an element of Z[zeta_m] reduced modulo
    p^(precision + scale).  ``relation`` is (a_p, p^(k+1)) when alpha is
    kept symbolic; ``h`` is the valuation of alpha.
    """

    p: int
    comps: tuple[CyclotomicElement, ...]
    scale: int
    precision: int
    relation: tuple[int, int] | None = None
    h: Fraction = Fraction(0)

    def __post_init__(self):
        if self.precision + self.scale < 0:
            raise PrecisionError("no p-adic digits are known")

    @property
    def conductor(self) -> int:
        return self.comps[0].m

    @property
    def modulus(self) -> int:
        return self.p ** (self.precision + self.scale)

    def valuation(self) -> Fraction | None:
        """A lower bound for the valuation; None if the value is zero to the known digits."""
        best = None
        for i, c in enumerate(self.comps):
            v = _coeff_valuation(c, self.p)
            if v is None:
                continue
            v = Fraction(v - self.scale) + i * self.h
            best = v if best is None else min(best, v)
        if best is not None and best >= self.precision:
            return None
        return best

    def is_zero(self) -> bool:
        return self.valuation() is None

    def _rescaled(self, S: int, P: int) -> list[CyclotomicElement]:
        mod = self.p ** (P + S)
        shift = self.p ** (S - self.scale)
        return [CyclotomicElement(c.m, c._poly * shift, None).reduce_mod(mod) for c in self.comps]

    def agreement(self, other: "LValue") -> int:
        """Number of digits (absolute) to which two values agree, capped at the common precision."""
        if self.relation != other.relation or len(self.comps) != len(other.comps):
            raise ValueError("values live in different rings")
        S = max(self.scale, other.scale)
        P = min(self.precision, other.precision)
        best = P
        for x, y in zip(self._rescaled(S, P), other._rescaled(S, P)):
            v = _coeff_valuation(x - y, self.p)
            if v is not None:
                best = min(best, v - S)
        return best

    def agrees_with(self, other: "LValue") -> bool:
        return self.agreement(other) >= min(self.precision, other.precision)

    def coordinate_valuation(self) -> int | None:
        vals = [_coeff_valuation(c, self.p) for c in self.comps]
        vals = [v for v in vals if v is not None]
        return min(vals) - self.scale if vals else None

    def __mul__(self, other: "LValue") -> "LValue":
        if self.relation != other.relation:
            raise ValueError("values live in different rings")
        p = self.p
        cv1 = self.coordinate_valuation()
        cv2 = other.coordinate_valuation()
        cv1 = self.precision if cv1 is None else cv1
        cv2 = other.precision if cv2 is None else cv2
        P = min(self.precision + cv2, other.precision + cv1)
        S = self.scale + other.scale
        xs = [CyclotomicElement(c.m, c._poly, None) for c in self.comps]
        ys = [CyclotomicElement(c.m, c._poly, None) for c in other.comps]
        if self.relation is None:
            prods = [xs[0] * ys[0]]
        else:
            a, b = self.relation
            q = QuadNumber(xs[0], xs[1], a, b) * QuadNumber(ys[0], ys[1], a, b)
            prods = [q.x0, q.x1]
        P = max(P, -S)
        mod = p ** (P + S)
        return LValue(p, tuple(z.reduce_mod(mod) for z in prods), S, P, self.relation, self.h)

    def with_precision(self, P: int) -> "LValue":
        if P > self.precision:
            raise ValueError("cannot increase precision")
        mod = self.p ** (P + self.scale)
        return LValue(self.p, tuple(c.reduce_mod(mod) for c in self.comps), self.scale, P,
                      self.relation, self.h)

    def to_json(self) -> dict:
        coords = [_padic_cyclotomic_json(c, self.p, self.scale, self.precision) for c in self.comps]
        if self.relation is None:
            return coords[0]
        a, b = self.relation
        return {"alpha": {"trace": a, "norm": b}, "coordinates": coords}


def padic_json(x: int, p: int, order: int, precision: int) -> dict:
    """{prime, precision, order, digits}: value sum digits[i] p^(order + i) modulo p^precision."""
    n = max(precision - order, 0)
    x %= p**n if n else 1
    digits = []
    for _ in range(n):
        x, d = divmod(x, p)
        digits.append(d)
    return {"prime": p, "precision": precision, "order": order, "digits": digits}


def _padic_cyclotomic_json(c: CyclotomicElement, p: int, scale: int, precision: int) -> dict:
    return {"conductor": c.m,
            "coeffs": [padic_json(x, p, -scale, precision) for x in _int_coeffs(c)]}


def lvalue_from_exact(x, p: int, precision: int, *, alpha: int | None = None,
                      relation: tuple[int, int] | None = None, h: Fraction = Fraction(0)) -> LValue:
    """Reduce an exact element of Q(zeta)(alpha) to an LValue.

    ``x`` is a CyclotomicElement, a Fraction or a QuadNumber over either.
    With ``alpha`` given (a p-adic root known modulo p^(precision + scale)),
    the alpha-coordinate is substituted; otherwise ``relation`` keeps it.
    """
    if isinstance(x, QuadNumber):
        coords = [x.x0, x.x1]
        if relation is None and alpha is None:
            relation = (x.a, x.b)
    else:
        coords = [x]
    cyc = []
    for c in coords:
        if not isinstance(c, CyclotomicElement):
            c = CyclotomicElement.from_int(1, Fraction(c))
        cyc.append(c)
    m = 1
    for c in cyc:
        m = lcm(m, c.m)
    cyc = [c.lift_to(m) for c in cyc]
    s = 0
    for c in cyc:
        for q in c.coeffs():
            if q:
                s = max(s, vp(q.denominator, p) - vp(q.numerator, p))
    mod = p ** (precision + s)
    scaled = [CyclotomicElement(m, c._poly * p**s, None).reduce_mod(mod) for c in cyc]
    if len(scaled) == 2 and alpha is not None:
        combined = scaled[0] + scaled[1] * (alpha % mod)
        return LValue(p, (combined,), s, precision, None, h)
    if len(scaled) == 2:
        return LValue(p, tuple(scaled), s, precision, relation, h)
    return LValue(p, (scaled[0],), s, precision, None, h)


# ---------------------------------------------------------------------------
# disc data


@dataclass
class DiscMoments:
    """Local moments of a distribution on b + p^n Z_p in the parameter z, x = b + p^n z.

    values[c][r][i]: coordinate c (1 or 2), power-basis index r of the
    twist's cyclotomic field, moment i; true values are these over p^scale.
    precision[i] is the number of known digits of moment i.
    """

    p: int
    n: int
    centre: int
    values: list[list[list[int]]]
    scale: int
    modulus: int
    precision: list[int]


def _series_inverse(a: Sequence[int], mod: int) -> list[int]:
    n = len(a)
    inv0 = pow(a[0], -1, mod)
    out = [inv0] + [0] * (n - 1)
    for t in range(1, n):
        s = sum(a[i] * out[t - i] for i in range(1, t + 1))
        out[t] = (-s * inv0) % mod
    return out


@dataclass
class _Term:
    coeff: tuple[int, ...]  # power-basis coordinates of eta(a) in Q(zeta_order)
    symbol: OverconvergentSymbol
    shift: int  # a in Psi | (1 a; 0 C)


class PadicLFunction:
    """The Mellin transform of a (possibly twisted) overconvergent eigen-symbol."""

    def __init__(self, p: int, terms: list[_Term], C: int, order: int, provenance: str, depth1: bool = True):
        if not terms:
            raise ValueError("need at least one term")
        self.p = p
        self.terms = terms
        self.C = C
        self.order = order  # cyclotomic field Q(zeta_order) holding the twist values
        self.provenance = provenance
        s0 = terms[0].symbol
        self.ordinary = s0.ordinary
        self.k = s0.k
        self.relation = None if s0.ordinary else s0.alpha
        for t in terms:
            if t.symbol.p != p or t.symbol.ordinary != self.ordinary:
                raise ValueError("terms must share p and the type of eigenvalue")
            if self.ordinary and t.symbol.alpha % p ** min(t.symbol.W, s0.W) != s0.alpha % p ** min(t.symbol.W, s0.W):
                raise ValueError("terms must share the eigenvalue")
            if not self.ordinary and t.symbol.alpha != s0.alpha:
                raise ValueError("terms must share the eigenvalue")
        if self.ordinary:
            self.h = Fraction(0)
            self.delta = Fraction(0)
        else:
            a, b = self.relation
            self.h = _slope(a, b, p)
            disc = a * a - 4 * b
            self.delta = Fraction(vp(disc, p), 2) if disc else Fraction(10**6)
        self._cache: dict = {}
        self.M = min(t.symbol.M for t in terms)
        self.discs = {b: self.disc(1, b) for b in range(1, p)} if depth1 else {}

    # ------------------------------------------------------------------
    @property
    def alpha(self):
        return self.terms[0].symbol.alpha

    def _term_disc(self, term: _Term, n: int, b: int, R: int):
        psi = term.symbol
        p, C = self.p, self.C
        mod = p**psi.W
        pn = p**n
        c = ((b - term.shift) * pow(C, -1, pn)) % pn
        u = term.shift + c * C
        t = (u - b) // pn
        assert (u - b) % pn == 0
        raw = psi.evaluate(None, Fraction(u, C * pn))
        out = []
        for comp in raw:
            # z' = t + C z, moments of z'
            mom = []
            for i in range(R):
                acc = 0
                for l in range(i + 1):
                    acc += comb(i, l) * pow(t, i - l, mod) * pow(C, l, mod) * comp[l]
                mom.append(acc % mod)
            out.append(mom)
        scale = psi.scale
        if self.ordinary:
            inv = pow(psi.alpha, -n, mod)
            out = [[x * inv % mod for x in out[0]]]
        else:
            a_p, bb = psi.alpha
            x0, x1 = out
            for _ in range(n):
                # times (a_p - alpha) = beta
                y0 = [(a_p * u0 + bb * u1) % mod for u0, u1 in zip(x0, x1)]
                y1 = [(-u0) % mod for u0 in x0]
                x0, x1 = y0, y1
            out = [x0, x1]
            scale += n * (self.k + 1)
        prec = []
        for i in range(R):
            P = psi.precision[i] if i < len(psi.precision) else 0
            if not self.ordinary:
                P = math.ceil(P - n * self.h - self.delta)
            prec.append(min(P, psi.W - scale))
        return out, scale, psi.W, prec

    def disc(self, n: int, b: int, R: int | None = None) -> DiscMoments:
        """Local moments of the restriction to b + p^n Z_p (b a unit)."""
        p = self.p
        if b % p == 0:
            raise ValueError("discs of Z_p^x need a unit centre")
        if n < 1:
            raise ValueError("depth must be at least 1")
        R = self.M if R is None else min(R, self.M)
        b %= p**n
        key = (n, b, R)
        if key in self._cache:
            return self._cache[key]
        pieces = [(t, self._term_disc(t, n, b, R)) for t in self.terms]
        S = max(sc for _, (_, sc, _, _) in pieces)
        Wc = min(W + S - sc for _, (_, sc, W, _) in pieces)
        mod = p**Wc
        ncomp = 1 if self.ordinary else 2
        nb = euler_phi(self.order)
        values = [[[0] * R for _ in range(nb)] for _ in range(ncomp)]
        prec = [min(pr[i] for _, (_, _, _, pr) in pieces) for i in range(R)]
        for term, (vals, sc, _, _) in pieces:
            shift = p ** (S - sc)
            for c in range(ncomp):
                for r, e in enumerate(term.coeff):
                    if e:
                        row = values[c][r]
                        for i in range(R):
                            row[i] = (row[i] + e * shift * vals[c][i]) % mod
        dm = DiscMoments(p, n, b, values, S, mod, prec)
        self._cache[key] = dm
        return dm

    # ------------------------------------------------------------------
    def total_mass(self) -> LValue:
        """Moment zero of the restriction to Z_p^x."""
        return self.integrate_locally_constant(lambda b: 1, 1)

    def integrate_locally_constant(self, f, n: int, j: int = 0, conductor: int = 1) -> LValue:
        return integrate_locally_constant(self, f, n, j, conductor)

    def __add__(self, other: "PadicLFunction") -> "PadicLFunction":
        if (self.p, self.C, self.order) != (other.p, other.C, other.order):
            raise ValueError("incompatible L-functions")
        return PadicLFunction(self.p, self.terms + other.terms, self.C, self.order,
                              f"{self.provenance} + {other.provenance}")

    def scaled(self, c: int) -> "PadicLFunction":
        terms = [_Term(tuple(c * x for x in t.coeff), t.symbol, t.shift) for t in self.terms]
        return PadicLFunction(self.p, terms, self.C, self.order, f"{c} * ({self.provenance})")


def integrate_locally_constant(Lp, f, n: int, j: int = 0, conductor: int = 1) -> LValue:
    """sum over units b mod p^n of f(b) * int_{b + p^n Z_p} x^j, with f(b) = zeta_conductor^e or None."""
    p = Lp.p
    pn = p**n
    R = j + 1
    discs = [Lp.disc(n, b, R) for b in range(1, pn) if b % p]
    S = max(d.scale for d in discs)
    P = min(min(d.precision[i] + n * i for i in range(R)) for d in discs)
    mod = p ** (P + S)
    nb = euler_phi(Lp.order)
    L = lcm(conductor, Lp.order)
    ncomp = 1 if Lp.ordinary else 2
    counts = [[0] * L for _ in range(ncomp)]
    for d in discs:
        e = f(d.centre)
        if e is None:
            continue
        e = e % conductor
        shift = p ** (S - d.scale)
        weights = [comb(j, i) * pow(d.centre, j - i, mod) * pn**i for i in range(R)]
        for c in range(ncomp):
            for r in range(nb):
                mom = d.values[c][r]
                v = sum(w * x for w, x in zip(weights, mom)) * shift % mod
                if v:
                    idx = (e * (L // conductor) + r * (L // Lp.order)) % L
                    counts[c][idx] += v
    comps = tuple(CyclotomicElement.from_power_counts(L, cnt).reduce_mod(mod) for cnt in counts)
    return LValue(p, comps, S, P, Lp.relation, Lp.h)


def _slope(a: int, b: int, p: int) -> Fraction:
    """Valuation of a root alpha of X^2 - a X + b with the smaller slope."""
    vb = vp(b, p)
    if a == 0:
        return Fraction(vb, 2)
    va = vp(a, p)
    return Fraction(min(va, Fraction(vb, 2)))


def mellin(psi: OverconvergentSymbol) -> PadicLFunction:
    """Psi({0} - {oo}) restricted to Z_p^x, stored per residue disc."""
    if psi.spec.is_family:
        raise ValueError("use family_mellin for families")
    return PadicLFunction(psi.p, [_Term((1,), psi, 0)], 1, 1, "mellin")


def twisted_mellin(psi: OverconvergentSymbol, eta: DirichletCharacter) -> PadicLFunction:
    """sum over a mod C of eta(a) * Mellin(Psi | (1 a; 0 C))."""
    C = eta.M
    if gcd(C, psi.p) != 1:
        raise ValueError("the twisting modulus must be prime to p")
    if C == 1:
        return PadicLFunction(psi.p, [_Term((1,), psi, 0)], 1, 1, "mellin")
    o = eta.order
    terms = []
    for a in range(C):
        if gcd(a, C) != 1:
            continue
        v = eta(a)
        if v.is_zero():
            continue
        coeff = tuple(_int_coeffs(v.lift_to(o) if v.m != o else v))
        terms.append(_Term(coeff, psi, a))
    return PadicLFunction(psi.p, terms, C, o, f"twisted by {eta.label()}")


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class EvaluationResult:
    chi: DirichletCharacter
    n: int
    j: int
    value: LValue
    precision: int
    exceptional_factor: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"character": self.chi.label(), "conductor": self.chi.M, "j": self.j,
                "precision": self.precision, "value": self.value.to_json(),
                "exceptional_factor": self.exceptional_factor}


def character_depth(chi: DirichletCharacter, p: int) -> int:
    n, M = 0, chi.M
    while M % p == 0:
        M //= p
        n += 1
    if M != 1:
        raise ValueError("the character modulus must be a power of p")
    return n


def evaluate(Lp, chi: DirichletCharacter, j: int = 0) -> EvaluationResult:
    """int over Z_p^x of chi(x) x^j, from the depth-n disc moments."""
    p = Lp.p
    n = character_depth(chi, p)
    if n < 1:
        raise ValueError("the character must have conductor p^n with n >= 1")
    if not 0 <= j <= Lp.k:
        raise ValueError("j must lie in [0, k]")
    value = Lp.integrate_locally_constant(chi.exponent, n, j, chi.order)
    report = {"factor": 1, "reason": "conductor divisible by p"}
    return EvaluationResult(chi, n, j, value, value.precision, report)


def precision_overhead(Lp) -> int:
    """The constant c in N' >= N - ceil(n h) - j - c."""
    return math.ceil(Lp.delta) if not Lp.ordinary else 0


# ---------------------------------------------------------------------------
# the oracle and the interpolation constant


def _alpha_exact(relation: tuple[int, int]) -> QuadNumber:
    a, b = relation
    return QuadNumber(Fraction(0), Fraction(1), a, b)


def mazur_tate_oracle(phi: ClassicalSymbol, relation: tuple[int, int], chi: DirichletCharacter,
                      j: int = 0, eta: DirichletCharacter | None = None) -> QuadNumber:
    """alpha^-n sum over u mod C p^n of (chi eta)(u) phi({oo -> u/(C p^n)})((u + C p^n z)^j), exactly.

    ``phi`` is the p-stabilised symbol (values in Q(alpha)) and
    ``relation`` = (a_p, p^(k+1)).
    """
    p = _prime_of(chi.M)
    n = character_depth(chi, p)
    C = 1 if eta is None else eta.M
    m = C * p**n
    psi = chi.lift(m) if eta is None else chi.lift(m) * eta.lift(m)
    B = twisted_period_sum(phi, psi, j, m)
    alpha_inv = _alpha_exact(relation).inverse()
    out = alpha_inv**n * B
    if not isinstance(out, QuadNumber):
        out = QuadNumber(out, Fraction(0), *relation)
    return out


def _prime_of(q: int) -> int:
    for d in range(2, q + 1):
        if q % d == 0:
            return d
    raise ValueError("modulus 1 has no prime")


def interpolation_constant(relation: tuple[int, int], chi: DirichletCharacter, j: int,
                           eta: DirichletCharacter | None = None) -> QuadNumber:
    """(C p^n)^(j+1) / (tau((chi eta)^-1) alpha^n) as an exact element of Q(zeta)(alpha)."""
    from .gauss import tau_q

    p = _prime_of(chi.M)
    n = character_depth(chi, p)
    C = 1 if eta is None else eta.M
    m = C * p**n
    psi = chi.lift(m) if eta is None else chi.lift(m) * eta.lift(m)
    tau = tau_q(psi.inverse()).value
    alpha_n = _alpha_exact(relation) ** n
    return alpha_n.inverse() * (tau.inverse() * Fraction(m) ** (j + 1))


def interpolation_holds(phi_alpha: ClassicalSymbol, phi: ClassicalSymbol, relation: tuple[int, int],
                        chi: DirichletCharacter, j: int = 0, eta: DirichletCharacter | None = None) -> bool:
    """oracle(phi_alpha) == constant * algebraic L-value(phi), exactly."""
    lhs = mazur_tate_oracle(phi_alpha, relation, chi, j, eta)
    m = chi.M * (1 if eta is None else eta.M)
    psi = chi.lift(m) if eta is None else chi.lift(m) * eta.lift(m)
    rhs = interpolation_constant(relation, chi, j, eta) * algebraic_L_value(phi, psi, j)
    return lhs == rhs


# ---------------------------------------------------------------------------
# admissibility


@dataclass
class AdmissibilityReport:
    h: Fraction
    depths: list[int]
    minima: list[Fraction | None]  # per depth: least valuation of int_{b+p^n}(x-b)^j, j <= floor(h)
    best_constant: Fraction | None  # the largest c with v >= c - n h on all data (None: no data)
    violations: list[int]  # depths where the bound drifts below the depth-1 constant by more than the slack
    slack: Fraction

    @property
    def admissible(self) -> bool:
        return not self.violations


def _disc_valuation(d: DiscMoments, i: int, h_alpha: Fraction, p: int) -> Fraction | None:
    best = None
    for c, comp in enumerate(d.values):
        for row in comp:
            x = row[i] % p ** (d.precision[i] + d.scale) if d.precision[i] + d.scale > 0 else 0
            if x:
                v = Fraction(vp(x, p) - d.scale) + c * h_alpha
                best = v if best is None else min(best, v)
    return best


def admissibility_diagnostic(Lp, h, depths: Sequence[int] = (1, 2, 3, 4),
                             slack: Fraction = Fraction(1, 2)) -> AdmissibilityReport:
    """Test v_p(int_{b + p^n Z_p} (x - b)^j dmu) >= c - n h for j <= floor(h).

    The constant is fixed by the shallowest depth with data; a deeper
    depth whose bound falls more than ``slack`` digits below it is a
    violation.  Moments that
    vanish to their known precision impose nothing.
    """
    h = Fraction(h)
    p = Lp.p
    jmax = math.floor(h)
    minima: list[Fraction | None] = []
    for n in depths:
        best = None
        for b in range(1, p**n):
            if b % p == 0:
                continue
            d = Lp.disc(n, b, jmax + 1)
            for j in range(jmax + 1):
                v = _disc_valuation(d, j, Lp.h, p)
                if v is None:
                    continue
                v += n * j
                best = v if best is None else min(best, v)
        minima.append(best)
    shifted = [m + n * h for m, n in zip(minima, depths) if m is not None]
    best_c = min(shifted) if shifted else None
    violations = []
    if shifted:
        ref = shifted[0]
        for m, n in zip(minima, depths):
            if m is not None and m + n * h < ref - slack:
                violations.append(n)
    return AdmissibilityReport(h, list(depths), minima, best_c, violations, slack)


# ---------------------------------------------------------------------------
# products of L-functions


class ProductLFunction:
    """The convolution of two measures on Z_p^x: its Mellin values are products."""

    def __init__(self, first: PadicLFunction, second: PadicLFunction, provenance: str = "product"):
        if first.p != second.p or first.relation != second.relation:
            raise ValueError("factors must share p and the eigenvalue ring")
        if first.order > 2 or second.order > 2:
            raise ValueError("convolution is implemented for rational twists only")
        self.p = first.p
        self.factors = (first, second)
        self.ordinary = first.ordinary
        self.relation = first.relation
        self.h = first.h + second.h
        self.k = min(first.k, second.k)
        self.order = 1
        self.provenance = provenance
        self._cache: dict = {}

    def integrate_locally_constant(self, f, n: int, j: int = 0, conductor: int = 1) -> LValue:
        """The same integral computed from the convolution's own disc moments."""
        return integrate_locally_constant(self, f, n, j, conductor)

    def evaluate(self, chi: DirichletCharacter, j: int = 0) -> EvaluationResult:
        a = evaluate(self.factors[0], chi, j)
        b = evaluate(self.factors[1], chi, j)
        v = a.value * b.value
        return EvaluationResult(chi, a.n, j, v, v.precision, a.exceptional_factor)

    def disc(self, n: int, b: int, R: int) -> DiscMoments:
        """Moments of the convolution on b + p^n Z_p from the depth-n discs of the factors."""
        p = self.p
        pn = p**n
        b %= pn
        key = (n, b, R)
        if key in self._cache:
            return self._cache[key]
        f, g = self.factors
        units = [a for a in range(1, pn) if a % p]
        Df = {a: f.disc(n, a, R) for a in units}
        Dg = {a: g.disc(n, a, R) for a in units}
        sf = max(d.scale for d in Df.values())
        sg = max(d.scale for d in Dg.values())
        vf = _min_coord_val(Df.values(), R, p)
        vg = _min_coord_val(Dg.values(), R, p)
        Pf = [min(d.precision[i] for d in Df.values()) for i in range(R)]
        Pg = [min(d.precision[i] for d in Dg.values()) for i in range(R)]
        prec = [min(min(Pf[:i + 1]) + vg, min(Pg[:i + 1]) + vf) for i in range(R)]
        S = sf + sg
        mod = p ** (max(prec) + S + 1)
        ncomp = 1 if self.ordinary else 2
        acc = [[0] * R for _ in range(ncomp)]
        for a1 in units:
            a2 = b * pow(a1, -1, pn) % pn
            d1, d2 = Df[a1], Dg[a2]
            x = _rescale_rows(d1, sf, mod)
            y = _rescale_rows(d2, sg, mod)
            e = (a1 * a2 - b) // pn
            for i in range(R):
                # ((x y - b)/p^n)^i with x = a1 + p^n s, y = a2 + p^n t
                poly = _conv_poly(e, a1, a2, pn, i)
                for (ds, dt), coef in poly.items():
                    if ncomp == 1:
                        acc[0][i] += coef * x[0][ds] * y[0][dt]
                    else:
                        aa, bb = self.relation
                        u0, u1 = x[0][ds], x[1][ds]
                        w0, w1 = y[0][dt], y[1][dt]
                        t = u1 * w1
                        acc[0][i] += coef * (u0 * w0 - bb * t)
                        acc[1][i] += coef * (u0 * w1 + u1 * w0 + aa * t)
        values = [[[v % mod for v in row]] for row in acc]
        dm = DiscMoments(p, n, b, values, S, mod, prec)
        self._cache[key] = dm
        return dm


def _rescale_rows(d: DiscMoments, S: int, mod: int) -> list[list[int]]:
    shift = d.p ** (S - d.scale)
    return [[x * shift % mod for x in comp[0]] for comp in d.values]


def _min_coord_val(discs, R: int, p: int) -> int:
    best = None
    for d in discs:
        for comp in d.values:
            for row in comp:
                for i in range(R):
                    x = row[i]
                    if x:
                        v = vp(x, p) - d.scale
                        best = v if best is None else min(best, v)
    return 0 if best is None else best


def _conv_poly(e: int, a1: int, a2: int, pn: int, i: int) -> dict[tuple[int, int], int]:
    """Coefficients of (e + a2 s + a1 t + p^n s t)^i as a polynomial in s, t."""
    poly = {(0, 0): 1}
    lin = {(0, 0): e, (1, 0): a2, (0, 1): a1, (1, 1): pn}
    for _ in range(i):
        new: dict[tuple[int, int], int] = {}
        for (s1, t1), c1 in poly.items():
            for (s2, t2), c2 in lin.items():
                if c2:
                    k = (s1 + s2, t1 + t2)
                    new[k] = new.get(k, 0) + c1 * c2
        poly = new
    return poly


# ---------------------------------------------------------------------------
# families


@dataclass
class FamilyMellin:
    """Depth-one disc moments of a family as power series in w.

    ``discs`` holds the moments of Psi_w({oo -> b/p}) and ``alpha`` the
    eigenvalue series.  The transform is their quotient; it is kept
    unexpanded so that evaluating at a weight divides by alpha(k) itself
    rather than by a truncation of 1/alpha(w).
    """

    p: int
    k0: int
    Mw: int
    modulus: int
    scale: int
    discs: dict[int, list[list[int]]]  # b -> moment j -> coefficients in w
    alpha: tuple[int, ...]

    def _powers(self, k: int) -> list[int]:
        w = k - self.k0
        if w % (self.p - 1):
            raise ValueError("weight outside the residue disc")
        return [pow(w, t, self.modulus) for t in range(self.Mw)]

    def specialise(self, k: int) -> dict[int, list[int]]:
        pw = self._powers(k)
        a = sum(c * x for c, x in zip(self.alpha, pw)) % self.modulus
        inv = pow(a, -1, self.modulus)
        return {b: [sum(c * x for c, x in zip(mom, pw)) * inv % self.modulus for mom in moms]
                for b, moms in self.discs.items()}

    def series(self) -> dict[int, list[list[int]]]:
        """alpha(w)^-1 times the disc moments, truncated at w^Mw."""
        inv = _series_inverse(list(self.alpha), self.modulus)
        out = {}
        for b, moms in self.discs.items():
            rows = []
            for mom in moms:
                prod = [0] * self.Mw
                for s_, x in enumerate(mom):
                    if x:
                        for t in range(self.Mw - s_):
                            prod[s_ + t] += x * inv[t]
                rows.append([v % self.modulus for v in prod])
            out[b] = rows
        return out


def family_mellin(fam: FamilySymbol, R: int | None = None) -> FamilyMellin:
    """Disc moments of Psi_w({oo -> b/p}) for each unit b mod p, with alpha(w)."""
    psi = fam.symbol
    p, Mw = psi.p, psi.spec.Mw
    R = psi.M if R is None else min(R, psi.M)
    mod = p**psi.W
    discs = {}
    for b in range(1, p):
        flat = psi.evaluate(None, Fraction(b, p))[0]
        discs[b] = [[x % mod for x in flat[j * Mw:(j + 1) * Mw]] for j in range(R)]
    return FamilyMellin(p, psi.spec.k0, Mw, mod, psi.scale, discs, tuple(fam.alpha))


def specialised_disc_moments(Lp: PadicLFunction, R: int) -> dict[int, list[int]]:
    """Depth-one disc moments (single coordinate, untwisted) as integers at the L-function's scale."""
    out = {}
    for b in range(1, Lp.p):
        d = Lp.disc(1, b, R)
        out[b] = list(d.values[0][0])
    return out


def mellin_square_holds(fam: FamilySymbol, k: int, R: int | None = None) -> bool:
    """Specialise-then-Mellin equals Mellin-then-specialise at weight k, to the weight-k ledger.

    At k = k0 the ledger is the full moment precision; elsewhere the
    truncation in w caps it.
    """
    from .overconvergent import specialise_family

    fm = family_mellin(fam, R)
    R = len(next(iter(fm.discs.values())))
    top = fm.specialise(k)
    Lp = mellin(specialise_family(fam, k))
    p = fm.p
    for b in range(1, p):
        d = Lp.disc(1, b, R)
        if d.scale != fm.scale:
            return False
        for i, (x, y) in enumerate(zip(top[b], d.values[0][0])):
            if (x - y) % p ** (d.precision[i] + d.scale):
                return False
    return True


# ---------------------------------------------------------------------------
# packaged forms


@dataclass(frozen=True)
class FormLifts:
    """Plus and minus p-stabilised symbols of a form and their overconvergent lifts."""

    label: str
    p: int
    a_p: int
    k: int
    classical: tuple[ClassicalSymbol, ClassicalSymbol]
    stabilised: tuple[ClassicalSymbol, ClassicalSymbol]
    lifts: tuple[OverconvergentSymbol, OverconvergentSymbol]

    @property
    def relation(self) -> tuple[int, int]:
        return (self.a_p, self.p ** (self.k + 1))


def check_prime(p: int, level: int | None = None) -> None:
    if p < 3 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"p = {p} is not supported: p must be an odd prime")
    if level is not None and level % p == 0:
        raise ValueError(f"p = {p} divides the level {level}")


def form_lifts(label: str, p: int, M: int, N: int) -> FormLifts:
    from .eigenforms import DATA_ENV

    return _form_lifts(label, p, M, N, os.environ.get(DATA_ENV))


@lru_cache(maxsize=16)
def _form_lifts(label: str, p: int, M: int, N: int, _data: str | None) -> FormLifts:
    from .eigenforms import form_symbols, load_eigenform
    from .modsym import p_stabilise
    from .overconvergent import lift_noncritical

    f = load_eigenform(label)
    check_prime(p, f.level)
    S = form_symbols(f)
    a_p = f.a(p)
    stabs = tuple(p_stabilise(phi, p, a_p) for phi in (S.plus, S.minus))
    lifts = tuple(lift_noncritical(s, M, N) for s in stabs)
    return FormLifts(label, p, a_p, f.k, (S.plus, S.minus),
                     tuple(s.symbol for s in stabs), lifts)


def form_lfunction(lifts: FormLifts, eta: DirichletCharacter | None = None) -> PadicLFunction:
    """Mellin transform of Psi^+ + Psi^-, twisted by eta when given."""
    if eta is None or eta.M == 1:
        L = mellin(lifts.lifts[0]) + mellin(lifts.lifts[1])
    else:
        L = twisted_mellin(lifts.lifts[0], eta) + twisted_mellin(lifts.lifts[1], eta)
    L.provenance = f"{lifts.label} p={lifts.p}" + (f" twisted by {eta.label()}" if eta is not None else "")
    return L


def form_oracle(lifts: FormLifts, chi: DirichletCharacter, j: int = 0,
                eta: DirichletCharacter | None = None) -> QuadNumber:
    return sum((mazur_tate_oracle(s, lifts.relation, chi, j, eta) for s in lifts.stabilised[1:]),
               mazur_tate_oracle(lifts.stabilised[0], lifts.relation, chi, j, eta))


def form_algebraic_value(lifts: FormLifts, psi: DirichletCharacter, j: int = 0):
    """Lambda(f, psi-bar, j+1) over the period of matching sign, from both signed symbols."""
    return algebraic_L_value(lifts.classical[0], psi, j) + algebraic_L_value(lifts.classical[1], psi, j)
