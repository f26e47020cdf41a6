"""Base change of a rational newform to an imaginary quadratic field.

Over K the cyclotomic p-adic L-function of the base change is taken to
be the product L_p(f) * L_p^{chi_K}(f) of two one-variable L-functions,
the second twisted by the quadratic character of K.  The Bianchi
interpolation formula for that product is then a prediction, checked
against the product character by character.

Periods: Omega_F = (-1)^k #O_K^x Omega^+ Omega^- tau(chi_K) / 2, so
constants over K are handled as exact elements of Q(zeta)(alpha) times
1 / (Omega^+ Omega^-).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import DirichletCharacter, ImagQuadField, compose_norm, splitting_type
from .cyclotomic import CyclotomicElement
from .eigenforms import Eigenform
from .gauss import DEFAULT_CONVENTION, tau_K, tau_q
from .modsym import ClassicalSymbol
from .lfunction import (
    AdmissibilityReport,
    FormLifts,
    LValue,
    PadicLFunction,
    ProductLFunction,
    _slope,
    admissibility_diagnostic,
    character_depth,
    evaluate,
    form_algebraic_value,
    form_lfunction,
    interpolation_constant,
    lvalue_from_exact,
)
from .quadnum import QuadNumber


# ---------------------------------------------------------------------------
# eigenvalues and slopes


@dataclass(frozen=True)
class BaseChangeData:
    form: str
    p: int
    K: ImagQuadField
    splitting: str
    k: int
    a_p: int
    h: Fraction  # slope of alpha_p(f)
    alphas: tuple[QuadNumber, ...]  # alpha at each prime above p
    slopes: tuple[Fraction, ...]  # v_p of each of them
    small_slope: bool
    critical: bool

    @property
    def unit_count(self) -> int:
        return self.K.unit_count

    @property
    def discriminant(self) -> int:
        return self.K.disc

    @property
    def alpha_pO(self) -> QuadNumber:
        """alpha of the ideal p O_K: alpha^2 in every splitting type."""
        out = QuadNumber(Fraction(1), Fraction(0), self.a_p, self.p ** (self.k + 1))
        e = 2 if self.splitting == "ramified" else 1
        for a in self.alphas:
            out = out * a**e
        return out

    def to_json(self) -> dict:
        return {
            "form": self.form, "p": self.p, "discriminant": self.K.disc,
            "splitting": self.splitting, "k": self.k, "a_p": self.a_p,
            "slope": str(self.h), "slopes_over_K": [str(s) for s in self.slopes],
            "alphas_over_K": [_quad_json(a) for a in self.alphas],
            "small_slope": self.small_slope, "critical": self.critical,
            "unit_count": self.unit_count,
        }


def label_key(label: str) -> tuple[int, ...]:
    """Numeric sort key for character labels such as 25.3."""
    return tuple(int(x) for x in label.split("."))


def _quad_json(q: QuadNumber) -> dict:
    return {"x0": str(q.x0), "x1": str(q.x1), "trace": q.a, "norm": q.b}


def transfer(form: Eigenform, p: int, K: ImagQuadField) -> BaseChangeData:
    """Eigenvalues and slopes of the base change at the primes above p."""
    if form.level % p == 0:
        raise ValueError("p must not divide the level")
    k, a_p = form.k, form.a(p)
    b = p ** (k + 1)
    alpha = QuadNumber(Fraction(0), Fraction(1), a_p, b)
    h = _slope(a_p, b, p)
    kind = splitting_type(p, K)
    if kind == "split":
        alphas, slopes = (alpha, alpha), (h, h)
        small = h < k + 1
    elif kind == "inert":
        alphas, slopes = (alpha * alpha,), (2 * h,)
        small = h < Fraction(k + 1, 2)
    else:
        alphas, slopes = (alpha,), (h,)
        small = h < Fraction(k + 1, 2)
    data = BaseChangeData(form.label, p, K, kind, k, a_p, h, alphas, slopes, small, not small)
    _check_transfer(data)
    return data


def _check_transfer(d: BaseChangeData) -> None:
    alpha = QuadNumber(Fraction(0), Fraction(1), d.a_p, d.p ** (d.k + 1))
    if d.alpha_pO != alpha * alpha:
        raise AssertionError("alpha of p O_K is not alpha^2")
    total = sum(d.slopes) if d.splitting != "ramified" else 2 * d.slopes[0]
    if total != 2 * d.h:
        raise AssertionError("slope of p O_K is not twice the slope of alpha")


def hecke_eigenvalue(phi: ClassicalSymbol, ell: int) -> Fraction:
    """lambda with phi | T_ell = lambda phi, read off the Hecke action on the symbol."""
    image = phi.T(ell)
    lam = None
    for u, v in zip(phi.values, image.values):
        for x, y in zip(u, v):
            x, y = Fraction(x), Fraction(y)
            if x:
                lam = y / x
                break
        if lam is not None:
            break
    if lam is None:
        raise ValueError("the zero symbol has no eigenvalue")
    if any(Fraction(y) != lam * Fraction(x) for u, v in zip(phi.values, image.values) for x, y in zip(u, v)):
        raise ValueError(f"not an eigen-symbol for T_{ell}")
    return lam


def supersingular_primes(phi: ClassicalSymbol, bound: int) -> list[int]:
    """Odd primes p < bound, p not dividing the level, with a_p = 0 by the Hecke action."""
    out = []
    for q in range(3, bound):
        if all(q % r for r in range(2, q)) and phi.N % q and hecke_eigenvalue(phi, q) == 0:
            out.append(q)
    return out


def inert_fields(p: int, discs=(3, 4, 7, 8, 11)) -> list[ImagQuadField]:
    return [ImagQuadField(d) for d in discs if splitting_type(p, ImagQuadField(d)) == "inert"]


# ---------------------------------------------------------------------------
# periods and constants


@dataclass(frozen=True)
class PeriodNormalization:
    """Omega_F / (Omega^+ Omega^-) = (-1)^k #O_K^x tau(chi_K) / 2."""

    K: ImagQuadField
    k: int

    @property
    def value(self) -> CyclotomicElement:
        return tau_q(self.K.chi).value * Fraction((-1) ** self.k * self.K.unit_count, 2)


def bianchi_interpolation_constant(K: ImagQuadField, k: int, a_p: int, chi: DirichletCharacter, j: int,
                                   convention: str = DEFAULT_CONVENTION) -> QuadNumber:
    """The interpolation constant over K times Omega^+ Omega^-, exactly.

    d^(j+1) p^(2n(j+1)) #O_K^x / ((-1)^k 2 alpha(p O_K)^n tau_K((chi o N)^-1) Omega_F)
    with Omega_F replaced by its normalisation, so the result multiplies
    Lambda(F, phi o N) / (Omega^+ Omega^-).
    """
    p, n = _prime_power(chi.M)
    if not 0 <= j <= k:
        raise ValueError("j must lie in [0, k]")
    d = K.d
    alpha = QuadNumber(Fraction(0), Fraction(1), a_p, p ** (k + 1))
    alpha_F = alpha * alpha
    tK = tau_K(compose_norm(chi.inverse(), K), convention).value
    per = PeriodNormalization(K, k).value
    num = Fraction(d ** (j + 1) * p ** (2 * n * (j + 1)) * K.unit_count, (-1) ** k * 2)
    denom = tK * per
    return (alpha_F**n).inverse() * (denom.inverse() * num)


def rational_constants_product(K: ImagQuadField, k: int, a_p: int, chi: DirichletCharacter, j: int) -> QuadNumber:
    """Product of the interpolation constants of L_p(f) and L_p^{chi_K}(f) at chi."""
    rel = (a_p, _prime_power(chi.M)[0] ** (k + 1))
    return interpolation_constant(rel, chi, j) * interpolation_constant(rel, chi, j, K.chi)


def constants_match(K: ImagQuadField, k: int, a_p: int, chi: DirichletCharacter, j: int,
                    convention: str = DEFAULT_CONVENTION) -> bool:
    """The constant over K equals the product of the two rational constants, exactly."""
    return bianchi_interpolation_constant(K, k, a_p, chi, j, convention) == rational_constants_product(K, k, a_p, chi, j)


def _prime_power(q: int) -> tuple[int, int]:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    if q != 1:
        raise ValueError("the conductor must be a power of p")
    return p, n


def exceptional_factor(alpha: QuadNumber, chi: DirichletCharacter, j: int, prime: int, norm: int,
                       interpretation: str = "phi"):
    """1 - alpha^-1 psi(P)^-1 at a prime P above ``prime`` of absolute norm ``norm``.

    Equal to 1 when ``prime`` divides the conductor of chi.  With the
    "phi" interpretation psi(P) = chi(N P) N P^-j; with "finite" it is
    chi(N P) alone.
    """
    if chi.conductor % prime == 0:
        return 1
    if interpretation not in ("phi", "finite"):
        raise ValueError("interpretation must be 'phi' or 'finite'")
    val = chi(norm)
    if interpretation == "phi":
        val = val * Fraction(1, norm**j)
    one = QuadNumber(Fraction(1), Fraction(0), alpha.a, alpha.b)
    return one - alpha.inverse() * val.inverse()


# ---------------------------------------------------------------------------
# the cyclotomic L-function of the base change


@dataclass
class BaseChangeLFunction:
    data: BaseChangeData
    untwisted: PadicLFunction
    twisted: PadicLFunction
    product: ProductLFunction
    _admissibility: dict = field(default_factory=dict, repr=False)

    def evaluate(self, chi: DirichletCharacter, j: int = 0):
        return self.product.evaluate(chi, j)

    def admissibility(self, h: Fraction | None = None, depths=(1, 2, 3, 4)) -> AdmissibilityReport:
        """Diagnostic at order h, by default twice the slope of alpha."""
        h = 2 * self.data.h if h is None else Fraction(h)
        key = (h, tuple(depths))
        if key not in self._admissibility:
            self._admissibility[key] = admissibility_diagnostic(self.product, h, depths)
        return self._admissibility[key]


def cyc_base_change_L(lifts: FormLifts, form: Eigenform, K: ImagQuadField) -> BaseChangeLFunction:
    data = transfer(form, lifts.p, K)
    Lf = form_lfunction(lifts)
    Lt = form_lfunction(lifts, K.chi)
    prod = ProductLFunction(Lf, Lt, f"{form.label} over Q(sqrt(-{K.d})) at p={lifts.p}")
    return BaseChangeLFunction(data, Lf, Lt, prod)


# ---------------------------------------------------------------------------
# factorisation check


@dataclass
class FactorisationRow:
    chi: DirichletCharacter
    j: int
    product: LValue
    prediction: LValue
    agree: bool
    ratio: LValue | None  # product / prediction, None when the prediction vanishes

    def to_json(self) -> dict:
        return {"character": self.chi.label(), "j": self.j,
                "product": self.product.to_json(), "prediction": self.prediction.to_json(),
                "agree": self.agree,
                "ratio": None if self.ratio is None else self.ratio.to_json()}


@dataclass
class FactorisationReport:
    rows: list[FactorisationRow]
    constant_ratio: bool
    nonzero_rows: int
    convention: str

    def to_json(self) -> dict:
        rows = sorted(self.rows, key=lambda r: (label_key(r.chi.label()), r.j))
        return {"convention": self.convention, "constant_ratio": self.constant_ratio,
                "nonzero_rows": self.nonzero_rows, "rows": [r.to_json() for r in rows]}


def artin_prediction(lifts: FormLifts, K: ImagQuadField, chi: DirichletCharacter, j: int,
                     convention: str = DEFAULT_CONVENTION) -> QuadNumber:
    """Bianchi constant times Lambda(f, phi) Lambda(f, chi_K phi) / (Omega^+ Omega^-), exactly."""
    c = bianchi_interpolation_constant(K, lifts.k, lifts.a_p, chi, j, convention)
    m = chi.M * K.chi.M
    a1 = form_algebraic_value(lifts, chi, j)
    a2 = form_algebraic_value(lifts, chi.lift(m) * K.chi.lift(m), j)
    return c * (a1 * a2)


def factorisation_check(bc: BaseChangeLFunction, lifts: FormLifts, characters: list[DirichletCharacter],
                        js: tuple[int, ...] = (0,), convention: str = DEFAULT_CONVENTION) -> FactorisationReport:
    K = bc.data.K
    p = lifts.p
    alpha = None if not bc.product.ordinary else bc.untwisted.alpha
    rows = []
    for chi in characters:
        character_depth(chi, p)
        for j in js:
            prod = bc.evaluate(chi, j).value
            exact = artin_prediction(lifts, K, chi, j, convention)
            pred = _reduce(exact, p, prod, alpha)
            agree = prod.agrees_with(pred)
            ratio = None
            if not exact.is_zero():
                inv = _reduce(exact.inverse(), p, prod, alpha)
                ratio = prod * inv
            rows.append(FactorisationRow(chi, j, prod, pred, agree, ratio))
    ratios = [r.ratio for r in rows if r.ratio is not None and not r.product.is_zero()]
    constant = bool(ratios) and all(r.agrees_with(ratios[0]) for r in ratios[1:])
    return FactorisationReport(rows, constant, len(ratios), convention)


def _reduce(exact: QuadNumber, p: int, like: LValue, alpha) -> LValue:
    return lvalue_from_exact(exact, p, like.precision, alpha=alpha,
                             relation=None if alpha is not None else like.relation, h=like.h)
