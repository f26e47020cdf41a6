"""Truncated p-adic distributions and their Sigma_0(p)-actions.

A distribution mu on Z_p is recorded by its first M moments
mu(z^j).  For a family the moments are polynomials in a weight variable
w truncated at w^Mw; a fixed weight is the case Mw = 1.  The flat index
of (moment j, power w^t) is j * Mw + t.

The action of g = (a b; c d) with p | c and a a unit is

    (mu | g)(f) = mu(kappa(a + c z) f((b + d z) / (a + c z))),

with kappa(x) = x^k0 <x>^w and <x> = x / omega(x).  Moment j of mu | g
is mu(P_j) where P_j = kappa(a + c z) (b + d z)^j (a + c z)^(-j), so
row i, column j of the action matrix is the z^i coefficient of P_j.
Each P_{j+1} is P_j times (b + d z) divided by (a + c z), which keeps
the cost quadratic in M.

Moment j is meaningful modulo p^(N - j) (the filtration); actions
respect it because the z^i coefficient of P_j is divisible by p^(i-j).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import flint

from .padic import teichmuller, vp

Mat = tuple[int, int, int, int]

WORD_LIMIT = 1 << 62


# ---------------------------------------------------------------------------
# modular matrices


@lru_cache(maxsize=64)
def _fmpz_mod_ctx(modulus: int):
    return flint.fmpz_mod_ctx(modulus)


def mod_matrix(rows: int, cols: int, entries, modulus: int):
    """A FLINT matrix over Z / modulus; word-sized moduli use nmod_mat."""
    if modulus < WORD_LIMIT:
        return flint.nmod_mat(rows, cols, [int(x) % modulus for x in entries], modulus)
    return flint.fmpz_mod_mat(rows, cols, [int(x) % modulus for x in entries], _fmpz_mod_ctx(modulus))


def mod_entries(m) -> list[int]:
    return [int(x) for x in m.entries()]


# ---------------------------------------------------------------------------
# weight data


@dataclass(frozen=True)
class WeightSpec:
    """Weight k0 at the centre; Mw = 1 means the fixed weight k0."""

    k0: int
    Mw: int = 1

    @property
    def is_family(self) -> bool:
        return self.Mw > 1


def check_sigma0(g: Mat, p: int) -> None:
    a, b, c, d = g
    if c % p or a % p == 0 or a * d - b * c == 0:
        raise ValueError(f"{g} is not in Sigma_0({p})")


@lru_cache(maxsize=None)
def _binomial_w_polys(S: int, Mw: int) -> tuple[tuple[Fraction, ...], ...]:
    """Coefficients in w (degree < Mw) of binom(w, s) for s < S."""
    out = []
    poly = [Fraction(1)]  # w (w-1) ... (w-s+1)
    for s in range(S):
        out.append(tuple((poly + [Fraction(0)] * Mw)[:Mw][t] / factorial(s) for t in range(Mw)))
        # multiply by (w - s)
        new = [Fraction(0)] * (len(poly) + 1)
        for t, x in enumerate(poly):
            new[t + 1] += x
            new[t] -= s * x
        poly = new
    return tuple(out)


def _reduce_fraction(x: Fraction, modulus: int) -> int:
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def _scaled_binomial_series(y: int, p: int, terms: int, Mw: int, modulus: int, extra: int) -> list[list[int]]:
    """For s < terms: the w-polynomial binom(w, s) * y^s reduced mod p^W.

    y must be divisible by p and known modulo p^(W + extra); the factor
    y^s supplies the powers of p that cancel the s! denominators.
    """
    polys = _binomial_w_polys(terms, Mw)
    out = []
    for s in range(terms):
        ys = pow(y, s)
        row = []
        for t in range(Mw):
            c = polys[s][t]
            if c == 0:
                row.append(0)
                continue
            num = c.numerator * ys
            den = c.denominator
            e = vp(den, p)
            if e:
                pe = p**e
                assert num % pe == 0, "binomial term not p-integral"
                num //= pe
                den //= pe
            row.append(num * pow(den, -1, modulus) % modulus)
        out.append(row)
    del extra
    return out


def _series_terms(p: int, W: int) -> int:
    """Number of binomial terms s with s - v_p(s!) < W, plus a margin."""
    s = 0
    while s - vp(factorial(s), p) < W + 1:
        s += 1
    return s + 1


def angle_power_series(a: int, p: int, W: int, Mw: int) -> list[int]:
    """<a>^w = sum_s binom(w, s) (<a> - 1)^s as a polynomial in w mod p^W."""
    terms = _series_terms(p, W)
    extra = vp(factorial(terms), p) + 2
    Wx = W + extra
    modx = p**Wx
    mod = p**W
    om = teichmuller(a % p, p, Wx).residue
    ang = a * pow(om, -1, modx) % modx
    y = (ang - 1) % modx
    rows = _scaled_binomial_series(y, p, terms, Mw, mod, extra)
    out = [0] * Mw
    for row in rows:
        for t in range(Mw):
            out[t] = (out[t] + row[t]) % mod
    return out


@lru_cache(maxsize=500_000)
def action_blocks(g: Mat, p: int, spec: WeightSpec, M: int, W: int) -> tuple:
    """Action matrices A_t (coefficient of w^t), each M x M, mod p^W.

    Returns a tuple of Mw matrices as tuples of rows: A_t[i][j].
    """
    check_sigma0(g, p)
    a, b, c, d = g
    Mw = spec.Mw
    mod = p**W
    terms = min(M, _series_terms(p, W))
    extra = vp(factorial(terms), p) + 2
    modx = p ** (W + extra)
    ainv = pow(a, -1, modx)
    u = c * ainv % modx  # divisible by p
    # P_0 = a^k0 (1 + u z)^(k0 + w) <a>^w
    # (1 + u z)^(k0 + w) = sum_s binom(w + k0, s) u^s z^s
    k0 = spec.k0
    shifted = _binom_shift_polys(k0, M, Mw)
    series = []
    for s in range(M):
        us = pow(u, s, modx)
        coeffs = []
        for t in range(Mw):
            cf = shifted[s][t]
            if cf == 0:
                coeffs.append(0)
                continue
            num = cf.numerator * us
            den = cf.denominator
            e = vp(den, p)
            if e:
                pe = p**e
                assert num % pe == 0
                num //= pe
                den //= pe
            coeffs.append(num * pow(den, -1, mod) % mod)
        series.append(coeffs)
    ak0 = pow(a, k0, mod) if k0 >= 0 else pow(pow(a, -1, mod), -k0, mod)
    angle = angle_power_series(a, p, W, Mw) if Mw > 1 else [1]
    # P0[i][t]
    P = [[0] * Mw for _ in range(M)]
    for i in range(M):
        for t1 in range(Mw):
            x = series[i][t1]
            if not x:
                continue
            for t2 in range(Mw - t1):
                y = angle[t2]
                if y:
                    P[i][t1 + t2] = (P[i][t1 + t2] + x * y) % mod
    for i in range(M):
        for t in range(Mw):
            P[i][t] = P[i][t] * ak0 % mod
    ainv_m = pow(a, -1, mod)
    cols = [P]
    for j in range(1, M):
        prev = cols[-1]
        # multiply by (b + d z), truncated
        Q = [[0] * Mw for _ in range(M)]
        for i in range(M):
            for t in range(Mw):
                v = b * prev[i][t]
                if i:
                    v += d * prev[i - 1][t]
                Q[i][t] = v % mod
        # divide by (a + c z): R_i = (Q_i - c R_{i-1}) / a
        R = [[0] * Mw for _ in range(M)]
        for i in range(M):
            for t in range(Mw):
                v = Q[i][t]
                if i:
                    v -= c * R[i - 1][t]
                R[i][t] = v * ainv_m % mod
        cols.append(R)
    blocks = []
    for t in range(Mw):
        blocks.append(tuple(tuple(cols[j][i][t] for j in range(M)) for i in range(M)))
    return tuple(blocks)


@lru_cache(maxsize=None)
def _binom_shift_polys(k0: int, S: int, Mw: int) -> tuple[tuple[Fraction, ...], ...]:
    """w-coefficients (degree < Mw) of binom(w + k0, s) for s < S."""
    out = []
    poly = [Fraction(1)]
    for s in range(S):
        out.append(tuple((poly + [Fraction(0)] * Mw)[:Mw][t] / factorial(s) for t in range(Mw)))
        # multiply by (w + k0 - s)
        new = [Fraction(0)] * (len(poly) + 1)
        for t, x in enumerate(poly):
            new[t + 1] += x
            new[t] += (k0 - s) * x
        poly = new
    return tuple(out)


def action_matrix_flat(g: Mat, p: int, spec: WeightSpec, M: int, W: int) -> list[list[int]]:
    """The full (M Mw) x (M Mw) matrix B with B[(i,s),(j,t)] = A_{t-s}[i][j]."""
    blocks = action_blocks(g, p, spec, M, W)
    Mw = spec.Mw
    D = M * Mw
    B = [[0] * D for _ in range(D)]
    for t_off, A in enumerate(blocks):
        for i in range(M):
            Ai = A[i]
            for j in range(M):
                x = Ai[j]
                if not x:
                    continue
                for s in range(Mw - t_off):
                    B[i * Mw + s][j * Mw + s + t_off] = x
    return B


def act_vector(mu: list[int], g: Mat, p: int, spec: WeightSpec, M: int, W: int) -> list[int]:
    """mu | g for a flat moment vector (length M * Mw)."""
    blocks = action_blocks(g, p, spec, M, W)
    Mw = spec.Mw
    mod = p**W
    out = [0] * (M * Mw)
    for t_off, A in enumerate(blocks):
        for i in range(M):
            row = A[i]
            for s in range(Mw - t_off):
                x = mu[i * Mw + s]
                if not x:
                    continue
                for j in range(M):
                    y = row[j]
                    if y:
                        out[j * Mw + s + t_off] += x * y
    return [v % mod for v in out]


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True)
class ApproxDistribution:
    """First M moments of a distribution, moment j carried mod p^(N - j)."""

    p: int
    N: int
    moments: tuple[int, ...]
    k: int = 0

    @classmethod
    def from_moments(cls, p: int, N: int, moments, k: int = 0) -> "ApproxDistribution":
        return cls(p, N, tuple(int(m) % p ** max(N - j, 0) if N - j > 0 else 0
                               for j, m in enumerate(moments)), k)

    @property
    def M(self) -> int:
        return len(self.moments)

    def act(self, g: Mat) -> "ApproxDistribution":
        """mu | g, computed with enough p-adic precision and then filtered."""
        W = self.N
        out = act_vector(list(self.moments), g, self.p, WeightSpec(self.k), self.M, W)
        return ApproxDistribution.from_moments(self.p, self.N, out, self.k)

    def specialise(self, k: int | None = None) -> tuple[int, ...]:
        k = self.k if k is None else k
        if self.M < k + 1:
            raise ValueError("not enough moments to specialise")
        return self.moments[: k + 1]

    def __eq__(self, other):
        if not isinstance(other, ApproxDistribution):
            return NotImplemented
        if (self.p, self.N, self.M, self.k) != (other.p, other.N, other.M, other.k):
            return False
        return all((x - y) % self.p ** max(self.N - j, 0) == 0 if self.N - j > 0 else True
                   for j, (x, y) in enumerate(zip(self.moments, other.moments)))

    def __hash__(self):
        return hash((self.p, self.N, self.moments, self.k))


# ---------------------------------------------------------------------------
# family coefficients


@dataclass(frozen=True)
class FamilyCoefficient:
    """An element of (Z/p^N)[w]/(w^Mw), centred at weight k0."""

    p: int
    N: int
    coeffs: tuple[int, ...]
    k0: int = 0

    @property
    def Mw(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "FamilyCoefficient") -> "FamilyCoefficient":
        mod = self.p**self.N
        return FamilyCoefficient(self.p, self.N, tuple((x + y) % mod for x, y in zip(self.coeffs, other.coeffs)), self.k0)

    def __mul__(self, other: "FamilyCoefficient") -> "FamilyCoefficient":
        mod = self.p**self.N
        n = self.Mw
        out = [0] * n
        for i, x in enumerate(self.coeffs):
            if x:
                for j in range(n - i):
                    out[i + j] += x * other.coeffs[j]
        return FamilyCoefficient(self.p, self.N, tuple(v % mod for v in out), self.k0)

    def specialise(self, k: int) -> int:
        """Value at w = k - k0."""
        check_in_disc(k, self.k0, self.p)
        w = k - self.k0
        mod = self.p**self.N
        return sum(c * pow(w, t, mod) for t, c in enumerate(self.coeffs)) % mod


def check_in_disc(k: int, k0: int, p: int) -> None:
    if (k - k0) % (p - 1):
        raise ValueError(f"weight {k} is not in the residue disc of {k0} mod {p - 1}")


def universal_character(x: int, p: int, N: int, Mw: int, k0: int = 0) -> FamilyCoefficient:
    """x^k0 <x>^w as a FamilyCoefficient, for a p-adic unit x."""
    if x % p == 0:
        raise ValueError("x must be a unit")
    ang = angle_power_series(x, p, N, Mw)
    mod = p**N
    xk = pow(x, k0, mod)
    return FamilyCoefficient(p, N, tuple(c * xk % mod for c in ang), k0)


def binomial(n: int, k: int) -> int:
    return comb(n, k)
