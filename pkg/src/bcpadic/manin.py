"""Manin generators for Gamma_0(N) and the combinatorics around them.

Right cosets of Gamma_0(N) in SL_2(Z) are indexed by P^1(Z/N).  For a
coset representative g the Manin generator is the path g{0 -> oo}, i.e.
{b/d -> a/c}.  This module enumerates P^1(Z/N), lifts points to SL_2(Z),
locates the coset of an arbitrary matrix, records the two- and
three-term relations, and decomposes arbitrary paths into unimodular
pieces by continued fractions.

Matrices are 4-tuples (a, b, c, d) of Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable

Mat = tuple[int, int, int, int]

IDENTITY: Mat = (1, 0, 0, 1)
SIGMA: Mat = (0, -1, 1, 0)
TAU: Mat = (0, -1, 1, -1)
INVOLUTION: Mat = (-1, 0, 0, 1)
MINUS_ONE: Mat = (-1, 0, 0, -1)


def mat_mul(g: Mat, h: Mat) -> Mat:
    a, b, c, d = g
    e, f, x, y = h
    return (a * e + b * x, a * f + b * y, c * e + d * x, c * f + d * y)


def mat_det(g: Mat) -> int:
    return g[0] * g[3] - g[1] * g[2]


def mat_adj(g: Mat) -> Mat:
    """Adjugate; equals the inverse for determinant one."""
    a, b, c, d = g
    return (d, -b, -c, a)


def mat_inv_sl2(g: Mat) -> Mat:
    if mat_det(g) != 1:
        raise ValueError("matrix not in SL_2(Z)")
    return mat_adj(g)


def act_on_cusp(g: Mat, x) -> Fraction | None:
    """Moebius action on P^1(Q); None stands for infinity."""
    a, b, c, d = g
    if x is None:
        return None if c == 0 else Fraction(a, c)
    num = a * x + b
    den = c * x + d
    if den == 0:
        return None
    return Fraction(num) / den


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class P1List:
    """P^1(Z/N) with normalised representatives and lookup of any pair."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("level must be positive")
        self.N = N
        units = [u for u in range(1, N + 1) if gcd(u, N) == 1] if N > 1 else [1]
        reps: list[tuple[int, int]] = []
        lookup: dict[tuple[int, int], int] = {}
        if N == 1:
            reps.append((0, 1))
            lookup[(0, 0)] = 0
        else:
            for c in range(N):
                for d in range(N):
                    if gcd(gcd(c, d), N) != 1 or (c, d) in lookup:
                        continue
                    idx = len(reps)
                    reps.append((c, d))
                    for u in units:
                        lookup[(u * c % N, u * d % N)] = idx
        self.reps = reps
        self._lookup = lookup

    def __len__(self) -> int:
        return len(self.reps)

    def index(self, c: int, d: int) -> int:
        N = self.N
        return self._lookup[(c % N, d % N)]

    def lift(self, i: int) -> Mat:
        """A matrix in SL_2(Z) whose bottom row reduces to the i-th point."""
        c, d = self.reps[i]
        N = self.N
        if N == 1 or (c == 0 and d % N == 1):
            return IDENTITY
        if c == 0:
            c = N
        t = 0
        while gcd(c, d + t * N) != 1:
            t += 1
        d = d + t * N
        g, x, y = _xgcd(d, c)
        # x d + y c = 1, so (x, -y; c, d) has determinant 1
        a, b = x, -y
        assert a * d - b * c == 1
        return (a, b, c, d)


@lru_cache(maxsize=None)
def manin_generators(N: int) -> "ManinGenerators":
    return ManinGenerators(N)


class ManinGenerators:
    """Coset representatives g_i and the relations among g_i{0 -> oo}."""

    def __init__(self, N: int):
        self.N = N
        self.p1 = P1List(N)
        self.mats: list[Mat] = [self.p1.lift(i) for i in range(len(self.p1))]
        n = len(self.mats)
        # g_i sigma = gamma g_j  and  g_i tau = gamma g_j
        self.sigma = [self.find(mat_mul(g, SIGMA)) for g in self.mats]
        tau2 = mat_mul(TAU, TAU)
        self.tau = [(self.find(mat_mul(g, TAU)), self.find(mat_mul(g, tau2))) for g in self.mats]
        self.n = n

    def __len__(self) -> int:
        return self.n

    def find(self, g: Mat) -> tuple[int, Mat]:
        """(i, gamma) with g = gamma g_i and gamma in Gamma_0(N)."""
        i = self.p1.index(g[2], g[3])
        gamma = mat_mul(g, mat_inv_sl2(self.mats[i]))
        assert gamma[2] % self.N == 0
        return i, gamma

    def unimodular_path(self, g: Mat) -> tuple[int, Mat]:
        """For g in SL_2(Z): g{0 -> oo} = gamma g_i{0 -> oo}; returns (i, gamma^-1)."""
        i, gamma = self.find(g)
        return i, mat_inv_sl2(gamma)

    def path_from_infinity(self, x: Fraction | None) -> list[tuple[int, int, Mat]]:
        """{oo -> x} as a signed list of (sign, i, gamma^-1)."""
        if x is None:
            return []
        return [(1, *self.unimodular_path(g)) for g in unimodular_pieces(x)]

    def path(self, r, s) -> list[tuple[int, int, Mat]]:
        """{r -> s} = {oo -> s} - {oo -> r}."""
        out = self.path_from_infinity(s)
        out += [(-sg, i, m) for sg, i, m in self.path_from_infinity(r)]
        return out


def unimodular_pieces(x: Fraction) -> list[Mat]:
    """SL_2(Z) matrices g_k with sum of g_k{0 -> oo} equal to {oo -> x}."""
    x = Fraction(x)
    pieces = []
    # convergents p_k / q_k, starting from p_{-2}/q_{-2} = 0/1 and p_{-1}/q_{-1} = 1/0
    p_prev2, q_prev2, p_prev, q_prev = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    k = 0
    while True:
        t = num // den
        p_k = t * p_prev + p_prev2
        q_k = t * q_prev + q_prev2
        sgn = 1 if k % 2 == 1 else -1  # (-1)^(k-1)
        pieces.append((p_k, sgn * p_prev, q_k, sgn * q_prev))
        num, den = den, num - t * den
        p_prev2, q_prev2, p_prev, q_prev = p_prev, q_prev, p_k, q_k
        k += 1
        if den == 0:
            break
    return pieces


def cusp_class_key(a: int, c: int, N: int) -> tuple[int, int]:
    """Canonical key of the Gamma_0(N)-class of the cusp a/c (gcd(a, c) = 1).

    a/c and a'/c' are equivalent iff c' = u c mod N and a' = u^-1 a mod
    gcd(c, N) for some unit u mod N.
    """
    if N == 1:
        return (0, 0)
    g = gcd(c, N)
    best = None
    for u in range(1, N):
        if gcd(u, N) != 1:
            continue
        cc = (u * c) % N
        aa = (pow(u, -1, N) * a) % g if g > 1 else 0
        key = (cc, aa)
        if best is None or key < best:
            best = key
    assert best is not None
    return best


def cusp_count(N: int) -> int:
    """Number of cusps of Gamma_0(N): sum over d | N of phi(gcd(d, N/d))."""
    from .cyclotomic import euler_phi

    return sum(euler_phi(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)


def boundary_cusps(g: Mat) -> tuple[tuple[int, int], tuple[int, int]]:
    """End points (as (numerator, denominator)) of g{0 -> oo}: (g 0, g oo)."""
    a, b, c, d = g
    return (b, d), (a, c)


def normalise_cusp(num: int, den: int) -> tuple[int, int]:
    g = gcd(num, den)
    num, den = num // g, den // g
    if den < 0 or (den == 0 and num < 0):
        num, den = -num, -den
    return num, den


def coset_reps_iter(N: int) -> Iterable[Mat]:
    return iter(manin_generators(N).mats)
