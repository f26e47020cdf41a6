"""Classical modular symbols for Gamma_0(N) with values in V_k^*.

V_k^* is the dual of polynomials of degree <= k.  An element mu is
stored as its moment vector (mu(1), mu(z), ..., mu(z^k)) and a 2x2
integer matrix g = (a b; c d) acts on the right by

    (mu | g)(P) = mu((a + c z)^k P((b + d z) / (a + c z))).

A symbol phi satisfies phi(gamma D) | gamma = phi(D) for gamma in
Gamma_0(N), and the Hecke operator attached to a set of matrices H is
(phi | T)(D) = sum over h in H of phi(h D) | h.

A symbol is stored by its values on the Manin generators g_i{0 -> oo};
the space of symbols is cut out by the Manin relations and computed
exactly with FLINT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Callable, Sequence

import flint

from .gauss import tau_q
from .manin import (
    INVOLUTION,
    MINUS_ONE,
    Mat,
    ManinGenerators,
    act_on_cusp,
    cusp_class_key,
    manin_generators,
    mat_inv_sl2,
    mat_mul,
)

Cusp = Fraction | None  # None is the cusp at infinity


# ---------------------------------------------------------------------------
# the representation V_k^*


def _poly_pow(lin: tuple[int, int], e: int) -> list[int]:
    c0, c1 = lin
    return [comb(e, i) * c0 ** (e - i) * c1**i for i in range(e + 1)]


def _poly_mul(f: Sequence[int], g: Sequence[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=200_000)
def action_matrix(g: Mat, k: int) -> tuple[tuple[int, ...], ...]:
    """A with (mu | g)_j = sum_i mu_i A[i][j]."""
    a, b, c, d = g
    cols = []
    for j in range(k + 1):
        cols.append(_poly_mul(_poly_pow((b, d), j), _poly_pow((a, c), k - j)))
    return tuple(tuple(cols[j][i] for j in range(k + 1)) for i in range(k + 1))


def act(mu: Sequence, A: Sequence[Sequence[int]]) -> list:
    n = len(mu)
    out = []
    for j in range(n):
        s = 0
        for i in range(n):
            a = A[i][j]
            if a:
                s = s + mu[i] * a
        out.append(s)
    return out


def _vadd(u: list, v: Sequence) -> list:
    return [x + y for x, y in zip(u, v)]


def _zero_vec(k: int) -> list:
    return [Fraction(0)] * (k + 1)


def evaluate_polynomial(mu: Sequence, poly: Sequence) -> object:
    """mu(P) for P given by its coefficient list."""
    s = 0
    for m, c in zip(mu, poly):
        if c:
            s = s + m * c
    return s


def binomial_polynomial(a: int, m: int, j: int) -> list[int]:
    """Coefficients of (a + m z)^j."""
    return _poly_pow((a, m), j)


# ---------------------------------------------------------------------------
# Hecke matrix sets


def hecke_matrices(ell: int, N: int) -> list[Mat]:
    hs = [(1, a, 0, ell) for a in range(ell)]
    if N % ell:
        hs.append((ell, 0, 0, 1))
    return hs


def up_matrices(p: int) -> list[Mat]:
    return [(1, a, 0, p) for a in range(p)]


# ---------------------------------------------------------------------------
# symbols


def _generator_path(g: Mat) -> tuple[Cusp, Cusp]:
    a, b, c, d = g
    return act_on_cusp(g, Fraction(0)), act_on_cusp(g, None)


class ClassicalSymbol:
    """A V_k^*-valued symbol for Gamma_0(N), stored by generator values.

    Entries may be Fractions or any ring elements supporting +, -, *
    with integers (for instance ``QuadNumber``).
    """

    def __init__(self, N: int, k: int, values: list[list]):
        self.N = N
        self.k = k
        self.gens: ManinGenerators = manin_generators(N)
        if len(values) != len(self.gens):
            raise ValueError("one value per Manin generator is required")
        self.values = values

    # evaluation -------------------------------------------------------
    def evaluate(self, r: Cusp, s: Cusp) -> list:
        """phi({r -> s}) = phi({s}) - phi({r})."""
        out = _zero_vec(self.k)
        for sign, i, ginv in self.gens.path(r, s):
            term = act(self.values[i], action_matrix(ginv, self.k))
            out = _vadd(out, term if sign > 0 else [-x for x in term])
        return out

    def evaluate_from_infinity(self, x: Cusp) -> list:
        return self.evaluate(None, x)

    # linear structure ---------------------------------------------------
    def _check(self, other: "ClassicalSymbol"):
        if (self.N, self.k) != (other.N, other.k):
            raise ValueError("symbols live in different spaces")

    def __add__(self, other: "ClassicalSymbol") -> "ClassicalSymbol":
        self._check(other)
        return ClassicalSymbol(self.N, self.k, [_vadd(u, v) for u, v in zip(self.values, other.values)])

    def __sub__(self, other: "ClassicalSymbol") -> "ClassicalSymbol":
        return self + other.scale(-1)

    def scale(self, c) -> "ClassicalSymbol":
        return ClassicalSymbol(self.N, self.k, [[x * c for x in v] for v in self.values])

    def map_values(self, f: Callable) -> "ClassicalSymbol":
        return ClassicalSymbol(self.N, self.k, [[f(x) for x in v] for v in self.values])

    def is_zero(self) -> bool:
        return all(_is_zero(x) for v in self.values for x in v)

    # operators ----------------------------------------------------------
    def hecke(self, hs: Sequence[Mat]) -> "ClassicalSymbol":
        new = []
        for g in self.gens.mats:
            total = _zero_vec(self.k)
            for h in hs:
                hg = mat_mul(h, g)
                r, s = _generator_path(hg)
                total = _vadd(total, act(self.evaluate(r, s), action_matrix(h, self.k)))
            new.append(total)
        return ClassicalSymbol(self.N, self.k, new)

    def T(self, ell: int) -> "ClassicalSymbol":
        return self.hecke(hecke_matrices(ell, self.N))

    def U(self, p: int) -> "ClassicalSymbol":
        if self.N % p:
            raise ValueError("U_p needs p to divide the level")
        return self.hecke(up_matrices(p))

    def involution(self) -> "ClassicalSymbol":
        """(phi | iota)(D) = phi(iota D) | iota with iota = diag(-1, 1)."""
        A = action_matrix(INVOLUTION, self.k)
        new = []
        for g in self.gens.mats:
            r, s = _generator_path(mat_mul(INVOLUTION, g))
            new.append(act(self.evaluate(r, s), A))
        return ClassicalSymbol(self.N, self.k, new)

    def restrict_to_level(self, M: int) -> "ClassicalSymbol":
        """The same function on paths, viewed as a symbol for Gamma_0(M)."""
        if M % self.N:
            raise ValueError("new level must be a multiple of the old one")
        gens = manin_generators(M)
        return ClassicalSymbol(M, self.k, [self.evaluate(*_generator_path(g)) for g in gens.mats])

    def slash_diagonal(self, p: int) -> "ClassicalSymbol":
        """phi | diag(p, 1), a symbol for Gamma_0(N p)."""
        delta = (p, 0, 0, 1)
        A = action_matrix(delta, self.k)
        M = self.N * p
        gens = manin_generators(M)
        new = []
        for g in gens.mats:
            r, s = _generator_path(mat_mul(delta, g))
            new.append(act(self.evaluate(r, s), A))
        return ClassicalSymbol(M, self.k, new)

    def relation_defect(self) -> list:
        """Values of all Manin relations; all zero for a genuine symbol."""
        k = self.k
        out = []
        for i in range(len(self.gens)):
            j, gam = self.gens.sigma[i]
            out.append(_vadd(list(self.values[i]), act(self.values[j], action_matrix(mat_inv_sl2(gam), k))))
            (j1, g1), (j2, g2) = self.gens.tau[i]
            t = _vadd(list(self.values[i]), act(self.values[j1], action_matrix(mat_inv_sl2(g1), k)))
            out.append(_vadd(t, act(self.values[j2], action_matrix(mat_inv_sl2(g2), k))))
            out.append(_vadd(list(self.values[i]), [-x for x in act(self.values[i], action_matrix(MINUS_ONE, k))]))
        return out

    def is_symbol(self) -> bool:
        return all(_is_zero(x) for v in self.relation_defect() for x in v)

    def __repr__(self):
        return f"ClassicalSymbol(N={self.N}, k={self.k})"


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


# ---------------------------------------------------------------------------
# the space of symbols


def _to_fmpq_mat(rows: Sequence[Sequence], ncols: int) -> flint.fmpq_mat:
    m = flint.fmpq_mat(len(rows), ncols)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if x:
                x = Fraction(x)
                m[i, j] = flint.fmpq(x.numerator, x.denominator)
    return m


def _fr(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class ModularSymbolSpace:
    """Symb_{Gamma_0(N)}(V_k^*) as an exact Q-vector space."""

    def __init__(self, N: int, k: int):
        if k < 0 or k % 2:
            raise ValueError("weight parameter k must be even and non-negative")
        self.N = N
        self.k = k
        self.gens = manin_generators(N)
        n, d = len(self.gens), k + 1
        self.width = n * d
        rows: list[list[int]] = []

        def add_relation(terms):
            # terms: list of (generator index, action matrix)
            for col in range(d):
                row = [0] * self.width
                for gi, A in terms:
                    for r in range(d):
                        row[gi * d + r] += A[r][col]
                if any(row):
                    rows.append(row)

        ident = action_matrix((1, 0, 0, 1), k)
        for i in range(n):
            j, gam = self.gens.sigma[i]
            add_relation([(i, ident), (j, action_matrix(mat_inv_sl2(gam), k))])
            (j1, g1), (j2, g2) = self.gens.tau[i]
            add_relation([(i, ident), (j1, action_matrix(mat_inv_sl2(g1), k)),
                          (j2, action_matrix(mat_inv_sl2(g2), k))])
        rel = flint.fmpz_mat(rows) if rows else flint.fmpz_mat(0, self.width)
        ker, nullity = rel.nullspace()
        basis = []
        for c in range(nullity):
            basis.append([int(ker[r, c]) for r in range(self.width)])
        basis = _primitive_rows(basis)
        self.basis_rows = basis
        self.dimension = len(basis)
        B = _to_fmpq_mat(basis, self.width)
        rref, rank = B.rref()
        self._pivots = []
        for i in range(rank):
            for j in range(self.width):
                if rref[i, j] != 0:
                    self._pivots.append(j)
                    break
        sub = flint.fmpq_mat(self.dimension, self.dimension)
        for i in range(self.dimension):
            for jj, j in enumerate(self._pivots):
                sub[i, jj] = B[i, j]
        self._pivot_inv = sub.inv() if self.dimension else sub
        self._hecke_cache: dict = {}

    # conversions --------------------------------------------------------
    def symbol(self, coords: Sequence) -> ClassicalSymbol:
        d = self.k + 1
        flat = [0] * self.width
        for c, row in zip(coords, self.basis_rows):
            if _is_zero(c):
                continue
            for t, x in enumerate(row):
                if x:
                    flat[t] = flat[t] + c * x
        vals = [[Fraction(x) if isinstance(x, int) else x for x in flat[i * d:(i + 1) * d]]
                for i in range(len(self.gens))]
        return ClassicalSymbol(self.N, self.k, vals)

    def basis(self) -> list[ClassicalSymbol]:
        return [self.symbol([1 if i == j else 0 for j in range(self.dimension)])
                for i in range(self.dimension)]

    def coordinates(self, phi: ClassicalSymbol) -> list[Fraction]:
        d = self.k + 1
        flat = [x for v in phi.values for x in v]
        piv = [Fraction(flat[j]) for j in self._pivots]
        row = _to_fmpq_mat([piv], self.dimension) * self._pivot_inv
        coords = [_fr(row[0, j]) for j in range(self.dimension)]
        check = self.symbol(coords)
        if any(Fraction(a) != b for u, v in zip(phi.values, check.values) for a, b in zip(u, v)):
            raise ValueError("not an element of the symbol space")
        del d
        return coords

    def operator_matrix(self, op: Callable[[ClassicalSymbol], ClassicalSymbol]) -> flint.fmpq_mat:
        """Matrix of op in the row convention: coords(op(x)) = coords(x) * M."""
        rows = [self.coordinates(op(b)) for b in self.basis()]
        return _to_fmpq_mat(rows, self.dimension)

    def hecke_matrix(self, ell: int) -> flint.fmpq_mat:
        key = ("T", ell)
        if key not in self._hecke_cache:
            self._hecke_cache[key] = self.operator_matrix(lambda s: s.T(ell))
        return self._hecke_cache[key]

    def star_matrix(self) -> flint.fmpq_mat:
        key = ("iota",)
        if key not in self._hecke_cache:
            self._hecke_cache[key] = self.operator_matrix(lambda s: s.involution())
        return self._hecke_cache[key]

    def hecke_charpoly(self, ell: int) -> list[int]:
        cp = self.hecke_matrix(ell).charpoly()
        return [_fr(c) for c in cp.coeffs()]

    # eigen-symbols ------------------------------------------------------
    def eigen_subspace(self, eigenvalues: dict[int, int], sign: int | None = None) -> list[list[Fraction]]:
        """Coordinate vectors c with c T_ell = a_ell c for all given ell."""
        blocks = []
        dim = self.dimension
        ident = flint.fmpq_mat(dim, dim)
        for i in range(dim):
            ident[i, i] = 1
        for ell, a in sorted(eigenvalues.items()):
            blocks.append((self.hecke_matrix(ell) - ident * a).transpose())
        if sign is not None:
            blocks.append((self.star_matrix() - ident * sign).transpose())
        stacked = flint.fmpq_mat(sum(b.nrows() for b in blocks), dim)
        r0 = 0
        for b in blocks:
            for i in range(b.nrows()):
                for j in range(dim):
                    stacked[r0 + i, j] = b[i, j]
            r0 += b.nrows()
        return _rational_nullspace(stacked)


def _rational_nullspace(m: flint.fmpq_mat) -> list[list[Fraction]]:
    """Basis of {x : m x = 0} as primitive integer vectors."""
    rows, cols = m.nrows(), m.ncols()
    z = flint.fmpz_mat(rows, cols)
    for i in range(rows):
        den = 1
        for j in range(cols):
            q = int(m[i, j].q)
            den = den * q // gcd(den, q)
        for j in range(cols):
            x = m[i, j]
            z[i, j] = int(x.p) * (den // int(x.q))
    ker, nullity = z.nullspace()
    vecs = [[int(ker[r, c]) for r in range(cols)] for c in range(nullity)]
    return [[Fraction(x) for x in v] for v in _primitive_rows(vecs)]


def _primitive_rows(rows: list[list[int]]) -> list[list[int]]:
    out = []
    for row in rows:
        g = 0
        for x in row:
            g = gcd(g, x)
        if g > 1:
            row = [x // g for x in row]
        out.append(row)
    return out


@lru_cache(maxsize=32)
def symbol_space(N: int, k: int) -> ModularSymbolSpace:
    return ModularSymbolSpace(N, k)


# ---------------------------------------------------------------------------
# normalisation


def _rational_gcd(xs: Sequence[Fraction]) -> Fraction:
    num, den = 0, 1
    for x in xs:
        x = Fraction(x)
        if x == 0:
            continue
        num = gcd(num, x.numerator)
        den = den * x.denominator // gcd(den, x.denominator)
    return Fraction(num, den)


def _saturated_kernel(A: list[list[int]], ncols: int) -> list[list[int]]:
    """Z-basis of {x in Z^ncols : A x = 0}."""
    m = len(A)
    big = flint.fmpz_mat(ncols, m + ncols)
    for j in range(ncols):
        for i in range(m):
            if A[i][j]:
                big[j, i] = A[i][j]
        big[j, m + j] = 1
    H = big.hnf()
    out = []
    for r in range(ncols):
        if all(H[r, i] == 0 for i in range(m)):
            vec = [int(H[r, m + j]) for j in range(ncols)]
            if any(vec):
                out.append(vec)
    return out


def invariant_cycle_lattice(N: int, sign: int) -> list[list[int]]:
    """Integer combinations of Manin generators spanning H_1(X_0(N), Z)^sign.

    A vector x (one integer per generator) is a cycle when its boundary in
    the free group on cusp classes vanishes; it is sign-invariant when
    iota(x) - sign * x lies in the span of the weight-zero Manin relations.
    """
    gens = manin_generators(N)
    n = len(gens)
    cusp_index: dict = {}

    def cusp_id(x: Cusp) -> int:
        if x is None:
            key = cusp_class_key(1, 0, N)
        else:
            key = cusp_class_key(x.numerator, x.denominator, N)
        return cusp_index.setdefault(key, len(cusp_index))

    bd = []
    for g in gens.mats:
        r, s = _generator_path(g)
        bd.append((cusp_id(s), cusp_id(r)))
    ncusps = len(cusp_index)
    rels: list[list[int]] = []
    for i in range(n):
        j, _ = gens.sigma[i]
        v = [0] * n
        v[i] += 1
        v[j] += 1
        rels.append(v)
        (j1, _), (j2, _) = gens.tau[i]
        v = [0] * n
        v[i] += 1
        v[j1] += 1
        v[j2] += 1
        rels.append(v)
    iota_cols = []
    for g in gens.mats:
        r, s = _generator_path(mat_mul(INVOLUTION, g))
        v = [0] * n
        for sg, i, _ in gens.path(r, s):
            v[i] += sg
        iota_cols.append(v)
    # unknowns (x_1..x_n, y_1..y_R)
    R = len(rels)
    width = n + R
    A: list[list[int]] = []
    for c in range(ncusps):
        row = [0] * width
        for i in range(n):
            s_id, r_id = bd[i]
            if s_id == c:
                row[i] += 1
            if r_id == c:
                row[i] -= 1
        A.append(row)
    for t in range(n):
        row = [0] * width
        for i in range(n):
            row[i] += iota_cols[i][t]
        row[t] -= sign
        for r_i, rv in enumerate(rels):
            row[n + r_i] -= rv[t]
        A.append(row)
    ker = _saturated_kernel(A, width)
    return [vec[:n] for vec in ker]


def normalise_weight_zero(phi: ClassicalSymbol, sign: int) -> ClassicalSymbol:
    """Scale so the values on sign-invariant integral cycles generate Z."""
    lattice = invariant_cycle_lattice(phi.N, sign)
    vals = []
    for x in lattice:
        s = sum((phi.values[i][0] * c for i, c in enumerate(x) if c), Fraction(0))
        vals.append(s)
    g = _rational_gcd(vals)
    if g == 0:
        raise ValueError("symbol vanishes on all invariant cycles")
    return phi.scale(1 / g)


def normalise_primitive(phi: ClassicalSymbol) -> ClassicalSymbol:
    """Scale so the generator values are coprime integers."""
    g = _rational_gcd([x for v in phi.values for x in v])
    if g == 0:
        raise ValueError("zero symbol")
    return phi.scale(1 / g)


# ---------------------------------------------------------------------------
# eigen-symbols of newforms


@dataclass(frozen=True)
class PlusMinusSymbols:
    plus: ClassicalSymbol
    minus: ClassicalSymbol
    normalisation: str

    def total(self) -> ClassicalSymbol:
        return self.plus + self.minus


def good_primes(N: int, bound: int) -> list[int]:
    return [q for q in _primes_up_to(bound) if N % q]


def _primes_up_to(n: int) -> list[int]:
    sieve = [True] * (n + 1)
    out = []
    for q in range(2, n + 1):
        if sieve[q]:
            out.append(q)
            for m in range(q * q, n + 1, q):
                sieve[m] = False
    return out


def eigen_symbols(N: int, k: int, coefficients: dict[int, int], max_primes: int = 12) -> PlusMinusSymbols:
    """The +1 and -1 eigen-symbols cut out by the given Hecke eigenvalues."""
    space = symbol_space(N, k)
    out = {}
    for sign in (1, -1):
        used: dict[int, int] = {}
        vecs: list = []
        for q in good_primes(N, 10_000):
            if q not in coefficients:
                break
            used[q] = coefficients[q]
            vecs = space.eigen_subspace(used, sign)
            if len(vecs) <= 1 or len(used) >= max_primes:
                break
        if len(vecs) != 1:
            raise ValueError(f"eigenvalues do not cut out a line (got dimension {len(vecs)})")
        phi = space.symbol(vecs[0])
        if k == 0:
            phi = normalise_weight_zero(phi, sign)
        else:
            phi = normalise_primitive(phi)
        out[sign] = phi
    norm = "invariant integral cycles" if k == 0 else "primitive generator values"
    return PlusMinusSymbols(out[1], out[-1], norm)


# ---------------------------------------------------------------------------
# twisted period sums


def twisted_period_sum(phi: ClassicalSymbol, chi, j: int, modulus: int | None = None):
    """sum over a mod m of chi(a) * phi({oo -> a/m})((a + m z)^j).

    ``chi`` is any callable returning None (for non-units) or a ring
    element; ``modulus`` defaults to chi.M.
    """
    m = chi.M if modulus is None else modulus
    if not 0 <= j <= phi.k:
        raise ValueError("j must lie in [0, k]")
    total = 0
    for a in range(m):
        if gcd(a, m) != 1:
            continue
        c = chi(a)
        if c is None:
            continue
        mu = phi.evaluate(None, Fraction(a, m))
        val = evaluate_polynomial(mu, binomial_polynomial(a, m, j))
        if _is_zero(val):
            continue
        total = total + val * c
    return total


def algebraic_L_value(phi: ClassicalSymbol, psi, j: int):
    """psi(-1) m^-j B / tau(psi) with B the twisted period sum of phi modulo m = psi.M.

    For primitive psi this is the algebraic part of Lambda(f, psi-bar, j + 1)
    in the normalisation of the symbol's periods.
    """
    if not psi.is_primitive():
        raise ValueError("the twisting character must be primitive")
    m = psi.M
    B = twisted_period_sum(phi, psi, j, m)
    tau = tau_q(psi).value
    return B * (tau.inverse() * Fraction(psi.sign(), m**j))


# ---------------------------------------------------------------------------
# p-stabilisation


def _solve_two(target: ClassicalSymbol, u: ClassicalSymbol, v: ClassicalSymbol) -> tuple[Fraction, Fraction]:
    """(x, y) with target = x u + y v, exactly."""
    fu = [Fraction(t) for w in u.values for t in w]
    fv = [Fraction(t) for w in v.values for t in w]
    ft = [Fraction(t) for w in target.values for t in w]
    n = len(fu)
    for i in range(n):
        for j in range(i + 1, n):
            det = fu[i] * fv[j] - fu[j] * fv[i]
            if det:
                x = (ft[i] * fv[j] - ft[j] * fv[i]) / det
                y = (fu[i] * ft[j] - fu[j] * ft[i]) / det
                if all(a == x * b + y * c for a, b, c in zip(ft, fu, fv)):
                    return x, y
                raise ValueError("target is not in the span")
    raise ValueError("the two symbols are proportional")


@dataclass(frozen=True)
class Stabilisation:
    """phi_alpha = phi + c * (phi | diag(p, 1)) with c = c0 + c1 * alpha."""

    symbol: ClassicalSymbol  # values are QuadNumber in alpha
    p: int
    a_p: int
    c0: Fraction
    c1: Fraction
    up_on_old_space: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def p_stabilise(phi: ClassicalSymbol, p: int, a_p: int) -> Stabilisation:
    """U_p-eigen-symbol of level N p with eigenvalue alpha, alpha^2 - a_p alpha + p^(k+1) = 0.

    The coefficient c is found by computing U_p on the two-dimensional
    space spanned by phi and phi | diag(p, 1).
    """
    from .quadnum import QuadNumber

    if phi.N % p == 0:
        raise ValueError("p must not divide the level of the form")
    k = phi.k
    M = phi.N * p
    u = phi.restrict_to_level(M)
    v = phi.slash_diagonal(p)
    x1, y1 = _solve_two(u.U(p), u, v)
    x2, y2 = _solve_two(v.U(p), u, v)
    if x2 == 0:
        raise ValueError("degenerate old space")
    c0, c1 = -x1 / x2, 1 / x2
    b = p ** (k + 1)
    vals = []
    for uu, vv in zip(u.values, v.values):
        vals.append([QuadNumber(Fraction(s) + c0 * t, c1 * t, a_p, b) for s, t in zip(uu, vv)])
    return Stabilisation(ClassicalSymbol(M, k, vals), p, a_p, c0, c1, ((x1, y1), (x2, y2)))
