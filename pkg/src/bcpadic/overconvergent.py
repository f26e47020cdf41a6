"""Overconvergent modular symbols: lifting, U_p slopes and weight families.

A distribution-valued symbol for Gamma_0(L), p | L, is stored by its
moment vectors on the Manin generators, concatenated into one vector of
length n_gens * D over Z/p^W.  Hecke-type operators act on such vectors
through dense FLINT matrices assembled from path decompositions.

Lifting follows the classical contraction argument: start from a genuine
symbol whose specialisation is the p-stabilised classical symbol and
iterate alpha^-1 U_p.  On the kernel of specialisation U_p gains at
least p^(k+1), so the iteration contracts at rate k + 1 - v_p(alpha).
For non-ordinary alpha the values are pairs (x0, x1) meaning
x0 + x1 alpha with alpha^2 = a_p alpha - p^(k+1).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .distributions import (
    WeightSpec,
    action_blocks,
    action_matrix_flat,
    check_in_disc,
    mod_entries,
    mod_matrix,
)
from .manin import INVOLUTION, act_on_cusp, manin_generators, mat_mul
from .modsym import ClassicalSymbol, Stabilisation, up_matrices
from .padic import PrecisionError, hensel_unit_root, vp
from .presentation import Symbolizer
from .quadnum import QuadNumber


class NonConvergence(RuntimeError):
    """The lifting iteration did not stabilise within its budget."""


# ---------------------------------------------------------------------------
# cochain operators


def _generator_path(g):
    return act_on_cusp(g, Fraction(0)), act_on_cusp(g, None)


@lru_cache(maxsize=200_000)
def action_mod_matrix(g, p: int, spec: WeightSpec, M: int, W: int):
    """The flat action matrix of g as a FLINT matrix over Z/p^W."""
    D = M * spec.Mw
    if spec.Mw == 1:
        A = action_blocks(g, p, spec, M, W)[0]
        flat = [x for row in A for x in row]
    else:
        flat = [x for row in action_matrix_flat(g, p, spec, M, W) for x in row]
    return mod_matrix(D, D, flat, p**W)


class CochainOperator:
    """phi -> sum_h phi(h D_i) | h on all-generator values, stored blockwise.

    ``blocks[i]`` lists (j, B) meaning the new value on generator i
    receives (old value on j) * B.  Values are R x D FLINT matrices, one
    per generator, so R independent symbols are handled at once.
    """

    def __init__(self, L: int, p: int, spec: WeightSpec, M: int, W: int, hs: Sequence):
        gens = manin_generators(L)
        self.L, self.p, self.spec, self.M, self.W = L, p, spec, M, W
        self.D = M * spec.Mw
        self.n = len(gens)
        blocks = []
        for g in gens.mats:
            acc: dict[int, object] = {}
            for h in hs:
                r, s = _generator_path(mat_mul(h, g))
                for sign, j, ginv in gens.path(r, s):
                    B = action_mod_matrix(mat_mul(ginv, h), p, spec, M, W)
                    if sign < 0:
                        B = -B
                    acc[j] = acc[j] + B if j in acc else B
            blocks.append(sorted(acc.items(), key=lambda jb: jb[0]))
        self.blocks = blocks

    def apply(self, values: list) -> list:
        out = []
        for terms in self.blocks:
            total = None
            for j, B in terms:
                x = values[j] * B
                total = x if total is None else total + x
            out.append(total)
        return out

    def apply_flat(self, vec: list[int]) -> list[int]:
        mod = self.p**self.W
        D = self.D
        values = [mod_matrix(1, D, vec[i * D:(i + 1) * D], mod) for i in range(self.n)]
        out = []
        for v in self.apply(values):
            out.extend(mod_entries(v))
        return out


@lru_cache(maxsize=8)
def up_operator(L: int, p: int, spec: WeightSpec, M: int, W: int) -> CochainOperator:
    return CochainOperator(L, p, spec, M, W, up_matrices(p))


@lru_cache(maxsize=8)
def involution_operator(L: int, p: int, spec: WeightSpec, M: int, W: int) -> CochainOperator:
    return CochainOperator(L, p, spec, M, W, [INVOLUTION])


def apply_operator(op: CochainOperator, vec: list[int], mod: int) -> list[int]:
    return op.apply_flat(vec)


# ---------------------------------------------------------------------------
# the symbols


@dataclass
class OverconvergentSymbol:
    """A D_k-valued symbol of level L approximated modulo p^W.

    ``comps`` holds one flat vector (ordinary case) or two (x0, x1 for
    x0 + x1 alpha).  True values are the stored ones divided by p^scale.
    Moment j is meaningful modulo p^precision[j] after removing the scale.
    """

    L: int
    p: int
    spec: WeightSpec
    M: int
    W: int
    comps: list[list[int]]
    scale: int
    alpha: int | tuple[int, int]  # unit root mod p^W, or (a_p, p^(k+1)) for pairs
    precision: list[int] = field(default_factory=list)
    iterations: int = 0

    @property
    def k(self) -> int:
        return self.spec.k0

    @property
    def D(self) -> int:
        return self.M * self.spec.Mw

    @property
    def ordinary(self) -> bool:
        return isinstance(self.alpha, int)

    @property
    def modulus(self) -> int:
        return self.p**self.W

    def generator_value(self, i: int) -> list[list[int]]:
        D = self.D
        return [c[i * D:(i + 1) * D] for c in self.comps]

    def evaluate(self, r, s) -> list[list[int]]:
        """Moments of the value on {r -> s}, per component, mod p^W."""
        gens = manin_generators(self.L)
        mod = self.modulus
        D = self.D
        out = [[0] * D for _ in self.comps]
        for sign, i, ginv in gens.path(r, s):
            blocks = action_blocks(ginv, self.p, self.spec, self.M, self.W)
            for ci, comp in enumerate(self.comps):
                mu = comp[i * D:(i + 1) * D]
                moved = _act_blocks(mu, blocks, self.M, self.spec.Mw, mod)
                acc = out[ci]
                for t in range(D):
                    acc[t] += moved[t] if sign > 0 else -moved[t]
        return [[x % mod for x in acc] for acc in out]

    def value_at(self, r, s) -> list:
        """Moments as exact-scale objects: ints (ordinary) or QuadNumber pairs over Fraction."""
        vals = self.evaluate(r, s)
        return self._combine(vals)

    def _combine(self, vals: list[list[int]]) -> list:
        den = self.p**self.scale
        if self.ordinary:
            return [Fraction(x, den) for x in vals[0]]
        a, b = self.alpha
        return [QuadNumber(Fraction(x0, den), Fraction(x1, den), a, b) for x0, x1 in zip(*vals)]

    def specialise(self) -> ClassicalSymbol:
        """The classical weight-k symbol of the first k + 1 moments (Fractions mod p^W)."""
        k = self.k
        if self.spec.is_family:
            raise ValueError("specialise a family with specialise_family")
        gens = manin_generators(self.L)
        values = []
        for i in range(len(gens)):
            vals = [c[: k + 1] for c in self.generator_value(i)]
            values.append(self._combine(vals))
        return ClassicalSymbol(self.L, k, values)

    def is_up_eigen(self) -> bool:
        """U_p Phi == alpha Phi in every moment to the claimed precision."""
        if self.spec.is_family:
            raise ValueError("specialise a family before testing it")
        p, mod, D = self.p, self.modulus, self.D
        U = up_operator(self.L, p, self.spec, self.M, self.W)
        images = [U.apply_flat(c) for c in self.comps]
        if self.ordinary:
            expected = [[x * self.alpha % mod for x in self.comps[0]]]
        else:
            a, b = self.alpha
            x0, x1 = self.comps
            expected = [[-b * y for y in x1], [u + a * y for u, y in zip(x0, x1)]]
        for got, want in zip(images, expected):
            for idx, (x, y) in enumerate(zip(got, want)):
                e = min(self.precision[idx % D] + self.scale, self.W)
                if (x - y) % p**e:
                    return False
        return True

    def relation_defect_valuations(self) -> list[int]:
        """For each moment index, the least valuation of any Manin relation defect."""
        sym = Symbolizer(self.L, self.p, self.spec, self.M, self.W)
        worst = [self.W] * self.D
        for comp in self.comps:
            vals = [mod_matrix(1, self.D, comp[i * self.D:(i + 1) * self.D], self.modulus)
                    for i in range(len(sym.gens))]
            for d in sym.defect(vals):
                for t, x in enumerate(mod_entries(d)):
                    if x:
                        worst[t] = min(worst[t], vp(x, self.p))
        return worst


def _act_blocks(mu: list[int], blocks, M: int, Mw: int, mod: int) -> list[int]:
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
# lifting


@dataclass
class LiftReport:
    iterations: int
    working_precision: int
    scale: int
    moment_precision: list[int]


def _stabilised_values(stab: Stabilisation, alpha_mod: int | None, p: int, W: int) -> tuple[list, int]:
    """Integral generator values of phi_alpha and the scale exponent t.

    Returns (per generator: list of components, each a list of k+1 ints)
    and t such that the true values are these divided by p^t.
    """
    phi = stab.symbol
    entries = [q for v in phi.values for q in v]
    t = 0
    for q in entries:
        for x in (q.x0, q.x1):
            x = Fraction(x)
            if x:
                t = max(t, -vp(x.numerator, p) + vp(x.denominator, p))
    mod = p**W
    scale = p**t

    def red(x: Fraction) -> int:
        x = Fraction(x) * scale
        return x.numerator * pow(x.denominator, -1, mod) % mod

    out = []
    for v in phi.values:
        if alpha_mod is None:
            out.append([[red(q.x0) for q in v], [red(q.x1) for q in v]])
        else:
            out.append([[(red(q.x0) + red(q.x1) * alpha_mod) % mod for q in v]])
    return out, t


def lift_noncritical(stab: Stabilisation, M: int, N: int, max_iterations: int | None = None,
                     seed: int | None = None) -> OverconvergentSymbol:
    """The unique D_k-valued U_p-eigen-symbol specialising to phi_alpha.

    ``N`` is the target p-adic precision of moment 0.  Raises
    NonConvergence when the iteration budget 2 (N + M) is exhausted and
    ValueError if the slope is critical.  With ``seed`` the moments
    above k of the starting symbol are random instead of zero.
    """
    p, k, a_p = stab.p, stab.symbol.k, stab.a_p
    L = stab.symbol.N
    ordinary = a_p % p != 0
    h = Fraction(0) if ordinary else _slope_of_nonordinary(a_p, p, k)
    if h >= k + 1:
        raise ValueError("critical slope: alpha has valuation k + 1")
    spec = WeightSpec(k)
    sym_probe = Symbolizer(L, p, spec, M, 1)
    E = sym_probe.E
    if ordinary:
        steps = N + k + 2
        W = N + E + 2 + k
    else:
        steps = math.ceil((N + 2) / (k + 1 - h)) + 1
        W = N + E + 2 + k + steps * (k + 1)
    # the stabilised values can carry p in the denominator; allow for it
    W += _denominator_bound(stab, p)
    mod = p**W
    if ordinary:
        alpha = hensel_unit_root(a_p, k, p, W)[0].residue
        values, t = _stabilised_values(stab, alpha, p, W)
    else:
        alpha = None
        values, t = _stabilised_values(stab, None, p, W)
    sym = Symbolizer(L, p, spec, M, W)
    n = len(sym.gens)
    D = M
    comps_count = 1 if ordinary else 2
    rng = random.Random(seed) if seed is not None else None
    comps: list[list[int]] = []
    blocks: list[list[list[int]]] = []
    for c in range(comps_count):
        params, raw = [], []
        for i, _ in sym.tree.free:
            tail = [rng.randrange(mod) for _ in range(M - k - 1)] if rng else [0] * (M - k - 1)
            block = list(values[i][c]) + tail
            raw.append(block)
            params.append(mod_matrix(1, D, block, mod))
        blocks.append(raw)
        vals = sym.symbolise(params)
        flat = []
        for v in vals:
            flat.extend(mod_entries(v))
        comps.append(flat)
    scale = t + E
    # fix the specialisation exactly
    comps = _match_specialisation(comps, blocks, values, sym, k, M, mod, p, E)
    U = up_operator(L, p, spec, M, W)
    budget = max_iterations if max_iterations is not None else 2 * (N + M)
    prec_target = [min(N + scale, M - j) for j in range(M)]
    b = p ** (k + 1)
    lost = 0
    it = 0
    while True:
        it += 1
        if it > budget:
            raise NonConvergence(f"no convergence after {budget} iterations")
        images = [apply_operator(U, comp, mod) for comp in comps]
        if ordinary:
            inv = pow(alpha, -1, mod)
            new = [[x * inv % mod for x in images[0]]]
        else:
            y0, y1 = images
            # (y0 + y1 alpha) / alpha = (y0 + y1 alpha)(a_p - alpha) / p^(k+1)
            z0 = [(a * a_p + c * b) for a, c in zip(y0, y1)]
            z1 = [(-a) % mod for a in y0]
            new = [[(x % mod) // b for x in z0], [x // b for x in z1]]
            lost += k + 1
        stable = all(_agree(old, cur, prec_target, D, p) for old, cur in zip(comps, new))
        comps = new
        if not ordinary and W - lost <= N + scale:
            raise NonConvergence("working precision exhausted before the lift stabilised")
        if stable and (ordinary or it >= steps):
            break
    W_eff = W - lost
    comps = [[x % p**W_eff for x in c] for c in comps]
    sym_out = OverconvergentSymbol(L, p, spec, M, W_eff, comps, scale,
                                   alpha % p**W_eff if ordinary else (a_p, b),
                                   precision=[max(0, min(N, M - j - scale)) for j in range(M)],
                                   iterations=it)
    return _reduce_scale(sym_out)


def symbols_agree(a: OverconvergentSymbol, b: OverconvergentSymbol) -> bool:
    """Whether two symbols agree in every moment to the precision both claim."""
    if (a.L, a.p, a.spec, a.M, len(a.comps)) != (b.L, b.p, b.spec, b.M, len(b.comps)):
        return False
    if a.ordinary != b.ordinary or (not a.ordinary and a.alpha != b.alpha):
        return False
    p, D = a.p, a.D
    S = max(a.scale, b.scale)
    W = min(a.W - a.scale, b.W - b.scale) + S
    mod = p**W
    prec = [min(x, y) for x, y in zip(a.precision, b.precision)]
    for ca, cb in zip(a.comps, b.comps):
        for idx, (x, y) in enumerate(zip(ca, cb)):
            d = (x * p ** (S - a.scale) - y * p ** (S - b.scale)) % mod
            e = min(prec[(idx % D) // a.spec.Mw] + S, W)
            if d % p**e:
                return False
    return True


def specialises_to(phi: OverconvergentSymbol, target: ClassicalSymbol) -> bool:
    """Whether the first k + 1 moments of phi equal the classical symbol to the claimed precision.

    ``target`` has Fraction values (ordinary) or QuadNumber values in the
    Hecke root (pairs), as produced by ``p_stabilise``.
    """
    p, k = phi.p, phi.k
    if (target.N, target.k) != (phi.L, k):
        return False

    def reduce(q):
        return Fraction(q.x0) + Fraction(q.x1) * phi.alpha if isinstance(q, QuadNumber) else Fraction(q)

    ours = phi.specialise()
    for mine, theirs in zip(ours.values, target.values):
        for j, (x, y) in enumerate(zip(mine, theirs)):
            pairs = [(Fraction(x), reduce(y))] if phi.ordinary else [
                (Fraction(x.x0), Fraction(y.x0)), (Fraction(x.x1), Fraction(y.x1))]
            for a, b in pairs:
                d = a - b
                if d and vp(d.numerator, p) - vp(d.denominator, p) < phi.precision[j]:
                    return False
    return True


def _slope_of_nonordinary(a_p: int, p: int, k: int) -> Fraction:
    if a_p == 0:
        return Fraction(k + 1, 2)
    v = vp(a_p, p)
    return Fraction(min(v, Fraction(k + 1, 2)))


def _denominator_bound(stab: Stabilisation, p: int) -> int:
    t = 0
    for v in stab.symbol.values:
        for q in v:
            for x in (q.x0, q.x1):
                x = Fraction(x)
                if x:
                    t = max(t, vp(x.denominator, p) - vp(x.numerator, p))
    return t


def _agree(u: list[int], v: list[int], prec: list[int], D: int, p: int) -> bool:
    mods = [p**e if e > 0 else 1 for e in prec]
    for idx, (x, y) in enumerate(zip(u, v)):
        if (x - y) % mods[idx % D]:
            return False
    return True


def _match_specialisation(comps, blocks, values, sym: Symbolizer, k: int, M: int, mod: int, p: int, E: int):
    """Adjust free higher moments so that the root value specialises correctly.

    The root generator's moments 0..k are forced by moments up to k + 1
    of its neighbours; one free moment k + 1 is moved to make them match
    the classical value.
    """
    gens = sym.gens
    root = sym.tree.root
    D = M
    pE = p**E
    out = []
    for c, comp in enumerate(comps):
        target = [x * pE % mod for x in values[root][c]]
        have = comp[root * D: root * D + k + 1]
        diff = [(x - y) % mod for x, y in zip(target, have)]
        if not any(diff):
            out.append(comp)
            continue
        if k + 1 >= M:
            raise PrecisionError("not enough moments to fix the specialisation")
        # response of the root's top classical moment to each free moment k + 1
        nfree = sym.tree.n_free
        basis = []
        for f in range(nfree):
            row = [0] * (nfree * D)
            row[f * D + k + 1] = 1
            basis.append(row)
        params = [mod_matrix(nfree, D, [basis[r][f * D + j] for r in range(nfree) for j in range(D)], mod)
                  for f in range(nfree)]
        vals = sym.symbolise(params)
        resp = mod_entries(vals[root])  # nfree x D, scaled by p^E
        # moments < k of the root are already right; only moment k can differ
        if any(diff[:k]):
            raise PrecisionError("specialisation mismatch below the top classical moment")
        best = min(range(nfree), key=lambda f: vp(resp[f * D + k], p) if resp[f * D + k] else 10**9)
        coef = resp[best * D + k]
        if coef == 0:
            raise PrecisionError("free moments cannot reach the root value")
        e = vp(coef, p)
        if diff[k] % p**e:
            raise PrecisionError("specialisation correction is not integral")
        x = (diff[k] // p**e) * pow(coef // p**e, -1, mod) % mod
        # x is in units of the parametrisation: move that free moment by x and rebuild.
        # The stored values cannot be divided back by p^E: projecting a free generator
        # of order 3 divides by 3, so at p = 3 its value carries only p^(E-1).
        unscaled = []
        for f, block in enumerate(blocks[c]):
            block = list(block)
            if f == best:
                block[k + 1] = (block[k + 1] + x) % mod
            unscaled.append(mod_matrix(1, D, block, mod))
        vals = sym.symbolise(unscaled)
        flat = []
        for v in vals:
            flat.extend(mod_entries(v))
        out.append(flat)
    return out


def _reduce_scale(phi: OverconvergentSymbol) -> OverconvergentSymbol:
    """Divide out common powers of p from the stored values."""
    p = phi.p
    common = phi.scale
    for comp in phi.comps:
        for x in comp:
            if x:
                common = min(common, vp(x, p))
                if common == 0:
                    return phi
    if common <= 0:
        return phi
    pc = p**common
    phi.comps = [[x // pc for x in comp] for comp in phi.comps]
    phi.W -= common
    phi.scale -= common
    if phi.ordinary:
        phi.alpha %= p**phi.W
    return phi


# ---------------------------------------------------------------------------
# U_p on the parameter space and slopes


def parameter_operator(L: int, p: int, spec: WeightSpec, M: int, W: int,
                       op: CochainOperator | None = None) -> tuple[object, Symbolizer]:
    """Matrix of read o op o symbolise on free parameters, scaled by p^E.

    Row convention: a parameter row vector F maps to F * matrix.  The
    returned matrix equals p^E times the true operator, where E is the
    symbolizer's scaling exponent.
    """
    sym = Symbolizer(L, p, spec, M, W)
    op = op or up_operator(L, p, spec, M, W)
    D = sym.D
    nf = sym.tree.n_free
    m = nf * D
    mod = p**W
    params = []
    for f in range(nf):
        flat = [0] * (m * D)
        for a in range(D):
            flat[(f * D + a) * D + a] = 1
        params.append(mod_matrix(m, D, flat, mod))
    values = sym.symbolise(params)
    images = op.apply(values)
    read = sym.read(images)
    rows = [mod_entries(r) for r in read]  # each m x D
    flat = []
    for r in range(m):
        for f in range(nf):
            flat.extend(rows[f][r * D:(r + 1) * D])
    return mod_matrix(m, m, flat, mod), sym


@dataclass(frozen=True)
class CharSeries:
    """Characteristic polynomial of the truncated U_p and its Newton polygon.

    ``coefficients`` are the residues mod p^precision of det(1 - x U),
    listed from x^0 upwards.  Slopes are those of U_p itself.
    """

    p: int
    precision: int
    coefficients: tuple[int, ...]
    slopes: tuple[Fraction, ...]

    def slope_multiplicity(self, s: Fraction) -> int:
        return sum(1 for x in self.slopes if x == s)

    def slopes_below(self, bound: Fraction) -> tuple[Fraction, ...]:
        return tuple(x for x in self.slopes if x < bound)


def newton_slopes(valuations: Sequence[int | None]) -> list[Fraction]:
    """Slopes of the lower convex hull of points (i, v_i), None being infinite.

    The polynomial is sum c_i x^i with c_0 a unit; slopes are reported
    as the negatives of the hull's gradients' opposites, i.e. the
    valuations of reciprocal roots, in increasing order.
    """
    pts = [(i, v) for i, v in enumerate(valuations) if v is not None]
    if not pts or pts[0][0] != 0:
        raise ValueError("constant term must be nonzero")
    hull = [pts[0]]
    for q in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (q[0] - x1) >= (q[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(q)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        out.extend([s] * (x2 - x1))
    return out


def up_char_series(L: int, p: int, k: int, M: int, W: int | None = None) -> CharSeries:
    """det(1 - x U_p) on truncated D_k-valued symbols of level L (times p if p does not divide L).

    Slopes below min(M, W - E) - 1 are meaningful; compare two values of
    M to see which have stabilised.
    """
    if L % p:
        L *= p
    spec = WeightSpec(k)
    if W is None:
        # enough digits to see every root of slope below k + 1 after the p^E scaling:
        # there are at most as many as classical parameters, n_free (k + 1) + 1
        probe = Symbolizer(L, p, spec, M, 1)
        W = M + 6 + (probe.E + k + 1) * (probe.tree.n_free * (k + 1) + 1)
    Ut, sym = parameter_operator(L, p, spec, M, W)
    E = sym.E
    m = Ut.nrows()
    mod = p**W
    Z = flint.fmpz_mat(m, m, [x if x <= mod // 2 else x - mod for x in mod_entries(Ut)])
    cp = Z.charpoly()  # monic, degree m: x^m + c_{m-1} x^{m-1} + ...
    coeffs = [int(c) for c in cp.coeffs()]  # low to high
    # det(1 - x U~) has coefficients (-1)^i c_{m-i}; only their valuations are used
    rev = [coeffs[m - i] % mod for i in range(m + 1)]
    prec_cap = W
    vals = []
    for i, c in enumerate(rev):
        # scaled coefficient is p^(i E) times the true one
        v = vp(c, p) if c else None
        if v is not None and v >= prec_cap:
            v = None
        vals.append(v)
    slopes_scaled = newton_slopes(vals)
    slopes = tuple(s - E for s in slopes_scaled)
    return CharSeries(p, W, tuple(rev), slopes)


# ---------------------------------------------------------------------------
# weight families


def read_parameters(phi: OverconvergentSymbol, comp: int = 0) -> list[int]:
    """Free parameters (generator values on the free slots) of a symbol."""
    sym = Symbolizer(phi.L, phi.p, phi.spec, phi.M, phi.W)
    D = phi.D
    out = []
    for i, _ in sym.tree.free:
        out.extend(phi.comps[comp][i * D:(i + 1) * D])
    return out


@dataclass
class FamilySymbol:
    """A symbol valued in distributions over (Z/p^W)[w]/(w^Mw).

    ``symbol`` stores the family values (flat index j * Mw + t) with the
    usual scale; ``alpha`` is the U_p-eigenvalue as a power series in w;
    ``parameters`` are the free values, one list per power of w.
    """

    symbol: OverconvergentSymbol
    alpha: tuple[int, ...]
    parameters: list[list[int]]
    precision: int

    @property
    def spec(self) -> WeightSpec:
        return self.symbol.spec

    def alpha_at(self, k: int) -> int:
        p = self.symbol.p
        check_in_disc(k, self.spec.k0, p)
        w = k - self.spec.k0
        mod = p**self.precision
        return sum(a * pow(w, t, mod) for t, a in enumerate(self.alpha)) % mod

    def precision_at(self, k: int) -> int:
        """Digits of the weight-k member that survive the truncation at w^Mw."""
        check_in_disc(k, self.spec.k0, self.symbol.p)
        bound = truncation_precision(self.symbol.p, self.spec.Mw, k - self.spec.k0)
        return self.precision if bound is None else min(self.precision, bound)


def truncation_precision(p: int, Mw: int, w: int) -> int | None:
    """Least valuation of w^t log<a>^t / t! over the dropped terms t >= Mw.

    None when w = 0, where truncation loses nothing.
    """
    if w == 0:
        return None
    v = vp(w, p)
    return min(t * (v + 1) - vp(math.factorial(t), p) for t in range(Mw, Mw + 2 * p + 2))


def _toeplitz_blocks(big, m0: int, Mw: int, D0: int, nf: int) -> list[list[list[int]]]:
    """U_t on parameters from the flat family matrix (index (f, j, t))."""
    ent = mod_entries(big)
    size = nf * D0 * Mw
    out = []
    for t in range(Mw):
        rows = []
        for f in range(nf):
            for j in range(D0):
                r = (f * D0 + j) * Mw
                row = []
                for g in range(nf):
                    for i in range(D0):
                        row.append(ent[r * size + (g * D0 + i) * Mw + t])
                rows.append(row)
        out.append(rows)
    return out


def _to_fmpq(rows: list[list[int]], mod: int, scale: int) -> flint.fmpq_mat:
    half = mod // 2
    m = len(rows)
    n = len(rows[0]) if rows else 0
    return flint.fmpq_mat(m, n, [flint.fmpq(x - mod if x > half else x, scale) for row in rows for x in row])


def _padic_residue(x, p: int, mod: int) -> int:
    num, den = int(x.p), int(x.q)
    if den % p == 0:
        raise PrecisionError("family solve produced a non-integral coefficient")
    return num * pow(den, -1, mod) % mod


def family_lift(direct: OverconvergentSymbol, Mw: int, W: int | None = None, sign: int = 1) -> FamilySymbol:
    """The ordinary family through a lifted eigen-symbol of weight k0.

    Solves U_p F(w) = alpha(w) F(w) order by order in w on the free
    parameters, with F(0) the parameters of ``direct`` and the sign
    eigenspace of the involution selected so that alpha(0) is simple.
    """
    if not direct.ordinary:
        raise ValueError("families are built through ordinary points only")
    p, L, M, k0 = direct.p, direct.L, direct.M, direct.k
    W = W or direct.W
    W = min(W, direct.W)
    mod = p**W
    spec = WeightSpec(k0, Mw)
    Ubig, sym = parameter_operator(L, p, spec, M, W)
    Ibig, _ = parameter_operator(L, p, spec, M, W, involution_operator(L, p, spec, M, W))
    E = sym.E
    nf = sym.tree.n_free
    m0 = nf * M
    pE = p**E
    U = [_to_fmpq(b, mod, pE) for b in _toeplitz_blocks(Ubig, m0, Mw, M, nf)]
    I = [_to_fmpq(b, mod, pE) for b in _toeplitz_blocks(Ibig, m0, Mw, M, nf)]
    ident = flint.fmpq_mat(m0, m0, [1 if r == c else 0 for r in range(m0) for c in range(m0)])
    P = [(ident + sign * I[0]) / 2] + [sign * I[t] / 2 for t in range(1, Mw)]
    A = []  # (P U)_t
    for t in range(Mw):
        acc = flint.fmpq_mat(m0, m0)
        for a in range(t + 1):
            acc = acc + P[a] * U[t - a]
        A.append(acc)
    # F_0 from the direct lift (true values, so divide by its scale)
    raw = read_parameters(direct)
    dmod = p**direct.W
    F0 = [flint.fmpq(x - dmod if x > dmod // 2 else x, p**direct.scale) for x in raw]
    e = min(range(m0), key=lambda i: vp(int(F0[i].p), p) if F0[i] != 0 else 10**9)
    alpha0 = flint.fmpq(direct.alpha % mod)
    F = [F0]
    alphas = [alpha0]
    size = m0 + 1
    B = flint.fmpq_mat(size, size)
    for r in range(m0):
        for c in range(m0):
            B[c, r] = A[0][r, c] - (alpha0 if r == c else 0)
    for r in range(m0):
        B[m0, r] = 1 if r == e else 0  # normalisation row: F_j[e] = 0
    for c in range(m0):
        B[c, m0] = -F0[c]
    for j in range(1, Mw):
        rhs = [flint.fmpq(0)] * m0
        for b in range(1, j):
            for c in range(m0):
                rhs[c] += alphas[b] * F[j - b][c]
        for b in range(1, j + 1):
            Fv = flint.fmpq_mat(1, m0, F[j - b])
            prod = Fv * A[b]
            for c in range(m0):
                rhs[c] -= prod[0, c]
        col = flint.fmpq_mat(size, 1, rhs + [flint.fmpq(0)])
        sol = B.solve(col)
        Fj = [flint.fmpq(sol[c, 0]) for c in range(m0)]
        # reduce to p-adic residues to keep the numbers small
        Fj = [flint.fmpq(_padic_residue(x, p, mod)) for x in Fj]
        F.append(Fj)
        alphas.append(flint.fmpq(_padic_residue(sol[m0, 0], p, mod)))
    # the family symbol from its parameters
    params = []
    D = M * Mw
    for f in range(nf):
        flat = []
        for jm in range(M):
            for t in range(Mw):
                flat.append(_padic_residue(F[t][f * M + jm], p, mod))
        params.append(mod_matrix(1, D, flat, mod))
    vals = sym.symbolise(params)
    comps = []
    for v in vals:
        comps.extend(mod_entries(v))
    fam = OverconvergentSymbol(L, p, spec, M, W, [comps], E, direct.alpha % mod,
                               precision=list(direct.precision))
    alpha_series = tuple(_padic_residue(a, p, mod) for a in alphas)
    param_lists = [[_padic_residue(x, p, mod) for x in Ft] for Ft in F]
    return FamilySymbol(fam, alpha_series, param_lists, W)


def specialise_family(fam: FamilySymbol, k: int) -> OverconvergentSymbol:
    """The weight-k member: substitute w = k - k0 in every moment."""
    sym = fam.symbol
    p, Mw, M = sym.p, sym.spec.Mw, sym.M
    check_in_disc(k, sym.spec.k0, p)
    w = k - sym.spec.k0
    mod = p**sym.W
    powers = [pow(w, t, mod) for t in range(Mw)]
    comp = sym.comps[0]
    out = []
    for base in range(0, len(comp), Mw):
        out.append(sum(comp[base + t] * powers[t] for t in range(Mw)) % mod)
    alpha = fam.alpha_at(k)
    cap = fam.precision_at(k)
    return OverconvergentSymbol(sym.L, p, WeightSpec(k), M, sym.W, [out], sym.scale, alpha,
                                precision=[min(x, cap) for x in sym.precision])
