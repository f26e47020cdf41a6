"""Free parametrisation of distribution-valued modular symbols.

The Manin relations for Gamma_0(L) form a graph: each three-term
relation (a tau-orbit of generators) is a node and each two-term
relation joining two different generators (a sigma-orbit of size two) is
an edge.  Fixing a spanning tree rooted at the triangle containing the
identity coset, a symbol is determined by

* its values on generators of the non-tree edges (one per edge),
* its values on sigma-fixed and tau-fixed generators, projected to the
  subspace cut out by their own relation,

because every other value follows by walking the tree from the leaves
to the root.  The root relation becomes the difference equation
mu | (1 - T) = nu with T a translation, solved moment by moment.  That
solve divides by the moment index, so outputs are carried scaled by
p^E with E = 1 + max v_p(j).

All values are handled in batches: a batch is an R x D matrix over
Z/p^W whose rows are independent symbols' values on one generator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .distributions import WeightSpec, action_matrix_flat, mod_entries, mod_matrix
from .manin import IDENTITY, ManinGenerators, mat_inv_sl2, mat_mul, manin_generators
from .padic import PrecisionError, vp


@dataclass
class ManinTree:
    """The combinatorial schedule; depends only on the level."""

    L: int
    gens: ManinGenerators = field(repr=False)
    root: int
    root_link: int  # the generator a' of the root triangle on a tree or free edge
    root_partner: int  # sigma(root)
    free: list[tuple[int, str]]  # (generator, projection kind: "none" / "sigma" / "tau")
    steps: list[tuple]  # ("sigma", x) or ("triangle", x), in evaluation order
    n_links: int
    n_triangles: int

    @property
    def n_free(self) -> int:
        return len(self.free)


@lru_cache(maxsize=None)
def manin_tree(L: int) -> ManinTree:
    gens = manin_generators(L)
    n = len(gens)
    if L == 1:
        raise ValueError("level one has no usable presentation")
    # tau-orbits
    node_of = [-1] * n
    nodes: list[list[int]] = []
    for i in range(n):
        if node_of[i] < 0:
            orbit = [i]
            (j1, _), (j2, _) = gens.tau[i]
            for j in (j1, j2):
                if j not in orbit:
                    orbit.append(j)
            for j in orbit:
                node_of[j] = len(nodes)
            nodes.append(orbit)
    root = gens.p1.index(0, 1)
    root_partner = gens.sigma[root][0]
    root_node = node_of[root]
    if node_of[root_partner] != root_node:
        raise AssertionError("identity triangle does not contain its own sigma partner")
    others = [j for j in nodes[root_node] if j not in (root, root_partner)]
    if len(others) != 1:
        raise AssertionError("unexpected shape of the identity triangle")
    root_link = others[0]

    # links: sigma-orbits of size two
    link_pairs = []
    dangling = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        j = gens.sigma[i][0]
        seen.update((i, j))
        if i == j:
            dangling.append(i)
        else:
            link_pairs.append((min(i, j), max(i, j)))
    adjacency: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(len(nodes))}
    for a, b in link_pairs:
        if {a, b} == {root, root_partner}:
            continue
        na, nb = node_of[a], node_of[b]
        if na == nb:
            continue
        adjacency[na].append((nb, a, b))
        adjacency[nb].append((na, b, a))
    # breadth-first spanning tree; parent_gen[v] is the generator in v on the edge to its parent
    parent_gen: dict[int, int] = {}
    order = [root_node]
    visited = {root_node}
    queue = deque([root_node])
    tree_links = set()
    while queue:
        v = queue.popleft()
        for w, g_v, g_w in adjacency[v]:
            if w in visited:
                continue
            visited.add(w)
            parent_gen[w] = g_w
            tree_links.add((min(g_v, g_w), max(g_v, g_w)))
            order.append(w)
            queue.append(w)
    if len(visited) != len(nodes):
        raise AssertionError("relation graph is not connected")

    free: list[tuple[int, str]] = []
    steps: list[tuple] = []
    for a, b in link_pairs:
        if {a, b} == {root, root_partner} or (a, b) in tree_links:
            continue
        free.append((a, "none"))
        steps.append(("sigma", b))
    for i in dangling:
        free.append((i, "sigma"))
    # leaves first: reverse breadth-first order
    for v in reversed(order[1:]):
        x = parent_gen[v]
        if len(nodes[v]) == 1:
            free.append((x, "tau"))
        else:
            steps.append(("triangle", x))
        steps.append(("sigma", gens.sigma[x][0]))
    return ManinTree(L, gens, root, root_link, root_partner, free, steps,
                     len(link_pairs), sum(1 for v in nodes if len(v) == 3))


def _neg_inv(g):
    return mat_inv_sl2(g)


class Symbolizer:
    """Linear maps between free parameters and symbol values over Z/p^W.

    Parameters are a list of n_free blocks of D = M * Mw moments.  The
    symbolise map returns p^E times the symbol with those free values.
    """

    def __init__(self, L: int, p: int, spec: WeightSpec, M: int, W: int):
        if L % p:
            raise ValueError("the level must be divisible by p")
        self.L, self.p, self.spec, self.M, self.W = L, p, spec, M, W
        self.mod = p**W
        self.tree = manin_tree(L)
        self.gens = self.tree.gens
        self.D = M * spec.Mw
        self.E = 1 + max((vp(j, p) for j in range(1, M)), default=0)
        if p == 3 and any(kind == "tau" for _, kind in self.tree.free):
            self.E += 1
        if p == 2:
            raise ValueError("p = 2 is not supported")

    # matrices ------------------------------------------------------------
    @lru_cache(maxsize=None)
    def _act(self, g) -> object:
        B = action_matrix_flat(g, self.p, self.spec, self.M, self.W)
        return mod_matrix(self.D, self.D, [x for row in B for x in row], self.mod)

    def _zero(self, R: int):
        return mod_matrix(R, self.D, [0] * (R * self.D), self.mod)

    @cached_property
    def root_translation(self):
        gens = self.gens
        (j1, g1), (j2, g2) = gens.tau[self.tree.root]
        partner = self.tree.root_partner
        j_s, gs = gens.sigma[partner]
        assert j_s == self.tree.root
        if j2 == partner:
            other_gen, other_mat, part_mat = j1, g1, g2
        else:
            assert j1 == partner
            other_gen, other_mat, part_mat = j2, g2, g1
        assert other_gen == self.tree.root_link
        # v_root + v_link | o^-1 + v_partner | q^-1 = 0 and v_partner = -v_root | gs^-1
        T = mat_mul(mat_inv_sl2(gs), mat_inv_sl2(part_mat))
        if T[2] != 0 or abs(T[0]) != 1 or abs(T[3]) != 1 or abs(T[1]) != 1:
            raise AssertionError(f"root relation is not a unit translation: {T}")
        return T, mat_inv_sl2(other_mat)

    # the map -------------------------------------------------------------
    def symbolise(self, params: list) -> list:
        """Values (scaled by p^E) on all generators; params are R x D mod matrices."""
        gens = self.gens
        tree = self.tree
        pE = self.p**self.E
        vals: list = [None] * len(gens)
        for (i, kind), block in zip(tree.free, params):
            block = block * pE
            if kind == "sigma":
                _, g = gens.sigma[i]
                # v + v | g^-1 = 0: project by (u - u | g^-1) / 2
                u = block - block * self._act(mat_inv_sl2(g))
                block = u * pow(2, -1, self.mod)
            elif kind == "tau":
                (j1, g1), (j2, g2) = gens.tau[i]
                assert j1 == j2 == i
                u = block * 2 - block * self._act(mat_inv_sl2(g1)) - block * self._act(mat_inv_sl2(g2))
                block = self._divide(u, 3)
            vals[i] = block
        for kind, x in tree.steps:
            if kind == "sigma":
                j, g = gens.sigma[x]
                vals[x] = -(vals[j] * self._act(mat_inv_sl2(g)))
            else:
                (j1, g1), (j2, g2) = gens.tau[x]
                vals[x] = -(vals[j1] * self._act(mat_inv_sl2(g1)) + vals[j2] * self._act(mat_inv_sl2(g2)))
        T, link_mat = self.root_translation
        nu = -(vals[tree.root_link] * self._act(link_mat))
        vals[tree.root] = self._solve_difference(nu, T)
        j, g = gens.sigma[tree.root_partner]
        vals[tree.root_partner] = -(vals[j] * self._act(mat_inv_sl2(g)))
        assert all(v is not None for v in vals)
        return vals

    def read(self, values: list) -> list:
        """Free parameters of a symbol given by its generator values."""
        return [values[i] for i, _ in self.tree.free]

    # helpers -------------------------------------------------------------
    def _divide(self, m, d: int):
        """Exact division of every entry by d (p-part checked, precision drops)."""
        e = vp(d, self.p)
        unit = d // self.p**e
        inv = pow(unit, -1, self.mod)
        if e == 0:
            return m * inv
        pe = self.p**e
        ent = mod_entries(m)
        out = []
        for x in ent:
            if x % pe:
                raise PrecisionError("inexact division while building a symbol")
            out.append((x // pe) * inv)
        return mod_matrix(m.nrows(), m.ncols(), out, self.mod)

    def _solve_difference(self, nu, T):
        """mu with mu | (1 - T) = nu; the top moment of every w-power is set to 0."""
        M, Mw, D, p, mod = self.M, self.spec.Mw, self.D, self.p, self.mod
        A = action_matrix_flat(T, p, self.spec, M, self.W)
        # Lmat[i][j] for moment indices (w-independent since T has c = 0)
        Lm = [[((1 if i == j else 0) - A[i * Mw][j * Mw]) % mod for j in range(M)] for i in range(M)]
        R = nu.nrows()
        rows = [mod_entries(nu)[r * D:(r + 1) * D] for r in range(R)]
        out = []
        for row in rows:
            mu = [0] * D
            for t in range(Mw):
                m = [0] * M
                for j in range(1, M):
                    s = row[j * Mw + t]
                    for i in range(j - 1):
                        if Lm[i][j]:
                            s -= m[i] * Lm[i][j]
                    piv = Lm[j - 1][j]
                    if piv > mod // 2:
                        piv -= mod
                    e = vp(piv, p)
                    s %= mod
                    if e:
                        pe = p**e
                        if s % pe:
                            raise PrecisionError("inexact division in the difference equation")
                        s //= pe
                    m[j - 1] = s * pow(piv // p**e, -1, mod) % mod
                for j in range(M):
                    mu[j * Mw + t] = m[j]
            out.extend(mu)
        return mod_matrix(R, D, out, self.mod)

    def defect(self, values: list) -> list:
        """All Manin relations evaluated on values (lists of ints per generator)."""
        gens = self.gens
        out = []
        for i in range(len(gens)):
            j, g = gens.sigma[i]
            out.append(values[i] + values[j] * self._act(mat_inv_sl2(g)))
            (j1, g1), (j2, g2) = gens.tau[i]
            out.append(values[i] + values[j1] * self._act(mat_inv_sl2(g1)) + values[j2] * self._act(mat_inv_sl2(g2)))
        return out


def filtration_exponents(p: int, M: int, N: int, Mw: int = 1) -> list[int]:
    """Exponent e_j: moment j is meaningful modulo p^e_j (flat index layout)."""
    out = []
    for j in range(M):
        e = min(N, M - j)
        out.extend([max(e, 0)] * Mw)
    return out


IDENTITY_MAT = IDENTITY
