import random

import pytest

from bcpadic.distributions import WeightSpec, mod_entries, mod_matrix
from bcpadic.presentation import Symbolizer, filtration_exponents, manin_tree
from bcpadic.padic import vp


@pytest.mark.parametrize("L,p,k", [(33, 3, 0), (55, 5, 0), (51, 3, 0), (77, 7, 0), (95, 5, 0)])
def test_random_parameters_give_symbols(L, p, k):
    """In weight 0 every choice of free values extends to a symbol: all Manin relations vanish mod filtration."""
    M, W = 8, 14
    sym = Symbolizer(L, p, WeightSpec(k), M, W)
    rng = random.Random(L)
    params = [mod_matrix(1, M, [rng.randrange(p**W) for _ in range(M)], p**W) for _ in sym.tree.free]
    vals = sym.symbolise(params)
    assert len(vals) == len(sym.gens)
    defects = [mod_entries(d) for d in sym.defect(vals)]
    for j in range(M):
        worst = min((vp(d[j], p) for d in defects if d[j]), default=W)
        # values are scaled by p^E and moment j is meaningful mod p^(M - j)
        assert worst >= sym.E + M - j


def test_read_recovers_parameters_up_to_scale():
    L, p, M, W = 55, 5, 6, 12
    sym = Symbolizer(L, p, WeightSpec(0), M, W)
    rng = random.Random(1)
    params = [mod_matrix(1, M, [rng.randrange(p**W) for _ in range(M)], p**W) for _ in sym.tree.free]
    back = sym.read(sym.symbolise(params))
    scale = p**sym.E
    for a, b in zip(params, back):
        for x, y in zip(mod_entries(a), mod_entries(b)):
            assert (x * scale - y) % p ** (W - sym.E) == 0


def test_tree_counts_are_consistent():
    t = manin_tree(55)
    assert t.n_free >= 1
    assert t.L == 55


def test_level_must_contain_p():
    with pytest.raises(ValueError):
        Symbolizer(11, 5, WeightSpec(0), 5, 8)


def test_filtration_exponents():
    assert filtration_exponents(5, 4, 10) == [4, 3, 2, 1]
    assert filtration_exponents(5, 3, 2, Mw=2) == [2, 2, 2, 2, 1, 1]
