import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bcpadic.manin import (
    P1List,
    act_on_cusp,
    cusp_count,
    manin_generators,
    mat_det,
    mat_mul,
    unimodular_pieces,
)


def psi_index(N):
    out = N
    for q in range(2, N + 1):
        if N % q == 0 and all(q % r for r in range(2, q)):
            out = out * (q + 1) // q
    return out


@pytest.mark.parametrize("N", [1, 2, 11, 12, 27, 55, 75])
def test_p1_size_is_the_index(N):
    assert len(P1List(N)) == psi_index(N)


@pytest.mark.parametrize("N", [11, 17, 45, 55])
def test_lifts_are_in_sl2_with_the_right_row(N):
    P = P1List(N)
    for i in range(len(P)):
        g = P.lift(i)
        assert mat_det(g) == 1
        assert P.index(g[2], g[3]) == i


@pytest.mark.parametrize("N", [11, 33, 55])
def test_find_lands_in_gamma0(N):
    G = manin_generators(N)
    for g in G.mats:
        for h in ((0, -1, 1, 0), (1, 1, 0, 1), (2, 1, 1, 1)):
            i, gamma = G.find(mat_mul(g, h))
            assert gamma[2] % N == 0 and mat_det(gamma) == 1


def test_cusp_counts():
    assert [cusp_count(N) for N in (1, 11, 27, 55, 75)] == [1, 2, 6, 4, 12]


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_unimodular_pieces_chain_from_infinity(a, c):
    x = Fraction(a, c)
    pieces = unimodular_pieces(x)
    assert all(mat_det(g) == 1 for g in pieces)
    # g{0 -> oo} runs from b/d to a/c; consecutive pieces share end points
    start = None
    for g in pieces:
        assert act_on_cusp(g, Fraction(0)) == start
        start = act_on_cusp(g, None)
    assert start == x
