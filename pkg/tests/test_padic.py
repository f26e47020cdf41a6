from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bcpadic.padic import (
    AtLeast,
    PadicScalar,
    PrecisionError,
    QuadExtScalar,
    hensel_unit_root,
    quadratic_is_irreducible,
    teichmuller,
    vp,
)

PRIMES = st.sampled_from([3, 5, 7, 11])


def test_valuation_normalisation():
    for p in (3, 5, 7, 101):
        assert PadicScalar(p, 10, p).valuation() == 1
    assert PadicScalar(5, 10, 1).valuation() == 0
    assert PadicScalar(5, 4, 5**4).valuation() == AtLeast(4)


def test_root_of_x2_plus_5_has_half_valuation():
    alpha = QuadExtScalar.generator(5, 10, 0, 5)
    assert alpha.valuation() == Fraction(1, 2)
    assert alpha.norm() == PadicScalar(5, 10, 5)
    assert quadratic_is_irreducible(0, 5, 5)


def test_teichmuller_examples():
    assert teichmuller(1, 5, 7).residue == 1
    x = teichmuller(2, 5, 3).residue
    assert x % 5 == 2 and pow(x, 4, 125) == 1
    # brute force: the only such residue mod 125
    assert [y for y in range(125) if y % 5 == 2 and pow(y, 4, 125) == 1] == [x]
    for p in (3, 5, 7):
        assert teichmuller(p - 1, p, 6).residue == p**6 - 1


@given(PRIMES, st.integers(1, 10**6), st.integers(1, 12))
def test_teichmuller_is_root_of_unity(p, a, N):
    if a % p == 0:
        a += 1
    w = teichmuller(a, p, N).residue
    assert w % p == a % p
    assert pow(w, p - 1, p**N) == 1


def test_hensel_examples():
    a, b = hensel_unit_root(1, 0, 5, 12)
    assert a.residue % 5 == 1
    assert a * b == PadicScalar(5, 12, 5)
    assert a + b == PadicScalar(5, 12, 1)
    a3, _ = hensel_unit_root(-1, 0, 3, 10)
    assert a3.residue % 3 == 2
    a6, b6 = hensel_unit_root(6, 0, 5, 10)
    assert a6.is_unit() and b6.valuation() == 1
    with pytest.raises(ValueError):
        hensel_unit_root(5, 0, 5, 10)


@given(PRIMES, st.integers(-50, 50), st.integers(0, 3), st.integers(2, 15))
def test_hensel_root_satisfies_polynomial(p, a_p, k, N):
    if a_p % p == 0:
        a_p += 1
    alpha, beta = hensel_unit_root(a_p, k, p, N)
    m = p**N
    x = alpha.residue
    assert (x * x - a_p * x + p ** (k + 1)) % m == 0
    assert alpha.is_unit()
    assert (alpha.residue * beta.residue - p ** (k + 1)) % m == 0


def test_p_equal_two_rejected():
    with pytest.raises(ValueError, match="p = 2"):
        PadicScalar(2, 5, 1)
    with pytest.raises(ValueError):
        PadicScalar(9, 5, 1)


def test_shift_down_and_digits():
    x = PadicScalar(3, 6, 2 * 27 + 81)
    y = x.shift_down(3)
    assert y.N == 3 and y.residue == 2 + 3
    assert PadicScalar(5, 3, 1 + 2 * 5 + 4 * 25).digits() == [1, 2, 4]
    with pytest.raises(PrecisionError):
        PadicScalar(3, 6, 1).shift_down(1)
    with pytest.raises(ZeroDivisionError):
        PadicScalar(3, 6, 3).inverse()


@given(PRIMES, st.integers(2, 10), st.integers(), st.integers(), st.integers())
def test_padic_ring_axioms(p, N, a, b, c):
    x, y, z = (PadicScalar(p, N, v) for v in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x.is_unit():
        assert x * x.inverse() == 1


@given(PRIMES, st.integers(2, 8), st.integers(-20, 20), st.integers(1, 30),
       st.lists(st.integers(-10**6, 10**6), min_size=6, max_size=6))
def test_quadratic_extension_ring_axioms(p, N, a, b, v):
    x, y, z = (QuadExtScalar(p, N, a, b, v[2 * i], v[2 * i + 1]) for i in range(3))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x * y).norm() == x.norm() * y.norm()
    if x.is_unit():
        assert x * x.inverse() == QuadExtScalar(p, N, a, b, 1, 0)


@given(PRIMES, st.integers(1, 10**8), st.integers(0, 40))
def test_vp_of_products(p, u, e):
    assert vp(u * p**e, p) == vp(u, p) + e
    assert vp(0, p, cap=7) == 7
