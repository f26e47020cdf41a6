import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bcpadic.cyclotomic import CyclotomicElement, cyclotomic_sum, euler_phi

from oracles import complex_value

CONDUCTORS = st.sampled_from([1, 3, 4, 5, 8, 9, 12, 15, 20, 25])


def elements(m):
    return st.lists(st.integers(-20, 20), min_size=m, max_size=m).map(
        lambda cs: CyclotomicElement.from_power_counts(m, cs))


@st.composite
def element_triples(draw):
    m = draw(CONDUCTORS)
    return m, draw(elements(m)), draw(elements(m)), draw(elements(m))


def test_euler_phi_small():
    assert [euler_phi(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_sum_of_primitive_roots_is_mobius():
    for m, mu in ((1, 1), (2, -1), (5, -1), (6, 1), (9, 0), (15, 1)):
        counts = [1 if math.gcd(e, m) == 1 else 0 for e in range(m)]
        assert CyclotomicElement.from_power_counts(m, counts) == mu
    assert CyclotomicElement.from_power_counts(7, [1] * 7) == 0


def test_zeta_power_identity():
    z = CyclotomicElement.zeta(12)
    assert z**12 == 1 and z**6 == -1
    assert CyclotomicElement.zeta(4).lift_to(12) == z**3


@given(element_triples())
def test_ring_axioms(t):
    _, x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    if not x.is_zero():
        assert x * x.inverse() == 1


@given(element_triples())
def test_embedding_is_a_ring_map(t):
    _, x, y, _ = t
    assert abs(complex_value(x * y) - complex_value(x) * complex_value(y)) < 1e-6 * (1 + abs(complex_value(x * y)))
    assert abs(complex_value(x.conj()) - complex_value(x).conjugate()) < 1e-8


@given(element_triples(), st.integers(1, 100))
def test_galois_is_multiplicative(t, s):
    m, x, y, _ = t
    if math.gcd(s, m) != 1:
        s = 1
    assert (x * y).galois(s) == x.galois(s) * y.galois(s)


def test_norm_of_one_minus_zeta_p():
    for p in (3, 5, 7):
        assert (1 - CyclotomicElement.zeta(p)).norm_to_q() == p


def test_mod_reduction_and_json():
    x = CyclotomicElement.from_power_counts(5, [7, 0, 26, 0, 0])
    r = x.reduce_mod(25)
    assert r.to_json()["modulus"] == 25
    assert r == CyclotomicElement.from_power_counts(5, [7, 0, 1, 0, 0]).reduce_mod(25)
    assert CyclotomicElement.from_int(3, Fraction(1, 2)).to_json() == {"conductor": 3, "coeffs": ["1/2", "0"]}
    with pytest.raises(ZeroDivisionError):
        CyclotomicElement.from_int(3, Fraction(1, 5)).reduce_mod(25)


def test_cyclotomic_sum_matches_numeric():
    s = cyclotomic_sum(7, [(a, a * a) for a in range(7)])
    direct = sum(a * a * cmath.exp(2j * math.pi * a / 7) for a in range(7))
    assert abs(complex_value(s) - direct) < 1e-9
