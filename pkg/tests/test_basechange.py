from fractions import Fraction

import pytest

from bcpadic.basechange import (
    artin_prediction,
    bianchi_interpolation_constant,
    constants_match,
    cyc_base_change_L,
    exceptional_factor,
    factorisation_check,
    hecke_eigenvalue,
    inert_fields,
    label_key,
    rational_constants_product,
    supersingular_primes,
    transfer,
)
from bcpadic.characters import DirichletCharacter, ImagQuadField, primitive_characters, splitting_type
from bcpadic.eigenforms import form_symbols, load_eigenform
from bcpadic.lfunction import form_lifts
from bcpadic.quadnum import QuadNumber

from oracles import CURVES, curve_ap, is_prime

DISCS = (3, 4, 7, 8, 11)
FORMS = ("11a", "17a", "19a")


@pytest.mark.parametrize("label", FORMS)
@pytest.mark.parametrize("d", DISCS)
def test_transfer_invariants(label, d):
    f = load_eigenform(label)
    K = ImagQuadField(d)
    for p in (q for q in range(3, 50) if is_prime(q) and f.level % q):
        t = transfer(f, p, K)
        assert t.splitting == splitting_type(p, K)
        assert t.a_p == curve_ap(CURVES[label], p)
        alpha = QuadNumber(Fraction(0), Fraction(1), t.a_p, p ** (t.k + 1))
        assert t.alpha_pO == alpha * alpha
        assert sum(t.slopes) * (2 if t.splitting == "ramified" else 1) == 2 * t.h
        bound = Fraction(t.k + 1) if t.splitting == "split" else Fraction(t.k + 1, 2)
        assert t.small_slope == (t.h < bound)
        assert t.critical is not t.small_slope


def test_transfer_rejects_bad_primes():
    with pytest.raises(ValueError):
        transfer(load_eigenform("11a"), 11, ImagQuadField(4))


def test_split_ordinary_example():
    t = transfer(load_eigenform("11a"), 5, ImagQuadField(4))
    assert t.splitting == "split" and t.h == 0
    assert t.small_slope and not t.critical
    assert t.unit_count == 4 and t.discriminant == -4


def test_supersingular_inert_is_critical():
    f = load_eigenform("17a")
    assert f.a(3) == 0
    t = transfer(f, 3, ImagQuadField(4))
    assert t.splitting == "inert"
    assert t.slopes == (Fraction(1),)
    assert t.critical and not t.small_slope


def test_hecke_search_finds_supersingular_primes():
    phi = form_symbols("17a").plus
    found = supersingular_primes(phi, 50)
    assert found == [q for q in range(3, 50) if is_prime(q) and 17 % q and curve_ap(CURVES["17a"], q) == 0]
    assert 3 in found
    assert hecke_eigenvalue(phi, 5) == curve_ap(CURVES["17a"], 5)


def test_inert_fields():
    assert [K.d for K in inert_fields(3)] == [4, 7]
    assert [K.d for K in inert_fields(5)] == [3, 7, 8]
    assert [K.d for K in inert_fields(7)] == [4, 8, 11]


# p = 7 runs in the acceptance suite
@pytest.mark.parametrize("p", [3, 5])
def test_constants_match_grid(p):
    for n in (1, 2):
        for chi in primitive_characters(p**n):
            for d in DISCS:
                if d % p:
                    K = ImagQuadField(d)
                    for a_p in (0, 1, -2):
                        assert constants_match(K, 0, a_p, chi, 0)


def test_constants_match_under_the_negated_convention():
    chi = primitive_characters(5)[1]
    K = ImagQuadField(4)
    assert constants_match(K, 0, 1, chi, 0, "-sqrt(-d)")


def test_constant_changes_with_the_field():
    chi = primitive_characters(5)[1]
    a = bianchi_interpolation_constant(ImagQuadField(4), 0, 1, chi, 0)
    b = bianchi_interpolation_constant(ImagQuadField(3), 0, 1, chi, 0)
    assert a != b
    assert rational_constants_product(ImagQuadField(4), 0, 1, chi, 0) == a


def test_exceptional_factor():
    alpha = QuadNumber(Fraction(0), Fraction(1), 1, 25)
    ramified = primitive_characters(25)[0]
    assert exceptional_factor(alpha, ramified, 0, 5, 25) == 1
    triv = DirichletCharacter.trivial(1)
    z = exceptional_factor(alpha, triv, 0, 5, 5)
    one = QuadNumber(Fraction(1), Fraction(0), 1, 25)
    assert z == one - alpha.inverse()
    # "phi" scales by N P^j, "finite" does not
    assert exceptional_factor(alpha, triv, 1, 5, 5, "finite") == z
    assert exceptional_factor(alpha, triv, 1, 5, 5) == one - alpha.inverse() * 5
    with pytest.raises(ValueError):
        exceptional_factor(alpha, triv, 0, 5, 5, "other")


def test_label_key_orders_numerically():
    assert sorted(["9.2", "25.3", "5.1", "25.11"], key=label_key) == ["5.1", "9.2", "25.3", "25.11"]


@pytest.fixture(scope="module")
def bc_11a_5():
    f = load_eigenform("11a")
    lifts = form_lifts("11a", 5, 25, 20)
    return f, lifts, cyc_base_change_L(lifts, f, ImagQuadField(4))


def test_factorisation_ordinary_split(bc_11a_5):
    f, lifts, bc = bc_11a_5
    chars = primitive_characters(5) + primitive_characters(25)[:6]
    rep = factorisation_check(bc, lifts, chars)
    assert len(rep.rows) >= 5
    assert rep.nonzero_rows >= 5
    assert rep.constant_ratio
    assert all(r.agree for r in rep.rows)
    labels = [r["character"] for r in rep.to_json()["rows"]]
    assert labels == sorted(labels, key=label_key)


def test_prediction_vanishes_with_the_parity(bc_11a_5):
    f, lifts, bc = bc_11a_5
    # chi_{-4} is odd, so chi and chi chi_{-4} have opposite parity; one factor is a plus value
    for chi in primitive_characters(5):
        pred = artin_prediction(lifts, ImagQuadField(4), chi, 0)
        assert isinstance(pred, QuadNumber)


def test_product_admissibility_ordinary(bc_11a_5):
    _, _, bc = bc_11a_5
    assert bc.admissibility().admissible
    assert bc.admissibility(0).h == 0
