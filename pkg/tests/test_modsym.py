from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bcpadic.characters import DirichletCharacter, primitive_characters
from bcpadic.eigenforms import form_symbols, load_eigenform
from bcpadic.modsym import (
    algebraic_L_value,
    p_stabilise,
    symbol_space,
    twisted_period_sum,
)
from bcpadic.padic import vp
from bcpadic.quadnum import QuadNumber


def charpoly_int(space, ell):
    return [int(c) for c in space.hecke_charpoly(ell)]


def poly_from_roots(roots):
    out = [1]
    for r in roots:
        out = [0] + out
        for i in range(len(out) - 1):
            out[i] -= r * out[i + 1]
    return out


def test_dimensions():
    assert symbol_space(11, 0).dimension == 3
    assert symbol_space(1, 0).dimension == 0
    # 2 dim S_4(Gamma_0(5)) + dim Eis_4(Gamma_0(5)) = 2 + 2
    assert symbol_space(5, 2).dimension == 4


def test_hecke_charpolys_match_point_counts_and_eisenstein():
    # X_0(11) has a_2 = -2; the boundary carries 1 + 2
    assert charpoly_int(symbol_space(11, 0), 2) == poly_from_roots([-2, -2, 3])
    # weight 4 level 5: a_2 = -4 on the cusp form, 1 + 2^3 on Eisenstein
    assert charpoly_int(symbol_space(5, 2), 2) == poly_from_roots([-4, -4, 9, 9])


def test_hecke_operators_commute():
    S = symbol_space(11, 2)
    mats = {ell: S.hecke_matrix(ell) for ell in (2, 3, 5, 7, 13)}
    for a in mats:
        for b in mats:
            assert mats[a] * mats[b] == mats[b] * mats[a]


@pytest.mark.parametrize("label", ["11a", "14a", "15a", "17a", "19a", "27a", "37a"])
def test_eigen_symbols_satisfy_their_equations(label):
    f = load_eigenform(label)
    S = form_symbols(label)
    for phi in (S.plus, S.minus):
        assert phi.is_symbol()
        for ell in (2, 3, 5, 7):
            if f.level % ell:
                assert (phi.T(ell) - phi.scale(f.a(ell))).is_zero()
    assert (S.plus.involution() - S.plus).is_zero()
    assert (S.minus.involution() + S.minus).is_zero()


def test_additivity_of_paths():
    phi = form_symbols("11a").plus
    for r, s, t in ((Fraction(1, 3), Fraction(2, 7), Fraction(-5, 11)), (Fraction(0), Fraction(1, 2), None)):
        lhs = [a + b for a, b in zip(phi.evaluate(r, s), phi.evaluate(s, t))]
        assert lhs == phi.evaluate(r, t)


def test_trivial_character_value_of_11a():
    phi = form_symbols("11a").plus
    assert algebraic_L_value(phi, DirichletCharacter.trivial(1), 0) == Fraction(1, 5)


def test_wrong_parity_gives_zero():
    S = form_symbols("11a")
    for chi in primitive_characters(5) + primitive_characters(7):
        wrong = S.minus if chi.is_even() else S.plus
        assert algebraic_L_value(wrong, chi, 0) == 0


@given(st.sampled_from([5, 7, 8, 9]), st.data())
@settings(max_examples=15, deadline=None)
def test_period_sum_is_linear_in_the_character(M, data):
    phi = form_symbols("11a").plus
    chars = list(DirichletCharacter.all(M))
    a = data.draw(st.sampled_from(chars))
    b = data.draw(st.sampled_from(chars))
    both = lambda x: a(x) + b(x)  # noqa: E731
    both.M = M
    assert twisted_period_sum(phi, both, 0) == twisted_period_sum(phi, a, 0) + twisted_period_sum(phi, b, 0)


def test_stabilisation_is_up_eigen():
    phi = form_symbols("11a").plus
    st_ = p_stabilise(phi, 5, 1)
    alpha = QuadNumber.root(1, 5)
    lhs = st_.symbol.U(5)
    rhs = st_.symbol.scale(alpha)
    assert (lhs - rhs).is_zero()


def test_alpha_and_beta_stabilisations_are_independent():
    # phi_alpha = u + c(alpha) v with u, v independent; distinct roots give distinct c
    phi = form_symbols("11a").plus
    st_ = p_stabilise(phi, 3, -1)
    assert st_.c1 != 0


def test_supersingular_stabilisations_have_half_slope():
    # 17a has a_3 = 0: alpha^2 = -3
    phi = form_symbols("17a").plus
    st_ = p_stabilise(phi, 3, 0)
    alpha = QuadNumber.root(0, 3)
    assert (st_.symbol.U(3) - st_.symbol.scale(alpha)).is_zero()
    n = alpha.norm()
    assert Fraction(vp(n.numerator, 3), 2) == Fraction(1, 2)
