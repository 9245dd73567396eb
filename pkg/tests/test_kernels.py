from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussmeans.diagrams import DiagramPair, FormalSum
from gaussmeans.kernels import (
    ArityMismatch,
    coproduct_rule_expected,
    hom_F,
    moment_series,
    nonstable_means,
    product_rule_expected,
    s_basis,
    s_decompose,
    shift_identity_holds,
    time_expansion,
    time_expansion_rational,
    verify_coproduct_rule,
    verify_product_rule,
)


def test_s_basis_values():
    assert s_basis(0, 0)(Fraction(2)) == Fraction(8, 27)
    assert s_basis(1, 0)(Fraction(2)) == Fraction(32, 243)
    assert s_basis(0, 1)(Fraction(2)) == Fraction(20, 27)


@pytest.mark.parametrize("k,beta", [(0, 0), (0, 1), (2, 0), (3, 1)])
def test_s_basis_is_odd_under_inversion(k, beta):
    f = s_basis(k, beta)
    for z in (Fraction(2), Fraction(5, 3), Fraction(-7, 2)):
        assert f(1 / z) == -f(z)


def test_s_basis_rejects_bad_index():
    with pytest.raises(ValueError):
        s_basis(0, 2)
    with pytest.raises(ValueError):
        s_basis(-1, 0)


def test_hom_F_of_three_point_sum():
    total = FormalSum({DiagramPair.of((1, 1, 1)): 4, DiagramPair.of((1,), (1, 1)): 1})
    terms = hom_F(total, 3).terms
    assert terms == {
        ((0, 0), (0, 0), (0, 0)): 4,
        ((0, 0), (0, 1), (0, 1)): 1,
        ((0, 1), (0, 0), (0, 1)): 1,
        ((0, 1), (0, 1), (0, 0)): 1,
    }


def test_hom_F_single_column():
    assert hom_F(FormalSum({DiagramPair.of((2,)): 1}), 1).terms == {((1, 0),): 1}


def test_hom_F_arity_mismatch():
    with pytest.raises(ArityMismatch):
        hom_F(FormalSum({DiagramPair.of((1, 1)): 1}), 3)


def test_nonstable_means():
    one, two = nonstable_means()
    assert one(Fraction(2)) == Fraction(1, 2)
    a, b = Fraction(3), Fraction(5, 2)
    assert two.evaluate([a, b]) == two.evaluate([b, a])


def test_product_rule_examples():
    assert product_rule_expected(0, 0, 0, 0) == s_basis(2, 0)
    assert product_rule_expected(0, 1, 0, 1) == s_basis(1, 0) + 4 * s_basis(2, 0)
    assert product_rule_expected(1, 0, 2, 1) == s_basis(5, 1)


@pytest.mark.parametrize("args", [(0, 0, 0, 0), (0, 1, 0, 1), (1, 0, 2, 1), (2, 1, 1, 1)])
def test_product_rule_matches_residues(args):
    assert verify_product_rule(*args)


@pytest.mark.parametrize("k,beta", [(0, 0), (0, 1), (3, 1)])
def test_coproduct_rule_matches_residues(k, beta):
    assert verify_coproduct_rule(k, beta)


def test_coproduct_expected_is_nonzero():
    assert coproduct_rule_expected(1, 0).terms


def test_moment_series_genus_zero_is_catalan():
    assert moment_series(0, 10) == [1, 1, 2, 5, 14, 42]


def test_moment_series_higher_genus():
    assert moment_series(1, 8) == [0, 0, 1, 10, 70]
    assert moment_series(2, 10)[4:] == [21, 483]


def test_time_expansion_low_orders():
    assert time_expansion(0) == ((-4,), (-2,))
    assert time_expansion(1) == ((-16, -96), (-2, -48))


@pytest.mark.parametrize("d", range(7))
def test_time_expansion_routes_agree(d):
    assert time_expansion(d) == time_expansion_rational(d)


@pytest.mark.parametrize("d", range(9))
def test_time_expansion_integer_with_leading_term(d):
    q, qt = time_expansion(d)
    assert len(q) == len(qt) == d + 1
    assert all(isinstance(c, int) for c in q + qt)
    factorial = 1
    for i in range(2, 2 * d + 2):
        factorial *= i
    assert qt[-1] == -(2 ** (2 * d + 1)) * factorial
    assert qt[0] == -2


@pytest.mark.parametrize("m", range(1, 11))
def test_shift_identity(m):
    assert shift_identity_holds(m)


@given(st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 1)),
    st.fractions(max_denominator=20).filter(bool),
    min_size=1, max_size=5,
))
def test_s_decompose_round_trip(coeffs):
    f = sum((c * s_basis(k, beta) for (k, beta), c in coeffs.items()), start=s_basis(0, 0) * 0)
    assert s_decompose(f) == coeffs


def test_s_decompose_rejects_outside_span():
    with pytest.raises(ValueError):
        s_decompose(s_basis(0, 0) * s_basis(0, 0))
