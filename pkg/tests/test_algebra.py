from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussmeans.algebra import (
    MPoly,
    MRational,
    NotAPole,
    Poly,
    RationalFunction,
    TruncatedSeries,
    laurent_expansion,
    residue,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(small, min_size=0, max_size=5).map(Poly)
nonzero_polys = polys.filter(bool)
Z = RationalFunction.z()


def rationals(draw_num=polys, draw_den=nonzero_polys):
    return st.builds(RationalFunction, draw_num, draw_den)


def test_poly_trailing_zeros_are_stripped():
    assert Poly([1, 2, 0, 0]).degree == 1
    assert not Poly([0, 0])


def test_poly_divmod_small_case():
    q, r = Poly([-1, 0, 1]).divmod(Poly([-1, 1]))
    assert q == Poly([1, 1]) and not r


@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - b) + b == a


@given(polys, nonzero_polys)
def test_poly_division_identity(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert not r or r.degree < b.degree


@given(rationals(), rationals(), rationals())
def test_rational_function_field_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f - g) + g == f
    if g:
        assert (f / g) * g == f


@given(rationals())
def test_rational_function_denominator_is_monic(f):
    assert f.den.lc() == 1


def test_theta_is_z_d_dz():
    assert (Z**3).theta() == 3 * Z**3
    assert (1 / Z).theta() == -1 / Z


def test_residue_simple_examples():
    assert residue(1 / (Z - 3), Fraction(3)) == 1
    assert residue(Z / (Z * Z - 1), Fraction(1)) == Fraction(1, 2)


def test_residue_of_double_pole():
    # z / (z - 1)^2 = 1/(z-1)^2 + 1/(z-1)
    assert residue(Z / (Z - 1) ** 2, Fraction(1)) == 1


def test_residue_rejects_regular_point():
    with pytest.raises(NotAPole):
        residue(1 / (Z - 3), Fraction(2))


def test_laurent_expansion_geometric():
    s = laurent_expansion(Poly([1]), Poly([1, -1]), Fraction(0), 5)
    assert [s.coeff(n) for n in range(5)] == [1] * 5


def test_truncated_series_inverse():
    t = TruncatedSeries.variable(8)
    f = t * 3 + 1
    one = f * f.inverse()
    assert [one.coeff(n) for n in range(8)] == [1] + [0] * 7


def test_truncated_series_refuses_coefficients_beyond_precision():
    with pytest.raises(ValueError):
        TruncatedSeries.variable(3).coeff(3)


@given(st.lists(small, min_size=2, max_size=2))
def test_mrational_theta_matches_product_rule(point):
    z0, z1 = MPoly.var(2, 0), MPoly.var(2, 1)
    f = MRational(z0 * z1, z0 - z1 * z1 - MPoly.const(2, 7))
    g = MRational(z0 + MPoly.const(2, 2))
    lhs = (f * g).theta(0)
    rhs = f.theta(0) * g + f * g.theta(0)
    assert lhs.equals(rhs)
