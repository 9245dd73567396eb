from fractions import Fraction
from math import factorial

import pytest

from gaussmeans.hz import (
    b_bottom,
    b_second,
    b_table_csv,
    b_third,
    b_third_as_printed,
    b_to_kappa,
    b_top,
    blowup_failures,
    census,
    census_identities_hold,
    closed_forms,
    double_factorial,
    hz_table,
    kappa_leading,
    kappa_table_csv,
    subleading_coefficient,
    triple_factorial,
    verify_blowup_identities,
)

TABLE = hz_table(40)


def test_first_rows():
    assert TABLE[1] == (1,)
    assert TABLE[2] == (21, 105)
    # outer entries checked against the closed forms by hand: 12!/(8^3 3! 7!!) and 4 15!!/(27 3!)
    assert TABLE[3] == (1485, 18018, 50050)


def test_rows_positive_with_g_entries():
    for g, row in TABLE.items():
        assert len(row) == g
        assert all(isinstance(b, int) and b > 0 for b in row)


def test_bad_gmax():
    with pytest.raises(ValueError):
        hz_table(0)


def test_factorial_conventions():
    assert double_factorial(-1) == 1
    assert double_factorial(-3) == -1
    assert double_factorial(7) == 105
    assert triple_factorial(3) == 7
    assert triple_factorial(4) == 70


@pytest.mark.parametrize("g", range(1, 41))
def test_closed_forms_match_table(g):
    row = TABLE[g]
    forms = closed_forms(g)
    assert forms.top == row[-1]
    assert forms.bottom == row[0]
    if g >= 2:
        assert forms.second == row[-2]
    if g >= 3:
        assert forms.third == row[-3]


def test_closed_form_domains():
    assert closed_forms(1).second is None
    with pytest.raises(ValueError):
        b_second(1)
    with pytest.raises(ValueError):
        b_third(2)


def test_low_closed_forms():
    assert b_top(2) == 105
    assert b_bottom(3) == 1485
    assert b_third(3) == 1485


def test_printed_third_form_disagrees():
    assert b_third_as_printed(3) == Fraction(2079, 2)
    assert b_third_as_printed(3) != TABLE[3][0]


@pytest.mark.parametrize("g", range(1, 6))
def test_kappa_leading(g):
    kappa = b_to_kappa(g, TABLE[g])
    assert len(kappa) == 3 * g - 1
    assert kappa[0] == kappa_leading(g) == Fraction(1, 24**g * factorial(g))


@pytest.mark.parametrize("g", range(2, 6))
def test_kappa_subleading_ratio(g):
    kappa = b_to_kappa(g, TABLE[g])
    assert kappa[1] / kappa[0] == Fraction(12 * g * g - 7 * g + 5, 5) == subleading_coefficient(g)


def test_kappa_row_length_checked():
    with pytest.raises(ValueError):
        b_to_kappa(2, (21,))


def test_census_genus_two():
    c = census(2, TABLE[2])
    assert (c.v44, c.v5, c.sum_q_vq, c.v33) == (385, 266, 70, 105)


@pytest.mark.parametrize("g", range(2, 11))
def test_census_identities(g):
    assert census_identities_hold(g, TABLE[g])


def test_census_needs_genus_two():
    with pytest.raises(ValueError):
        census(1, TABLE[1])


def test_blowup_identities_from_genus_one():
    assert blowup_failures(12) == []
    assert verify_blowup_identities(12)


def test_blowup_detects_wrong_table(monkeypatch):
    import gaussmeans.hz as hz

    real = hz.hz_table

    def broken(gmax):
        table = real(gmax)
        table[3] = (1485, 18018, 50051)
        return table

    monkeypatch.setattr(hz, "hz_table", broken)
    assert (3, "ratio") in blowup_failures(4)


def test_csv_formats():
    text = b_table_csv(hz_table(2))
    assert text.splitlines() == ["g,k,b", "1,0,1", "2,0,21", "2,1,105"]
    kappa = kappa_table_csv({1: b_to_kappa(1, (1,))})
    assert kappa.splitlines()[0] == "g,r,kappa_num,kappa_den"
    assert kappa.splitlines()[1] == "1,0,1,24"
