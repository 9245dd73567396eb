"""Named invariant checks grouped into suites, shared by the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .diagrams import DiagramPair, FormalSum, admissible
from .hz import (
    b_to_kappa,
    census,
    census_identities_hold,
    closed_forms,
    hz_table,
    kappa_leading,
    subleading_coefficient,
    verify_blowup_identities,
)
from .kernels import hom_F, moment_series, verify_coproduct_rule, verify_product_rule
from .oracle import (
    inverse_power_coefficients,
    ladder_identity_holds,
    lattice_series_coefficients,
    shape_census,
    shape_mean_at,
    shape_sum,
    trivalent_one_face_census,
    wick_moments,
)
from .recursion import compute_w, extract_b_onebackbone
from .volumes import (
    bhat_of_means,
    c_to_bhat,
    euler_char,
    fit_quasipolynomial,
    fitted_volume,
    lattice_samples,
    n_g1_polynomial,
    divisor_check,
    string_check,
    surface_euler_characteristic,
)


def _pair(white: tuple[int, ...] = (), grey: tuple[int, ...] = ()) -> DiagramPair:
    return DiagramPair.of(white, grey)


GOLDEN: dict[tuple[int, int], FormalSum[DiagramPair]] = {
    (0, 4): FormalSum({
        _pair((1, 1, 1, 1)): 24,
        _pair((2, 1, 1, 1)): 48,
        _pair((1, 1), (2, 1)): 12,
        _pair((2, 1), (1, 1)): 12,
        _pair((), (2, 1, 1, 1)): 3,
        _pair((1, 1), (1, 1)): 4,
    }),
    (1, 2): FormalSum({
        _pair((2, 1)): 4,
        _pair((2, 2)): 12,
        _pair((3, 1)): 20,
        _pair((), (3, 1)): 5,
        _pair((), (2, 2)): 3,
    }),
    (2, 1): FormalSum({_pair((5,)): 105, _pair((4,)): 21}),
    (1, 3): FormalSum({
        _pair((2, 1, 1)): 24,
        _pair((2, 2, 1)): 192,
        _pair((3, 1, 1)): 240,
        _pair((2, 2, 2)): 288,
        _pair((3, 2, 1)): 480,
        _pair((4, 1, 1)): 560,
        _pair((1,), (3, 1)): 30,
        _pair((1,), (2, 2)): 18,
        _pair((2,), (2, 1)): 24,
        _pair((2,), (3, 1)): 120,
        _pair((2,), (2, 2)): 72,
        _pair((1,), (4, 1)): 140,
        _pair((1,), (3, 2)): 120,
        _pair((3,), (2, 1)): 120,
        _pair((3,), (1, 1)): 30,
        _pair((4,), (1, 1)): 140,
    }),
    (0, 5): FormalSum({
        _pair((1, 1, 1, 1, 1)): 192,
        _pair((2, 1, 1, 1, 1)): 768,
        _pair((2, 2, 1, 1, 1)): 1152,
        _pair((3, 1, 1, 1, 1)): 960,
        _pair((1, 1, 1), (2, 1)): 144,
        _pair((1, 1, 1), (3, 1)): 240,
        _pair((2, 1, 1), (2, 1)): 288,
        _pair((1, 1, 1), (2, 2)): 288,
        _pair((2, 1, 1), (1, 1)): 144,
        _pair((2, 2, 1), (1, 1)): 288,
        _pair((3, 1, 1), (1, 1)): 240,
        _pair((1, 1, 1), (1, 1)): 24,
        _pair((1,), (2, 2, 1, 1)): 72,
        _pair((1,), (3, 1, 1, 1)): 60,
        _pair((1,), (2, 1, 1, 1)): 18,
        _pair((2,), (2, 1, 1, 1)): 72,
        _pair((2,), (1, 1, 1, 1)): 12,
        _pair((3,), (1, 1, 1, 1)): 60,
    }),
}


def stable_types(max_excess: int) -> list[tuple[int, int]]:
    """(g, s) with s >= 1 and 0 < 2g - 2 + s <= max_excess."""
    out = []
    for g in range(max_excess // 2 + 2):
        for s in range(1, max_excess + 3):
            if 0 < 2 * g - 2 + s <= max_excess:
                out.append((g, s))
    return out


def structure_holds(g: int, s: int) -> bool:
    """Positive integer coefficients, admissible shapes and even grey length."""
    total = compute_w(g, s)
    return all(
        isinstance(c, int) and c > 0 and admissible(pair, g, s) and pair.grey.length() % 2 == 0
        for pair, c in total.items()
    )


def golden_matches(key: tuple[int, int]) -> bool:
    return compute_w(*key) == GOLDEN[key]


def hz_cross_validation(gmax: int) -> bool:
    table = hz_table(gmax)
    return all(tuple(extract_b_onebackbone(compute_w(g, 1), g)) == table[g] for g in range(1, gmax + 1))


def closed_forms_match(gmax: int) -> bool:
    table = hz_table(gmax)
    for g in range(1, gmax + 1):
        row = table[g]
        forms = closed_forms(g)
        if forms.top != row[-1] or forms.bottom != row[0]:
            return False
        if forms.second is not None and forms.second != row[-2]:
            return False
        if forms.third is not None and forms.third != row[-3]:
            return False
    return True


def kappa_checks(gmax: int) -> bool:
    table = hz_table(gmax)
    for g in range(1, gmax + 1):
        if b_to_kappa(g, table[g])[0] != kappa_leading(g):
            return False
        if g >= 2 and subleading_coefficient(g) != Fraction(12 * g * g - 7 * g + 5, 5):
            return False
    return True


def census_checks(gmin: int, gmax: int) -> bool:
    table = hz_table(gmax)
    return all(census_identities_hold(g, table[g]) for g in range(gmin, gmax + 1))


def trivalent_census_matches(g: int = 2) -> bool:
    """Rooted trivalent one-face shapes, tallied by 2-cycles, against the formula census.

    sum_q [(3g-4)(6g-5) + q] V_q = 4 V44 and sum_q [12g - 10 - 2q] V_q = 5 V5.
    """
    tally = trivalent_one_face_census(g)
    c = census(g, hz_table(g)[g])
    four = sum(((3 * g - 4) * (6 * g - 5) + q) * n for q, n in tally.items())
    five = sum((12 * g - 10 - 2 * q) * n for q, n in tally.items())
    return (
        four == 4 * c.v44
        and five == 5 * c.v5
        and sum(tally.values()) == c.v33
        and sum(q * n for q, n in tally.items()) == c.sum_q_vq
    )


def wick_matches_moments(kmax: int) -> bool:
    for g in range(kmax // 4 + 1):
        series = moment_series(g, kmax)
        for j, value in enumerate(series):
            k = 2 * j
            if k == 0:
                continue
            tally = wick_moments([k], budget=max(k, 14))
            if tally.get(g, 0) != value:
                return False
    return True


def shape_sum_matches(g: int, s: int) -> bool:
    """The differentiated shape sum is (-1)^s times the Gaussian mean; genus-zero sums carry half."""
    point = [Fraction(3), Fraction(5, 2), Fraction(7, 3), Fraction(11, 4), Fraction(13, 5)][:s]
    mean = hom_F(compute_w(g, s), s).evaluate(point) * (2 if g == 0 else 1)
    return shape_mean_at(g, s, point) == (-1) ** s * mean


def n11_three_ways() -> bool:
    expected = {p: Fraction(p * p - 4, 48) if p % 2 == 0 else Fraction(0) for p in range(1, 13)}
    from_b = n_g1_polynomial(1, hz_table(1)[1])
    fitted = fit_quasipolynomial(1, 1, lattice_samples(1, 1))
    from .oracle import lattice_count

    return all(
        from_b.evaluate((p,)) == v and fitted.evaluate((p,)) == v and lattice_count(1, 1, (p,)) == v
        for p, v in expected.items()
    )


def string_divisor_hold(g: int, s: int, pmax: int) -> bool:
    small, big = fitted_volume(g, s), fitted_volume(g, s + 1)
    return string_check(small, big, pmax) and divisor_check(small, big, pmax, surface_euler_characteristic(g, s))


def pipeline_closes(g: int, s: int) -> bool:
    fitted = fitted_volume(g, s)
    return c_to_bhat(s, fitted.terms) == bhat_of_means(hom_F(compute_w(g, s), s), g)


def chi_values() -> bool:
    want = {(0, 3): 1, (0, 4): -1, (0, 5): 2, (1, 1): Fraction(-1, 12)}
    return all(euler_char(g, s) == v for (g, s), v in want.items())


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], bool]


def _product_rules(kmax: int) -> bool:
    return all(
        verify_product_rule(k1, b1, k2, b2)
        for k1, k2 in product(range(kmax + 1), repeat=2)
        for b1, b2 in product((0, 1), repeat=2)
    )


def _coproduct_rules(kmax: int) -> bool:
    return all(verify_coproduct_rule(k, beta) for k in range(kmax + 1) for beta in (0, 1))


SUITES: dict[str, list[Check]] = {
    "tr": [
        *(Check(f"golden table W({g},{s})", lambda key=(g, s): golden_matches(key)) for g, s in GOLDEN),
        Check("positivity, integrality and shape bounds for 2g-2+s <= 3",
              lambda: all(structure_holds(g, s) for g, s in stable_types(3))),
        Check("product rule against residues, k <= 3", lambda: _product_rules(3)),
        Check("coproduct rule against residues, k <= 3", lambda: _coproduct_rules(3)),
    ],
    "hz": [
        Check("hz table positive and divisible for g <= 40", lambda: len(hz_table(40)) == 40),
        Check("one-backbone sums equal the hz table for g <= 4", lambda: hz_cross_validation(4)),
        Check("closed forms for g <= 40", lambda: closed_forms_match(40)),
        Check("kappa leading and subleading terms for g <= 5", lambda: kappa_checks(5)),
        Check("blow-up identities for g <= 12", lambda: verify_blowup_identities(12)),
        Check("census identities for 2 <= g <= 10", lambda: census_checks(2, 10)),
    ],
    "volumes": [
        Check("N(1,1) from b table, lattice count and fit", n11_three_ways),
        Check("string and divisor equations (0,3) -> (0,4)", lambda: string_divisor_hold(0, 3, 8)),
        Check("string and divisor equations (1,1) -> (1,2)", lambda: string_divisor_hold(1, 1, 8)),
        Check("euler characteristics", chi_values),
        *(Check(f"fit maps onto the mean expansion at ({g},{s})", lambda key=(g, s): pipeline_closes(*key))
          for g, s in [(1, 1), (0, 3), (1, 2), (0, 4), (2, 1)]),
    ],
    "oracle": [
        Check("wick pairings equal one-point moment series, k <= 12", lambda: wick_matches_moments(12)),
        Check("shape counts (0,3)=3 (1,1)=2 (0,4)=21 (1,2)=24",
              lambda: [len(shape_census(g, s)) for g, s in [(0, 3), (1, 1), (0, 4), (1, 2)]] == [3, 2, 21, 24]),
        Check("genus-2 trivalent one-face census", trivalent_census_matches),
        *(Check(f"shape sum equals mean at ({g},{s})", lambda key=(g, s): shape_sum_matches(*key))
          for g, s in [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1)]),
        *(Check(f"shape sum expansion gives lattice counts at ({g},{s})",
                lambda key=(g, s): inverse_power_coefficients(shape_sum(*key), 12) == lattice_series_coefficients(*key, 12))
          for g, s in [(1, 1), (0, 3), (0, 4), (1, 2)]),
        Check("rainbow and ladder series to order 10", lambda: ladder_identity_holds(10)),
    ],
}


def run_suite(name: str) -> list[tuple[str, bool]]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for check in SUITES[suite]:
            try:
                ok = bool(check.run())
            except ArithmeticError:
                ok = False
            results.append((f"{suite}: {check.name}", ok))
    return results
