"""The eight acceptance criteria, each timed from cold caches.

Every criterion prints one PASS/FAIL line, both immediately (visible with
``-s``) and in the terminal summary.
"""

import time

import pytest

from conftest import ACCEPTANCE_LINES
from gaussmeans import hz, kernels, oracle, recursion, volumes
from gaussmeans.hz import blowup_failures, census, hz_table
from gaussmeans.kernels import moment_series
from gaussmeans.oracle import wick_moments
from gaussmeans.recursion import RecursionCache, compute_w
from gaussmeans.verify import (
    GOLDEN,
    _coproduct_rules,
    _product_rules,
    census_checks,
    chi_values,
    closed_forms_match,
    hz_cross_validation,
    kappa_checks,
    n11_three_ways,
    pipeline_closes,
    stable_types,
    string_divisor_hold,
    structure_holds,
    trivalent_census_matches,
    wick_matches_moments,
)


@pytest.fixture
def cold(monkeypatch):
    monkeypatch.setattr(recursion, "_DEFAULT_CACHE", RecursionCache())
    for cached in (hz._row, kernels.time_expansion, oracle._census_by_excess, oracle._shape_terms, volumes.fitted_volume):
        cached.cache_clear()


class Criterion:
    def __init__(self, label: str, limit: float):
        self.label, self.limit = label, limit
        self.start = time.perf_counter()
        self.parts: list[tuple[str, bool]] = []

    def check(self, name: str, ok: bool) -> None:
        self.parts.append((name, bool(ok)))

    def finish(self) -> None:
        elapsed = time.perf_counter() - self.start
        self.check(f"runtime {elapsed:.1f}s < {self.limit:g}s", elapsed < self.limit)
        failed = [name for name, ok in self.parts if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"{status}  {self.label} ({elapsed:.2f}s)"
        if failed:
            line += " failed: " + "; ".join(failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failed, line


def test_1_golden_tables(cold):
    c = Criterion("1 golden diagram tables", limit=1.0 * len(GOLDEN))
    for key, table in GOLDEN.items():
        start = time.perf_counter()
        c.check(f"W{key}", compute_w(*key) == table)
        c.check(f"W{key} under 1s", time.perf_counter() - start < 1.0)
    c.check("coefficient multiset (0,4)", sorted(compute_w(0, 4).coefficients()) == sorted([24, 48, 12, 12, 3, 4]))
    c.check("coefficient multiset (2,1)", sorted(compute_w(2, 1).coefficients()) == [21, 105])
    c.finish()


def test_2_hz_cross_validation(cold):
    c = Criterion("2 one-backbone sums against the hz table", limit=10)
    c.check("g <= 5", hz_cross_validation(5))
    table = hz_table(40)
    c.check("positive integers g <= 40", all(isinstance(b, int) and b > 0 for row in table.values() for b in row))
    c.finish()


def test_3_closed_forms_and_kappa(cold):
    c = Criterion("3 closed forms and kappa coefficients", limit=1)
    c.check("b_0, b_{g-1}, b_{g-2}, b_{g-3} for g <= 40", closed_forms_match(40))
    c.check("kappa leading and subleading for g <= 5", kappa_checks(5))
    c.finish()


def test_4_structure(cold):
    c = Criterion("4 integrality, positivity, symmetry and shape bounds for 2g-2+s <= 4", limit=60)
    for g, s in stable_types(4):
        c.check(f"({g},{s})", structure_holds(g, s))
    c.finish()


def test_5_residue_rules(cold):
    c = Criterion("5 product and coproduct rules against residues, k <= 5", limit=60)
    c.check("product rule", _product_rules(5))
    c.check("coproduct rule", _coproduct_rules(5))
    c.finish()


def test_6_moments(cold):
    c = Criterion("6 Wick pairings against the moment series", limit=60)
    c.check("k <= 12", wick_matches_moments(12))
    c.check("tr H^4", wick_moments([4]) == {0: 2, 1: 1})
    c.check("tr H^6", wick_moments([6]) == {0: 5, 1: 10})
    c.check("Catalan", moment_series(0, 10) == [1, 1, 2, 5, 14, 42])
    c.finish()


def test_7_volumes_pipeline(cold):
    c = Criterion("7 discrete volumes (index bound read as b^2-degree)", limit=120)
    c.check("N(1,1) three ways", n11_three_ways())
    c.check("string/divisor (0,3)->(0,4)", string_divisor_hold(0, 3, 8))
    c.check("string/divisor (1,1)->(1,2)", string_divisor_hold(1, 1, 8))
    c.check("euler characteristics", chi_values())
    for g, s in [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1), (1, 3), (0, 5)]:
        fitted = volumes.fitted_volume(g, s)
        c.check(f"degree bound ({g},{s})", fitted.max_total_degree() <= volumes.degree_bound(g, s))
        c.check(f"c_to_bhat ({g},{s})", pipeline_closes(g, s))
    c.finish()


@pytest.mark.xfail(strict=True, reason="the basis index sum of N(1,1) = (2/3) p_{2,0} is 2, above 3g-3+s = 1")
def test_7_literal_index_bound(cold):
    c = Criterion("7 fitted c vanish above sum k_i = 3g-3+s (literal index sum)", limit=120)
    for g, s in [(1, 1), (0, 3), (0, 4), (1, 2)]:
        fitted = volumes.fitted_volume(g, s)
        c.check(f"({g},{s})", fitted.max_total_k() <= volumes.degree_bound(g, s))
    c.finish()


def test_8_census(cold):
    c = Criterion("8 census identities", limit=120)
    table = hz_table(10)
    for g in range(2, 11):
        v = census(g, table[g])
        c.check(f"non-negative integers g={g}", all(isinstance(x, int) and x >= 0 for x in (v.v44, v.v5, v.sum_q_vq, v.v33)))
    c.check("total and mixed identities 2 <= g <= 10", census_checks(2, 10))
    c.check("b_{g-2}/b_{g-1} ratio 2 <= g <= 10", not [f for f in blowup_failures(10) if f[1] == "ratio" and f[0] >= 2])
    c.check("g=2 values", census(2, table[2]) == hz.Census(385, 266, 70, 105))
    c.check("g=2 trivalent census", trivalent_census_matches(2))
    c.finish()

