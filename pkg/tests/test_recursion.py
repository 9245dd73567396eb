from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussmeans.diagrams import DiagramPair, FormalSum, G, LabeledDiagramPair, W, admissible
from gaussmeans.kernels import hom_F, moment_coefficient
from gaussmeans.oracle import wick_moments
from gaussmeans.recursion import (
    RecursionCache,
    UnexpectedTerm,
    compute_w,
    coproduct_column,
    cp,
    extract_b_onebackbone,
    labeled_w,
    pair_product,
    product_columns,
    stable_splits,
    unary,
)
from gaussmeans.verify import GOLDEN, stable_types


def test_coproduct_of_white_height_two():
    expected = {
        (W(1), W(2)): 4, (W(2), W(1)): 2, (W(1), W(3)): 20, (W(2), W(2)): 12, (W(3), W(1)): 4,
        (G(1), G(3)): 5, (G(2), G(2)): 3, (G(3), G(1)): 1,
    }
    assert coproduct_column(W(2)).as_dict() == expected


def test_product_of_columns():
    assert product_columns(W(2), W(2)).as_dict() == {W(5): 1}
    assert product_columns(W(1), G(1)).as_dict() == {G(3): 1}
    assert product_columns(G(1), G(1)).as_dict() == {W(3): 4, W(2): 1}


def test_cp_of_the_genus_one_seed():
    pair = DiagramPair.of
    expected = {
        LabeledDiagramPair(pair([2, 1]), W(1)): 4,
        LabeledDiagramPair(pair([2, 2]), W(2)): 12,
        LabeledDiagramPair(pair([2, 1]), W(2)): 2,
        LabeledDiagramPair(pair([3, 1]), W(3)): 4,
        LabeledDiagramPair(pair([3, 1]), W(1)): 20,
        LabeledDiagramPair(pair([], [3, 1]), G(1)): 5,
        LabeledDiagramPair(pair([], [2, 2]), G(2)): 3,
        LabeledDiagramPair(pair([], [3, 1]), G(3)): 1,
    }
    assert cp(FormalSum({pair([2]): 1})).as_dict() == expected


def test_square_of_genus_one_seed():
    w11 = compute_w(1, 1)
    assert pair_product(w11, 1).as_dict() == {LabeledDiagramPair(DiagramPair.of([5]), W(5)): 1}


def test_unary_requires_two_columns():
    with pytest.raises(ValueError):
        unary(FormalSum({DiagramPair.of([2]): 1}), 1)


def test_stable_splits_are_unordered():
    assert stable_splits(2, 1) == [((1, 1), (1, 1))]
    assert stable_splits(0, 5) == [((0, 3), (0, 3))]


@pytest.mark.parametrize("key", sorted(GOLDEN))
def test_golden_tables(key):
    assert compute_w(*key) == GOLDEN[key]


@pytest.mark.parametrize("g,s", stable_types(5))
def test_coefficients_positive_integers_and_admissible(g, s):
    for pair, c in compute_w(g, s).items():
        assert isinstance(c, int) and c > 0
        assert admissible(pair, g, s)


@pytest.mark.parametrize("g,s", stable_types(5))
def test_labeled_sums_are_symmetric(g, s):
    # desymmetrize raises NotSymmetric otherwise; a fresh cache recomputes everything
    compute_w(g, s, RecursionCache())


@pytest.mark.parametrize(
    "valences,genus",
    [
        ((1, 1, 2), 0), ((2, 2, 2), 0), ((1, 1, 2, 2), 0), ((1, 1, 1, 1, 2), 0),
        ((2, 3, 5), 1), ((2, 2, 2, 4), 1), ((1, 3, 3, 3), 1),
        ((4, 6), 2), ((5, 5), 2), ((3, 7), 2), ((2, 4, 6), 2), ((12,), 3),
    ],
)
def test_means_match_wick_enumeration(valences, genus):
    # genus-zero diagram sums carry half of the connected mean
    total = compute_w(genus, len(valences))
    scale = 2 if genus == 0 else 1
    assert scale * moment_coefficient(total, valences) == wick_moments(list(valences), budget=16)[genus]


@given(st.sampled_from([(0, 4), (1, 3), (0, 5), (2, 2), (1, 4)]), st.randoms(use_true_random=False))
def test_mean_expansion_symmetric_in_points(key, rnd):
    g, s = key
    expansion = hom_F(compute_w(g, s), s)
    perm = list(range(s))
    rnd.shuffle(perm)
    assert expansion.permuted(perm) == expansion


def test_extract_b_onebackbone():
    assert extract_b_onebackbone(compute_w(2, 1), 2) == [21, 105]
    with pytest.raises(UnexpectedTerm):
        extract_b_onebackbone(compute_w(1, 2), 1)


def test_cache_is_insert_once():
    cache = RecursionCache()
    compute_w(1, 2, cache)
    with pytest.raises(KeyError):
        cache.put((1, 2), FormalSum())


def test_grey_columns_come_in_pairs():
    for g, s in stable_types(5):
        assert all(pair.grey.length() % 2 == 0 for pair in compute_w(g, s))


def test_labeled_sum_total_weight_for_w12():
    weights = Counter()
    for key, c in labeled_w(1, 2).items():
        weights[key.pair] += c
    assert weights[DiagramPair.of([3, 1])] == 40
