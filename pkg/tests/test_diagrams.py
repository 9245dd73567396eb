import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussmeans.diagrams import (
    DiagramPair,
    FormalSum,
    G,
    LabeledDiagramPair,
    NotSymmetric,
    UnstableError,
    W,
    admissible,
    check_stable,
    desymmetrize,
    from_json,
    symmetrize_embed,
    to_json,
)

heights = st.lists(st.integers(1, 5), max_size=4)
pairs = st.builds(DiagramPair.of, heights, heights).filter(lambda p: p.length() > 0)
sums = st.dictionaries(pairs, st.integers(1, 500), max_size=6).map(FormalSum)


def test_columns_are_kept_sorted():
    assert DiagramPair.of([1, 3, 2]) == DiagramPair.of([3, 2, 1])
    assert DiagramPair.of([1, 3, 2]).white.columns == (3, 2, 1)


def test_sort_indices():
    assert (W(3).k, W(3).beta) == (2, 0)
    assert (G(1).k, G(1).beta) == (0, 1)
    with pytest.raises(ValueError):
        W(0)


def test_label_must_be_present():
    with pytest.raises(ValueError):
        LabeledDiagramPair(DiagramPair.of([2]), W(1))


def test_formal_sum_drops_zeros_and_rejects_negatives():
    assert not FormalSum({DiagramPair.of([1]): 0})
    with pytest.raises(ValueError):
        FormalSum({DiagramPair.of([1]): -1})


@given(sums, sums)
def test_formal_sum_addition_commutes(a, b):
    assert a + b == b + a


@given(sums)
def test_symmetrize_then_desymmetrize_is_identity(total):
    assert desymmetrize(symmetrize_embed(total)) == total


def test_desymmetrize_rejects_unequal_labels():
    pair = DiagramPair.of([2, 1])
    labeled = FormalSum({LabeledDiagramPair(pair, W(2)): 3, LabeledDiagramPair(pair, W(1)): 4})
    with pytest.raises(NotSymmetric) as info:
        desymmetrize(labeled)
    assert info.value.pair == pair


def test_desymmetrize_of_grey_example():
    pair = DiagramPair.of([], [3, 1])
    labeled = FormalSum({LabeledDiagramPair(pair, G(3)): 5, LabeledDiagramPair(pair, G(1)): 5})
    assert desymmetrize(labeled) == FormalSum({pair: 5})


@given(sums)
def test_json_round_trip(total):
    assert from_json(to_json(total, 1, 2))[2] == total


@pytest.mark.parametrize("g,s", [(0, 1), (0, 2), (-1, 4), (1, 0)])
def test_unstable_types_rejected(g, s):
    with pytest.raises(UnstableError):
        check_stable(g, s)


def test_admissible_bounds():
    assert admissible(DiagramPair.of([5]), 2, 1)
    assert admissible(DiagramPair.of([4]), 2, 1)
    assert not admissible(DiagramPair.of([3]), 2, 1)
    assert not admissible(DiagramPair.of([], [2]), 1, 1)  # odd grey length
