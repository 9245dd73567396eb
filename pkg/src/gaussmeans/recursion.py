"""Coproduct, unary and pair-product operations and the recursion driver.

``compute_w(g, s)`` returns the integer-weighted sum of diagram pairs whose
image under ``hom_F`` is the genus ``g`` Gaussian mean with ``s`` loop
insertions.  Intermediate results are labeled sums; desymmetrizing them
checks that they are symmetric in the marked points.
"""

from __future__ import annotations

from collections import Counter
from math import comb
from typing import Mapping

from .diagrams import (
    Color,
    DiagramPair,
    FormalSum,
    G,
    LabeledDiagramPair,
    Sort,
    W,
    check_stable,
    desymmetrize,
)


class UnexpectedTerm(ValueError):
    """A one-point sum contained a term outside the one-backbone shape."""


def coproduct_column(sort: Sort) -> FormalSum[tuple[Sort, Sort]]:
    """Split one column into a labeled column and a ``p``-marked column.

    Keys are ``(labeled, marked)`` sort pairs.
    """
    k = sort.k
    out: Counter = Counter()
    if sort.color == Color.WHITE:
        for m in range(k + 1):
            out[W(m + 1), W(k - m + 1)] += 2 * (k - m + 1)
        for m in range(k + 2):
            c = 2 * k - 2 * m + 3
            out[W(m + 1), W(k - m + 2)] += 4 * c
            out[G(m + 1), G(k - m + 2)] += c
    else:
        for m in range(k + 1):
            out[G(m + 1), W(k - m + 1)] += 2 * (k - m + 1)
            out[W(m + 1), G(k - m + 1)] += 2 * k - 2 * m + 1
        for m in range(k + 2):
            c = 4 * (2 * k - 2 * m + 3)
            out[W(m + 1), G(k - m + 2)] += c
            out[G(m + 1), W(k - m + 2)] += c
    return FormalSum(out)


def product_columns(a: Sort, b: Sort) -> FormalSum[Sort]:
    n = a.height + b.height
    if a.color == Color.WHITE and b.color == Color.WHITE:
        return FormalSum({W(n + 1): 1})
    if a.color != b.color:
        return FormalSum({G(n + 1): 1})
    return FormalSum({W(n + 1): 4, W(n): 1})


def _labeled(counts: Mapping[Sort, int], label: Sort) -> LabeledDiagramPair:
    return LabeledDiagramPair(DiagramPair.from_counts(counts), label)


def _without(counts: Counter, *sorts: Sort) -> Counter | None:
    rest = Counter(counts)
    for s in sorts:
        if rest[s] < 1:
            return None
        rest[s] -= 1
    return +rest


def cp(total: FormalSum[DiagramPair]) -> FormalSum[LabeledDiagramPair]:
    out: Counter = Counter()
    for pair, c in total.items():
        counts = pair.counts()
        for sort in counts:
            rest = _without(counts, sort)
            for (one, marked), c2 in coproduct_column(sort).items():
                weight = c * c2 * (1 + rest[marked])
                new = rest.copy()
                new[one] += 1
                new[marked] += 1
                out[_labeled(new, one)] += weight
    return FormalSum(out)


def _genus_zero_factor(*genera: int) -> int:
    """Genus-zero sums are half the Gaussian means; rescale when genus changes.

    Each genus-zero input contributes a 2 and a genus-zero output takes one back.
    """
    zeros = sum(1 for g in genera if g == 0)
    return 2 ** (zeros - (1 if sum(genera) == 0 else 0))


def _pair_contributions(a: Sort, b: Sort, rest: Counter, weight: int, out: Counter) -> None:
    for prod, c in product_columns(a, b).items():
        new = rest.copy()
        new[prod] += 1
        out[_labeled(new, prod)] += weight * c


def unary(total: FormalSum[DiagramPair], source_genus: int) -> FormalSum[LabeledDiagramPair]:
    """Products of two columns inside one pair; the result has genus ``source_genus + 1``."""
    extra = 2 if source_genus == 0 else 1
    out: Counter = Counter()
    for pair, c in total.items():
        if pair.length() < 2:
            raise ValueError(f"unary needs at least two columns, got {pair!r}")
        counts = pair.counts()
        sorts = sorted(counts)
        for i, a in enumerate(sorts):
            for b in sorts[i:]:
                rest = _without(counts, a, b)
                if rest is None:
                    continue
                _pair_contributions(a, b, rest, c * extra * (2 if a != b else 1), out)
    return FormalSum(out)


def _merge_binomial(x: Counter, y: Counter) -> tuple[Counter, int]:
    factor = 1
    for sort in x.keys() & y.keys():
        factor *= comb(x[sort] + y[sort], x[sort])
    return x + y, factor


def pair_product(
    x: FormalSum[DiagramPair],
    g1: int,
    y: FormalSum[DiagramPair] | None = None,
    g2: int | None = None,
) -> FormalSum[LabeledDiagramPair]:
    """Product of sums of genus ``g1`` and ``g2``; pass ``y=None`` to square ``x``.

    When squaring, unordered term pairs and unordered column pairings are
    enumerated once each.
    """
    square = y is None
    if square:
        y, g2 = x, g1
    extra = _genus_zero_factor(g1, g2)
    out: Counter = Counter()
    xs = x.sorted_items()
    ys = y.sorted_items()
    for i, (t1, c1) in enumerate(xs):
        n1 = t1.counts()
        partners = ys[i:] if square else ys
        for t2, c2 in partners:
            n2 = t2.counts()
            same_term = square and t1 == t2
            sorts1 = sorted(n1)
            for ia, a in enumerate(sorts1):
                rest1 = _without(n1, a)
                for b in (sorts1[ia:] if same_term else sorted(n2)):
                    rest2 = _without(n2, b)
                    rest, binom = _merge_binomial(rest1, rest2)
                    weight = c1 * c2 * binom * extra
                    if not (same_term and a == b):
                        weight *= 2
                    for prod, c in product_columns(a, b).items():
                        new = rest.copy()
                        new[prod] += 1
                        out[_labeled(new, prod)] += weight * c
    return FormalSum(out)


SEEDS: dict[tuple[int, int], FormalSum[DiagramPair]] = {
    (0, 3): FormalSum({DiagramPair.of([1, 1, 1]): 4, DiagramPair.of([1], [1, 1]): 1}),
    (1, 1): FormalSum({DiagramPair.of([2]): 1}),
}


def _stable(g: int, s: int) -> bool:
    return g >= 0 and s >= 1 and 2 * g - 2 + s > 0


class RecursionCache:
    """Insert-once memo of computed sums keyed by ``(g, s)``."""

    def __init__(self) -> None:
        self._data: dict[tuple[int, int], FormalSum[DiagramPair]] = dict(SEEDS)

    def get(self, key: tuple[int, int]) -> FormalSum[DiagramPair] | None:
        return self._data.get(key)

    def put(self, key: tuple[int, int], value: FormalSum[DiagramPair]) -> None:
        if key in self._data:
            raise KeyError(f"{key} already cached")
        self._data[key] = value

    def __contains__(self, key: object) -> bool:
        return key in self._data


_DEFAULT_CACHE = RecursionCache()


def labeled_w(g: int, s: int, cache: RecursionCache | None = None) -> FormalSum[LabeledDiagramPair]:
    """The labeled sum before desymmetrization (the right side of the recursion)."""
    check_stable(g, s)
    cache = _DEFAULT_CACHE if cache is None else cache
    total: FormalSum[LabeledDiagramPair] = FormalSum()
    if _stable(g, s - 1):
        total = total + cp(compute_w(g, s - 1, cache))
    if g >= 1 and _stable(g - 1, s + 1):
        total = total + unary(compute_w(g - 1, s + 1, cache), g - 1)
    for (g1, s1), (g2, s2) in stable_splits(g, s):
        x = compute_w(g1, s1, cache)
        if (g1, s1) == (g2, s2):
            total = total + pair_product(x, g1)
        else:
            total = total + pair_product(x, g1, compute_w(g2, s2, cache), g2)
    return total


def stable_splits(g: int, s: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Unordered splits g1+g2 = g, s1+s2 = s+1 with both halves stable."""
    seen = []
    for g1 in range(g + 1):
        for s1 in range(1, s + 1):
            a, b = (g1, s1), (g - g1, s + 1 - s1)
            if _stable(*a) and _stable(*b) and a <= b:
                seen.append((a, b))
    return seen


def compute_w(g: int, s: int, cache: RecursionCache | None = None) -> FormalSum[DiagramPair]:
    check_stable(g, s)
    cache = _DEFAULT_CACHE if cache is None else cache
    hit = cache.get((g, s))
    if hit is not None:
        return hit
    result = desymmetrize(labeled_w(g, s, cache))
    cache.put((g, s), result)
    return result


def extract_b_onebackbone(w: FormalSum[DiagramPair], g: int) -> list[int]:
    """Coefficients b_0..b_{g-1} of the single white columns of heights 2g..3g-1."""
    b = [0] * g
    for pair, c in w.items():
        heights = pair.white.columns
        if pair.grey.columns or len(heights) != 1 or not 2 * g <= heights[0] <= 3 * g - 1:
            raise UnexpectedTerm(f"term {pair!r} is not a single white column in [{2 * g}, {3 * g - 1}]")
        b[heights[0] - 2 * g] = c
    return b
