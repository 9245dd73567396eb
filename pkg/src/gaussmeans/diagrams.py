"""Pairs of Young diagrams and non-negative integer formal sums over them.

A pair ``(white, grey)`` encodes a product of s-basis functions: a white
column of height ``h`` stands for ``s_{h-1,0}`` and a grey one for
``s_{h-1,1}``.  Diagrams are multisets of column heights kept in
non-increasing order, so equality is structural.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Generic, Iterable, Iterator, Mapping, TypeVar


class Color(IntEnum):
    WHITE = 0
    GREY = 1


@dataclass(frozen=True, order=True)
class Sort:
    """Column species: a color together with a height."""

    color: Color
    height: int

    def __post_init__(self) -> None:
        if self.height < 1:
            raise ValueError(f"column height must be positive, got {self.height}")
        object.__setattr__(self, "color", Color(self.color))

    @property
    def beta(self) -> int:
        return int(self.color)

    @property
    def k(self) -> int:
        return self.height - 1

    def __repr__(self) -> str:
        return f"{'W' if self.color == Color.WHITE else 'G'}{self.height}"


def W(h: int) -> Sort:
    return Sort(Color.WHITE, h)


def G(h: int) -> Sort:
    return Sort(Color.GREY, h)


@dataclass(frozen=True, order=True)
class YoungDiagram:
    columns: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        cols = tuple(sorted((int(c) for c in self.columns), reverse=True))
        if cols and cols[-1] < 1:
            raise ValueError(f"column heights must be positive: {cols}")
        object.__setattr__(self, "columns", cols)

    def volume(self) -> int:
        return sum(self.columns)

    def length(self) -> int:
        return len(self.columns)

    def __iter__(self) -> Iterator[int]:
        return iter(self.columns)

    def __repr__(self) -> str:
        return repr(list(self.columns))


@dataclass(frozen=True, order=True)
class DiagramPair:
    white: YoungDiagram = field(default_factory=YoungDiagram)
    grey: YoungDiagram = field(default_factory=YoungDiagram)

    @classmethod
    def of(cls, white: Iterable[int] = (), grey: Iterable[int] = ()) -> DiagramPair:
        return cls(YoungDiagram(tuple(white)), YoungDiagram(tuple(grey)))

    @classmethod
    def from_sorts(cls, sorts: Iterable[Sort]) -> DiagramPair:
        white, grey = [], []
        for sort in sorts:
            (white if sort.color == Color.WHITE else grey).append(sort.height)
        return cls.of(white, grey)

    @classmethod
    def from_counts(cls, counts: Mapping[Sort, int]) -> DiagramPair:
        return cls.from_sorts(s for s, m in counts.items() for _ in range(m))

    def length(self) -> int:
        return self.white.length() + self.grey.length()

    def volume(self) -> int:
        return self.white.volume() + self.grey.volume()

    def sorts(self) -> Iterator[Sort]:
        """All columns as sorts, with repetition."""
        for h in self.white:
            yield W(h)
        for h in self.grey:
            yield G(h)

    def counts(self) -> Counter[Sort]:
        return Counter(self.sorts())

    def distinct_sorts(self) -> list[Sort]:
        return sorted(set(self.sorts()))

    def multiplicity(self, sort: Sort) -> int:
        cols = self.white if sort.color == Color.WHITE else self.grey
        return cols.columns.count(sort.height)

    def __repr__(self) -> str:
        if not self.grey.columns:
            return f"W{self.white!r}"
        if not self.white.columns:
            return f"G{self.grey!r}"
        return f"(W{self.white!r}, G{self.grey!r})"


@dataclass(frozen=True, order=True)
class LabeledDiagramPair:
    """A pair with the label "1" attached to one of its sorts."""

    pair: DiagramPair
    label: Sort

    def __post_init__(self) -> None:
        if self.pair.multiplicity(self.label) < 1:
            raise ValueError(f"label {self.label!r} not present in {self.pair!r}")


class UnstableError(ValueError):
    """Raised for (g, s) with 2g - 2 + s <= 0."""


class NotSymmetric(ValueError):
    """A labeled sum that is not the symmetrization of any unlabeled sum."""

    def __init__(self, pair: DiagramPair, coefficients: Mapping[Sort, int]):
        self.pair = pair
        self.coefficients = dict(coefficients)
        detail = ", ".join(f"{s!r}: {c}" for s, c in sorted(self.coefficients.items()))
        super().__init__(f"labeled coefficients of {pair!r} differ: {detail}")


def check_stable(g: int, s: int) -> None:
    if g < 0 or s < 1 or 2 * g - 2 + s <= 0:
        raise UnstableError(f"(g, s) = ({g}, {s}) is not stable")


K = TypeVar("K")


class FormalSum(Generic[K]):
    """Finite map from keys to positive integer coefficients.

    Zero coefficients are never stored.  Instances are treated as immutable
    once built; accumulate into a ``dict`` or ``Counter`` and wrap the result.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[K, int] | Iterable[tuple[K, int]] = ()):
        acc: dict[K, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            if c:
                acc[key] = acc.get(key, 0) + c
        for key in [k for k, c in acc.items() if c == 0]:
            del acc[key]
        for key, c in acc.items():
            if c < 0:
                raise ValueError(f"negative coefficient {c} on {key!r}")
        self._terms = acc

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __getitem__(self, key: K) -> int:
        return self._terms.get(key, 0)

    def __contains__(self, key: object) -> bool:
        return key in self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[K]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FormalSum) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: FormalSum[K]) -> FormalSum[K]:
        merged = dict(self._terms)
        for key, c in other.items():
            merged[key] = merged.get(key, 0) + c
        return FormalSum(merged)

    def scale(self, factor: int) -> FormalSum[K]:
        if factor < 0:
            raise ValueError("only non-negative scalars are allowed")
        return FormalSum({k: c * factor for k, c in self._terms.items()})

    __rmul__ = scale

    def sorted_items(self) -> list[tuple[K, int]]:
        return sorted(self._terms.items())

    def coefficients(self) -> list[int]:
        return [c for _, c in self.sorted_items()]

    def as_dict(self) -> dict[K, int]:
        return dict(self._terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}·{k!r}" for k, c in self.sorted_items())
        return f"FormalSum({body or '0'})"


def admissible(pair: DiagramPair, g: int, s: int) -> bool:
    check_stable(g, s)
    n_grey = pair.grey.length()
    if n_grey % 2 or pair.length() != s:
        return False
    vol = pair.volume()
    return 2 * g - 1 + s + n_grey // 2 <= vol <= 3 * g + 2 * s - 3


def symmetrize_embed(total: FormalSum[DiagramPair]) -> FormalSum[LabeledDiagramPair]:
    out: dict[LabeledDiagramPair, int] = {}
    for pair, c in total.items():
        for sort in pair.distinct_sorts():
            out[LabeledDiagramPair(pair, sort)] = c
    return FormalSum(out)


def desymmetrize(labeled: FormalSum[LabeledDiagramPair]) -> FormalSum[DiagramPair]:
    by_pair: dict[DiagramPair, dict[Sort, int]] = {}
    for key, c in labeled.items():
        by_pair.setdefault(key.pair, {})[key.label] = c
    out: dict[DiagramPair, int] = {}
    for pair, coeffs in by_pair.items():
        values = {coeffs.get(sort, 0) for sort in pair.distinct_sorts()}
        if len(values) != 1:
            raise NotSymmetric(pair, {s: coeffs.get(s, 0) for s in pair.distinct_sorts()})
        out[pair] = values.pop()
    return FormalSum(out)


def to_json_obj(total: FormalSum[DiagramPair], g: int, s: int) -> dict:
    terms = [
        {"white": list(p.white.columns), "grey": list(p.grey.columns), "coeff": str(c)}
        for p, c in total.items()
    ]
    terms.sort(key=lambda t: (t["white"], t["grey"]))
    return {"g": g, "s": s, "terms": terms}


def to_json(total: FormalSum[DiagramPair], g: int, s: int) -> str:
    return json.dumps(to_json_obj(total, g, s))


def from_json(text: str) -> tuple[int, int, FormalSum[DiagramPair]]:
    obj = json.loads(text)
    total = FormalSum(
        (DiagramPair.of(t["white"], t["grey"]), int(t["coeff"])) for t in obj["terms"]
    )
    return obj["g"], obj["s"], total
