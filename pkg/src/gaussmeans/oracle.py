"""Brute-force ground truth: Wick pairings, fatgraph shapes and lattice counts.

Half-edges are integers ``0..2E-1``.  A fatgraph is a pair of permutations:
``sigma`` rotates half-edges around their vertex and ``alpha`` is the
fixed-point-free involution pairing them into edges.  Faces are the cycles
of ``sigma . alpha`` (first cross the edge, then turn at the vertex).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from itertools import permutations
from typing import Iterator, Sequence

from .algebra import MPoly, MRational, TruncatedSeries


class OddTotalValence(ValueError):
    pass


class BudgetExceeded(ValueError):
    pass


WICK_BUDGET = 14


def _cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = []
        h = start
        while not seen[h]:
            seen[h] = True
            cycle.append(h)
            h = perm[h]
        out.append(cycle)
    return out


def _matchings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1 :]):
            yield [(first, other), *tail]


def _rotation(valences: Sequence[int]) -> tuple[list[int], list[int]]:
    sigma, vertex_of = [], []
    start = 0
    for v, k in enumerate(valences):
        sigma.extend(start + (i + 1) % k for i in range(k))
        vertex_of.extend([v] * k)
        start += k
    return sigma, vertex_of


def wick_moments(valences: Sequence[int], budget: int = WICK_BUDGET) -> Counter[int]:
    """Genus tally of connected pairings of star vertices with the given valences.

    Each vertex has a marked first half-edge, so this counts ciliated
    objects: the tally for one vertex of valence k is the genus expansion of
    the Gaussian moment <tr H^k>.
    """
    total = sum(valences)
    if total % 2:
        raise OddTotalValence(f"total valence {total} is odd")
    if total > budget:
        raise BudgetExceeded(f"total valence {total} exceeds {budget}")
    sigma, vertex_of = _rotation(valences)
    n_vertices = len(valences)
    tally: Counter[int] = Counter()
    for matching in _matchings(list(range(total))):
        parent = list(range(n_vertices))

        def root(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        alpha = [0] * total
        for a, b in matching:
            alpha[a], alpha[b] = b, a
            parent[root(vertex_of[a])] = root(vertex_of[b])
        if len({root(v) for v in range(n_vertices)}) > 1:
            continue
        faces = len(_cycles([sigma[alpha[h]] for h in range(total)]))
        euler = n_vertices - total // 2 + faces
        tally[(2 - euler) // 2] += 1
    return tally


@dataclass(frozen=True)
class FatGraph:
    """A connected fatgraph in canonical labeling, with its automorphism count."""

    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    aut: int = field(compare=False)

    @property
    def half_edges(self) -> int:
        return len(self.sigma)

    def vertices(self) -> list[list[int]]:
        return _cycles(self.sigma)

    def edges(self) -> list[tuple[int, int]]:
        return [(h, self.alpha[h]) for h in range(self.half_edges) if h < self.alpha[h]]

    def faces(self) -> list[list[int]]:
        return _cycles([self.sigma[self.alpha[h]] for h in range(self.half_edges)])

    def genus(self) -> int:
        euler = len(self.vertices()) - len(self.edges()) + len(self.faces())
        return (2 - euler) // 2

    def valences(self) -> list[int]:
        return sorted((len(c) for c in self.vertices()), reverse=True)

    def face_of(self) -> list[int]:
        """Index of the face containing each half-edge (faces in :meth:`faces` order)."""
        out = [0] * self.half_edges
        for i, cycle in enumerate(self.faces()):
            for h in cycle:
                out[h] = i
        return out

    def to_json_obj(self) -> dict:
        return {
            "vertices": self.vertices(),
            "edges": [list(e) for e in self.edges()],
            "genus": self.genus(),
            "faces": len(self.faces()),
            "aut": self.aut,
        }


def _traversal_code(sigma: Sequence[int], alpha: Sequence[int], root: int) -> tuple[tuple[int, int], ...]:
    label = {root: 0}
    order = [root]
    i = 0
    while i < len(order):
        h = order[i]
        for nxt in (alpha[h], sigma[h]):
            if nxt not in label:
                label[nxt] = len(order)
                order.append(nxt)
        i += 1
    return tuple((label[alpha[h]], label[sigma[h]]) for h in order)


def canonical_form(sigma: Sequence[int], alpha: Sequence[int]) -> FatGraph:
    """Minimal traversal code over all roots; |Aut| is the number of roots attaining it."""
    codes = [_traversal_code(sigma, alpha, r) for r in range(len(sigma))]
    best = min(codes)
    aut = codes.count(best)
    return FatGraph(tuple(s for _, s in best), tuple(a for a, _ in best), aut)


def _rooted_maps(excess: int, min_valence: int = 3) -> Iterator[tuple[list[int], list[int]]]:
    """Every connected rooted map with E - V == excess and all valences >= min_valence.

    Half-edges are labeled in the order a breadth-first traversal from the
    root discovers them, so each rooted map is produced exactly once.
    """
    max_half = 2 * excess * min_valence // (min_valence - 2)
    alpha: list[int | None] = []
    sigma: list[int | None] = []
    pre: list[int | None] = []

    def chain_head(h: int) -> int:
        while pre[h] is not None and pre[h] != h:
            h = pre[h]
        return h

    def chain_length(head: int) -> int:
        n, h = 1, head
        while sigma[h] is not None and sigma[h] != head:
            h = sigma[h]
            n += 1
        return n

    def new_half() -> int:
        alpha.append(None)
        sigma.append(None)
        pre.append(None)
        return len(alpha) - 1

    def drop_half() -> None:
        alpha.pop()
        sigma.pop()
        pre.pop()

    def hopeless(closed: int, open_chains: int) -> bool:
        n = len(alpha)
        return n > max_half or n / 2 - closed - open_chains > excess

    def step(i: int, closed: int, open_chains: int) -> Iterator[tuple[list[int], list[int]]]:
        if hopeless(closed, open_chains):
            return
        n = len(alpha)
        if i == n:
            if n % 2 == 0 and n // 2 - closed == excess and open_chains == 0:
                yield list(sigma), list(alpha)  # type: ignore[arg-type]
            return
        if alpha[i] is None:
            candidates = [j for j in range(i + 1, n) if alpha[j] is None]
            for j in candidates:
                alpha[i], alpha[j] = j, i
                yield from sigma_step(i, closed, open_chains)
                alpha[i] = alpha[j] = None
            j = new_half()
            alpha[i], alpha[j] = j, i
            yield from sigma_step(i, closed, open_chains + 1)
            alpha[i] = None
            drop_half()
        else:
            yield from sigma_step(i, closed, open_chains)

    def sigma_step(i: int, closed: int, open_chains: int) -> Iterator[tuple[list[int], list[int]]]:
        n = len(alpha)
        head = chain_head(i)
        for j in range(n):
            if pre[j] is not None:
                continue
            if j == head:
                if chain_length(head) < min_valence:
                    continue
                sigma[i], pre[j] = j, i
                yield from step(i + 1, closed + 1, open_chains - 1)
            else:
                sigma[i], pre[j] = j, i
                yield from step(i + 1, closed, open_chains - 1)
            sigma[i] = pre[j] = None
        j = new_half()
        sigma[i], pre[j] = j, i
        yield from step(i + 1, closed, open_chains)
        sigma[i] = pre[j] = None
        drop_half()

    root = new_half()
    yield from step(0, 0, 1)
    if root != 0:
        raise AssertionError("root must be half-edge 0")


@lru_cache(maxsize=None)
def _census_by_excess(excess: int) -> dict[tuple[int, int], tuple[FatGraph, ...]]:
    found: dict[tuple[int, int], dict[FatGraph, None]] = {}
    for sigma, alpha in _rooted_maps(excess):
        graph = canonical_form(sigma, alpha)
        key = (graph.genus(), len(graph.faces()))
        found.setdefault(key, {})[graph] = None
    return {key: tuple(sorted(graphs, key=lambda x: (x.sigma, x.alpha))) for key, graphs in found.items()}


MAX_EXCESS = 3
MAX_EDGES = 9


def shape_census(g: int, s: int) -> tuple[FatGraph, ...]:
    """Isomorphism classes of connected fatgraphs of genus g with s faces, valences >= 3."""
    excess = 2 * g - 2 + s
    if excess <= 0:
        raise ValueError(f"(g, s) = ({g}, {s}) is not stable")
    if excess > MAX_EXCESS:
        raise BudgetExceeded(f"2g - 2 + s = {excess} exceeds {MAX_EXCESS} (at most {MAX_EDGES} edges)")
    return _census_by_excess(excess).get((g, s), ())


def census_json(graphs: Sequence[FatGraph]) -> str:
    return json.dumps([graph.to_json_obj() for graph in graphs])


def _face_labelings(graph: FatGraph) -> Iterator[tuple[list[int], tuple[int, ...]]]:
    """Face index of each half-edge together with every bijection faces -> slots."""
    face_of = graph.face_of()
    n_faces = len(graph.faces())
    for slots in permutations(range(n_faces)):
        yield face_of, slots


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Positive integer vectors of the given length and sum."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _count_metrics(graph: FatGraph, face_of: list[int], slots: Sequence[int], perimeters: Sequence[int]) -> int:
    edges = graph.edges()
    target = [0] * len(perimeters)
    for face, slot in enumerate(slots):
        target[face] = perimeters[slot]
    # each edge adds its length to the faces on both of its sides
    if sum(perimeters) % 2:
        return 0
    count = 0
    for lengths in _compositions(sum(perimeters) // 2, len(edges)):
        per = [0] * len(perimeters)
        for (a, b), ell in zip(edges, lengths):
            per[face_of[a]] += ell
            per[face_of[b]] += ell
        if per == target:
            count += 1
    return count


def _count_edge_lengths(edges: tuple[tuple[int, int], ...], remaining: list[int], i: int = 0) -> int:
    """Positive edge lengths such that each slot's perimeter is the sum over its sides."""
    if i == len(edges):
        return 0 if any(remaining) else 1
    a, b = edges[i]
    total = 0
    if a == b:
        for ell in range(1, remaining[a] // 2 + 1):
            remaining[a] -= 2 * ell
            total += _count_edge_lengths(edges, remaining, i + 1)
            remaining[a] += 2 * ell
    else:
        for ell in range(1, min(remaining[a], remaining[b]) + 1):
            remaining[a] -= ell
            remaining[b] -= ell
            total += _count_edge_lengths(edges, remaining, i + 1)
            remaining[a] += ell
            remaining[b] += ell
    return total


def lattice_count(g: int, s: int, perimeters: Sequence[int]) -> Fraction:
    """Automorphism-weighted count of positive integer metrics with the given face perimeters."""
    if len(perimeters) != s:
        raise ValueError(f"expected {s} perimeters, got {len(perimeters)}")
    if any(p < 1 for p in perimeters):
        raise ValueError("perimeters must be positive")
    if sum(perimeters) % 2:
        return Fraction(0)
    total = Fraction(0)
    for key, weight in _shape_terms(g, s).items():
        n = _count_edge_lengths(key, list(perimeters))
        if n:
            total += weight * n
    return total


def lattice_count_by_enumeration(g: int, s: int, perimeters: Sequence[int]) -> Fraction:
    """Same count by listing every composition of the half-perimeter over the edges."""
    if len(perimeters) != s:
        raise ValueError(f"expected {s} perimeters, got {len(perimeters)}")
    total = Fraction(0)
    for graph in shape_census(g, s):
        n = sum(_count_metrics(graph, face_of, slots, perimeters) for face_of, slots in _face_labelings(graph))
        total += Fraction(n, graph.aut)
    return total


@lru_cache(maxsize=None)
def _shape_terms(g: int, s: int) -> Counter:
    """Edge multisets (as sorted slot pairs) with their summed 1/|Aut| weights."""
    terms: Counter = Counter()
    for graph in shape_census(g, s):
        for face_of, slots in _face_labelings(graph):
            key = tuple(sorted(tuple(sorted((slots[face_of[a]], slots[face_of[b]]))) for a, b in graph.edges()))
            terms[key] += Fraction(1, graph.aut)
    return terms


def shape_sum(g: int, s: int) -> MRational:
    """sum over shapes of 1/|Aut| prod_edges 1/(z_I z_J - 1), faces labeled in all ways."""
    one = MPoly.const(s, 1)
    z = [MPoly.var(s, i) for i in range(s)]
    edge_factor = {}
    for i in range(s):
        for j in range(i, s):
            edge_factor[i, j] = z[i] * z[j] - one
    terms = _shape_terms(g, s)
    # common denominator: the largest power of each edge factor over all terms
    power: Counter = Counter()
    for key in terms:
        for pair, m in Counter(key).items():
            power[pair] = max(power[pair], m)
    den = one
    for pair, m in power.items():
        den = den * edge_factor[pair] ** m
    pairs = sorted(power)
    grouped: Counter = Counter()
    for key, weight in terms.items():
        counts = Counter(key)
        grouped[tuple(power[pair] - counts.get(pair, 0) for pair in pairs)] += weight
    # integer weights keep the polynomial products in int arithmetic
    scale = lcm(*(w.denominator for w in grouped.values()))
    items = [(missing, int(w * scale)) for missing, w in grouped.items()]

    def horner(items: list[tuple[tuple[int, ...], int]], i: int) -> MPoly:
        if i == len(pairs):
            return MPoly.const(s, sum(w for _, w in items))
        by_power: dict[int, list] = {}
        for missing, w in items:
            by_power.setdefault(missing[i], []).append((missing, w))
        out = MPoly(s)
        for k in range(max(by_power), -1, -1):
            out = out * edge_factor[pairs[i]]
            if k in by_power:
                out = out + horner(by_power[k], i + 1)
        return out

    num = horner(items, 0)
    den = den * scale
    return MRational(num, den)


def differentiate_shape_sum(f: MRational) -> MRational:
    """Apply prod_i (1/(z_i - 1/z_i)) z_i d/dz_i."""
    s = f.nvars
    for i in range(s):
        f = f.theta(i)
    z = [MPoly.var(s, i) for i in range(s)]
    one = MPoly.const(s, 1)
    den = one
    for zi in z:
        den = den * (zi * zi - one)
    num = f.num
    for zi in z:
        num = num * zi
    return MRational(num, f.den * den)


class _Nilpotent:
    """Polynomials in e_0..e_{s-1} with e_i^2 = 0, keyed by bitmask."""

    __slots__ = ("c",)

    def __init__(self, c: dict[int, Fraction]) -> None:
        self.c = c

    def __mul__(self, other: _Nilpotent) -> _Nilpotent:
        out: dict[int, Fraction] = {}
        for m1, a in self.c.items():
            for m2, b in other.c.items():
                if m1 & m2 == 0:
                    out[m1 | m2] = out.get(m1 | m2, 0) + a * b
        return _Nilpotent(out)

    def inverse(self) -> _Nilpotent:
        """1/(a + n) = sum_k (-n)^k / a^(k+1) for nilpotent n."""
        a = self.c.get(0, Fraction(0))
        if a == 0:
            raise ZeroDivisionError("constant term vanishes")
        minus_n = _Nilpotent({m: -x / a for m, x in self.c.items() if m})
        power = _Nilpotent({0: Fraction(1)})
        total = dict(power.c)
        while power.c:
            power = power * minus_n
            for m, x in power.c.items():
                total[m] = total.get(m, 0) + x
        return _Nilpotent({m: x / a for m, x in total.items()})


def shape_mean_at(g: int, s: int, point: Sequence[Fraction]) -> Fraction:
    """``differentiate_shape_sum(shape_sum(g, s))`` evaluated at one point.

    Each z_i is replaced by z_i (1 + e_i); the coefficient of e_0 ... e_{s-1}
    is then the mixed theta derivative.  Much faster than the symbolic route.
    """
    if len(point) != s:
        raise ValueError(f"expected {s} coordinates, got {len(point)}")
    zs = [Fraction(x) for x in point]
    factors = {}
    for i in range(s):
        for j in range(i, s):
            c = zs[i] * zs[j]
            if i == j:
                shift = {1 << i: 2 * c}
            else:
                shift = {1 << i: c, 1 << j: c, (1 << i) | (1 << j): c}
            factors[i, j] = _Nilpotent({0: c - 1, **shift}).inverse()
    full = (1 << s) - 1
    total = Fraction(0)
    for key, weight in _shape_terms(g, s).items():
        term = _Nilpotent({0: Fraction(weight)})
        for pair in key:
            term = term * factors[pair]
        total += term.c.get(full, Fraction(0))
    for z in zs:
        total *= z / (z * z - 1)
    return total


def lattice_series_coefficients(g: int, s: int, total_max: int) -> dict[tuple[int, ...], Fraction]:
    """Lattice counts for every perimeter vector with sum at most total_max."""
    out = {}
    for total in range(s, total_max + 1):
        for perimeters in _compositions(total, s):
            value = lattice_count(g, s, perimeters)
            if value:
                out[perimeters] = value
    return out


def _monomials(nvars: int, degree: int) -> Iterator[tuple[int, ...]]:
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree + 1):
        for rest in _monomials(nvars - 1, degree - first):
            yield (first, *rest)


def inverse_power_coefficients(f: MRational, total_max: int) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of prod z_i^-P_i (all P_i >= 1, sum P <= total_max) in the expansion of f at z = infinity.

    Writes x = 1/z, den = z^D dt(x) with dt(0) != 0, and inverts dt as a power series.
    """
    s = f.nvars
    top = tuple(max(e[i] for e in f.den.terms) for i in range(s))
    if top not in f.den.terms:
        raise ValueError("denominator has no unique leading monomial at infinity")
    dt = {tuple(t - a for t, a in zip(top, e)): c for e, c in f.den.terms.items()}
    shifts = {tuple(t - a for t, a in zip(top, e)): c for e, c in f.num.terms.items()}
    reach = total_max - min(sum(e) for e in shifts)
    c0 = dt[(0,) * s]
    inv: dict[tuple[int, ...], Fraction] = {}
    for degree in range(reach + 1):
        for m in _monomials(s, degree):
            acc = Fraction(1) if degree == 0 else Fraction(0)
            for e, c in dt.items():
                if any(e) and all(a <= b for a, b in zip(e, m)):
                    acc -= c * inv.get(tuple(b - a for a, b in zip(e, m)), 0)
            if acc:
                inv[m] = acc / c0
    out: dict[tuple[int, ...], Fraction] = {}
    for shift, c in shifts.items():
        for m, v in inv.items():
            p = tuple(a + b for a, b in zip(shift, m))
            if all(x >= 1 for x in p) and sum(p) <= total_max:
                out[p] = out.get(p, Fraction(0)) + c * v
    return {p: v for p, v in out.items() if v}


def rainbow_factor(order: int) -> TruncatedSeries:
    """f(u) = (1 - sqrt(1 - 4u^2)) / (2u^2) as a series with Catalan coefficients."""
    u = TruncatedSeries.variable(order + 2)
    f = TruncatedSeries([Fraction(1)], order + 2)
    for _ in range(order + 1):
        f = u * u * f * f + 1
    return TruncatedSeries(f.c[: order + 1], order + 1)


def ladder_factor(order: int) -> TruncatedSeries:
    """e^-l as a series in u, where u = 1/(e^l + e^-l): y = u (1 + y^2)."""
    u = TruncatedSeries.variable(order + 1)
    y = TruncatedSeries([Fraction(0)], order + 1)
    for _ in range(order + 1):
        y = u * (y * y + 1)
    return y


def ladder_identity_holds(order: int) -> bool:
    """u f(u) = e^-l, e^l + e^-l = 1/u, and the diagonal ladder sum equals 1/(e^{2l} - 1), to t^order."""
    u = TruncatedSeries.variable(order + 1)
    y = ladder_factor(order)
    uf = u * rainbow_factor(order)
    rung = uf * uf
    ladder = TruncatedSeries([Fraction(0)], order + 1)
    power = rung
    for _ in range(order // 2 + 1):
        ladder = ladder + power
        power = power * rung
    same = all(uf.coeff(n) == y.coeff(n) for n in range(order + 1))
    inverse = u * (y * y + 1)
    closes = all(inverse.coeff(n) == y.coeff(n) for n in range(order + 1))
    # 1/(e^{2l} - 1) = y^2 / (1 - y^2)
    resummed = ladder * (1 - y * y)
    return same and closes and all(resummed.coeff(n) == (y * y).coeff(n) for n in range(order + 1))


def trivalent_one_face_census(g: int) -> Counter[int]:
    """Rooted trivalent one-face shapes of genus g, tallied by their number of 2-cycles.

    A rooting marks a half-edge; its edge is the marked edge and the 2-cycles
    counted are unordered pairs of distinct unmarked edges joining the same
    two distinct vertices.
    """
    tally: Counter[int] = Counter()
    for graph in shape_census(g, 1):
        if set(graph.valences()) != {3}:
            continue
        vertex_of = [0] * graph.half_edges
        for v, cycle in enumerate(graph.vertices()):
            for h in cycle:
                vertex_of[h] = v
        seen_roots = set()
        for root in range(graph.half_edges):
            code = _traversal_code(graph.sigma, graph.alpha, root)
            if code in seen_roots:
                continue
            seen_roots.add(code)
            marked = {root, graph.alpha[root]}
            ends = Counter()
            for a, b in graph.edges():
                if a in marked:
                    continue
                u, v = vertex_of[a], vertex_of[b]
                if u != v:
                    ends[min(u, v), max(u, v)] += 1
            q = sum(m * (m - 1) // 2 for m in ends.values())
            tally[q] += 1
    return tally
