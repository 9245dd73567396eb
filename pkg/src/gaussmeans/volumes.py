"""Discrete volumes N_{g,s}(P) as mod-2 even quasi-polynomials.

A single-variable basis element ``p_{k,a}`` is supported on integers of parity
``(k + a) mod 2`` and equals a polynomial in ``b^2`` of degree ``r`` there.
Elements with the same support and degree are proportional:
``p_{2r+1,1} = p_{2r,0} / (4(2r+1))`` and ``p_{2r-1,0} = 4 r p_{2r,1}`` (r >= 1),
so fitting uses the even-``k`` elements ``p_{2r,a}`` as the basis.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

from .kernels import SExpansion


class UnderdeterminedSystem(ValueError):
    pass


class InconsistentSamples(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PBasisElement:
    k: int
    alpha: int

    def __post_init__(self) -> None:
        if self.k < 0 or self.alpha not in (0, 1):
            raise ValueError(f"invalid basis index ({self.k}, {self.alpha})")

    @property
    def support(self) -> int:
        """Parity of the integers where the element can be nonzero."""
        return (self.k + self.alpha) % 2

    @property
    def degree(self) -> int:
        """Degree in b^2 on the support; equals r in the s-basis image s_{r,*}."""
        return sum(1 for m in range(1, self.k + 1) if m % 2 == self.support)


def p_eval(k: int, alpha: int, b: int) -> Fraction:
    """p_{k,a}(b) = [b = k + a mod 2] / (4^k k!) * prod_{0<m<=k, m = k+a mod 2} (b^2 - m^2)."""
    parity = (k + alpha) % 2
    if b % 2 != parity:
        return Fraction(0)
    num = prod(b * b - m * m for m in range(1, k + 1) if m % 2 == parity)
    return Fraction(num, 4**k * factorial(k))


def p_by_summation(k: int, alpha: int, b: int) -> Fraction:
    """The literal recursion p_{k+1,a}(b) = sum_{m=0}^{b} m p_{k,a}(m) from the parity indicators."""
    if k == 0:
        return Fraction(1 if b % 2 == alpha else 0)
    return sum((m * p_by_summation(k - 1, alpha, m) for m in range(b + 1)), Fraction(0))


def summation_agreement(kmax: int, bmax: int) -> dict[tuple[int, int], bool]:
    """For each (k, a) with k <= kmax: does the closed form match the literal recursion on 0..bmax?"""
    return {
        (k, alpha): all(p_eval(k, alpha, b) == p_by_summation(k, alpha, b) for b in range(bmax + 1))
        for k in range(kmax + 1)
        for alpha in (0, 1)
    }


Index = tuple[tuple[int, int], ...]


class QuasiPolynomial:
    """sum_{(k,a)} c * prod_i p_{k_i,a_i}(P_i)."""

    def __init__(self, s: int, terms: Mapping[Index, Fraction | int]):
        self.s = s
        clean = {}
        for key, c in terms.items():
            if len(key) != s:
                raise ArityMismatch(f"index {key} has length {len(key)}, expected {s}")
            if c:
                clean[tuple(tuple(x) for x in key)] = Fraction(c)
        self.terms: dict[Index, Fraction] = clean

    def __call__(self, *point: int) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence[int]) -> Fraction:
        if len(point) != self.s:
            raise ArityMismatch(f"expected {self.s} arguments, got {len(point)}")
        total = Fraction(0)
        for key, c in self.terms.items():
            value = c
            for (k, alpha), b in zip(key, point):
                value *= p_eval(k, alpha, b)
                if not value:
                    break
            total += value
        return total

    def max_total_k(self) -> int:
        return max((sum(k for k, _ in key) for key in self.terms), default=0)

    def max_total_degree(self) -> int:
        return max((sum(PBasisElement(k, a).degree for k, a in key) for key in self.terms), default=0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuasiPolynomial) and self.s == other.s and self.terms == other.terms

    def __repr__(self) -> str:
        return f"QuasiPolynomial({self.s}, {self.terms})"

    def to_json_obj(self) -> list[dict]:
        return [
            {"k": [k for k, _ in key], "alpha": [a for _, a in key], "c": str(c)}
            for key, c in sorted(self.terms.items())
        ]


def n_g1_polynomial(g: int, brow: Sequence[int]) -> QuasiPolynomial:
    """N_{g,1} on the p-basis from the one-backbone coefficients.

    N_{g,1}(P) = sum_i b_i / (2^(4g+2i-1) (4g+2i-1)!) prod_{k=1}^{2g+i-1} (P^2 - 4k^2) for even P,
    and the product is (2n)! 16^n p_{2n,0} with n = 2g+i-1.
    """
    if len(brow) != g:
        raise ValueError(f"row for genus {g} must have {g} entries, got {len(brow)}")
    terms = {}
    for i, b in enumerate(brow):
        n = 2 * g + i - 1
        terms[((2 * n, 0),)] = Fraction(b * 2 ** (4 * g + 2 * i - 3), 4 * g + 2 * i - 1)
    return QuasiPolynomial(1, terms)


def n_g1_direct(g: int, brow: Sequence[int], p: int) -> Fraction:
    """The same value from the product formula, without the basis."""
    if p % 2:
        return Fraction(0)
    total = Fraction(0)
    for i, b in enumerate(brow):
        n = 4 * g + 2 * i - 1
        total += Fraction(b, 2**n * factorial(n)) * prod(p * p - 4 * k * k for k in range(1, 2 * g + i))
    return total


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Least-structure exact elimination; raises if rank-deficient or inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((i for i in range(row, len(aug)) if aug[i][col]), None)
        if pivot is None:
            raise UnderdeterminedSystem(f"no pivot for unknown {col}; add samples")
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for i in range(len(aug)):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, len(aug)):
        if aug[i][n]:
            raise InconsistentSamples(f"residual {aug[i][n]} on an extra sample")
    return [aug[i][n] for i in range(n)]


def _degree_vectors(s: int, bound: int) -> Iterator[tuple[int, ...]]:
    for r in product(range(bound + 1), repeat=s):
        if sum(r) <= bound:
            yield r


def degree_bound(g: int, s: int) -> int:
    return 3 * g - 3 + s


def fit_quasipolynomial(g: int, s: int, samples: Mapping[tuple[int, ...], Fraction | int]) -> QuasiPolynomial:
    """Exact fit on the basis prod p_{2r_i, a_i}, sum r_i <= 3g-3+s, one solve per parity coset."""
    bound = degree_bound(g, s)
    cosets: dict[tuple[int, ...], list[tuple[tuple[int, ...], Fraction]]] = {}
    for point, value in samples.items():
        if len(point) != s:
            raise ArityMismatch(f"sample {point} has length {len(point)}, expected {s}")
        cosets.setdefault(tuple(b % 2 for b in point), []).append((tuple(point), Fraction(value)))
    terms: dict[Index, Fraction] = {}
    monomials = list(_degree_vectors(s, bound))
    for parity in product((0, 1), repeat=s):
        points = cosets.get(parity)
        if not points:
            raise UnderdeterminedSystem(f"no samples on parity coset {parity}")
        keys = [tuple((2 * r, a) for r, a in zip(rs, parity)) for rs in monomials]
        rows = [[prod((p_eval(k, a, b) for (k, a), b in zip(key, pt)), start=Fraction(1)) for key in keys] for pt, _ in points]
        values = _solve_exact(rows, [v for _, v in points])
        for key, c in zip(keys, values):
            if c:
                terms[key] = c
    return QuasiPolynomial(s, terms)


def sample_grid(g: int, s: int) -> list[tuple[int, ...]]:
    """Smallest positive points determining the fit: P_i = 2 r_i + 1 or 2 r_i + 2 on each coset."""
    bound = degree_bound(g, s)
    points = []
    for parity in product((0, 1), repeat=s):
        for rs in _degree_vectors(s, bound):
            points.append(tuple(2 * r + (1 if a else 2) for r, a in zip(rs, parity)))
    return points


def lattice_samples(g: int, s: int, extra: Iterable[tuple[int, ...]] = ()) -> dict[tuple[int, ...], Fraction]:
    from .oracle import lattice_count

    return {p: lattice_count(g, s, p) for p in [*sample_grid(g, s), *extra]}


@lru_cache(maxsize=None)
def fitted_volume(g: int, s: int) -> QuasiPolynomial:
    """N_{g,s} fitted to lattice counts, with one extra point per coset as a consistency check."""
    extra = [tuple(b + 2 for b in p) for p in sample_grid(g, s)[:: max(1, len(sample_grid(g, s)) // 2 ** s)]]
    return fit_quasipolynomial(g, s, lattice_samples(g, s, extra))


def _vectors(s: int, pmax: int, start: int = 0) -> Iterator[tuple[int, ...]]:
    return product(range(start, pmax + 1), repeat=s)


def _replace(point: Sequence[int], j: int, value: int) -> tuple[int, ...]:
    out = list(point)
    out[j] = value
    return tuple(out)


def _check_arity(small: QuasiPolynomial, big: QuasiPolynomial) -> None:
    if big.s != small.s + 1:
        raise ArityMismatch(f"expected arities s and s+1, got {small.s} and {big.s}")


def _shifted_sum(small: QuasiPolynomial, point: Sequence[int], top_offset: int, parity_offset: int) -> Fraction:
    """sum_j sum_k k N(P)|_{P_j=k}, k from 1 to P_j + top_offset with k = P_j + parity_offset mod 2."""
    total = Fraction(0)
    for j, pj in enumerate(point):
        for k in range(1, pj + top_offset + 1):
            if (k - pj - parity_offset) % 2 == 0:
                total += k * small.evaluate(_replace(point, j, k))
    return total


def string_failures(small: QuasiPolynomial, big: QuasiPolynomial, pmax: int) -> list[tuple[int, ...]]:
    """Points with entries in 0..pmax where N_{s+1}(1, P) != sum_j sum_k k N_s(P)|_{P_j=k}.

    k runs over 1..P_j with k of the parity opposite to P_j, the only values
    for which the total perimeter on the right matches the left.
    """
    _check_arity(small, big)
    return [p for p in _vectors(small.s, pmax) if big.evaluate((1, *p)) != _shifted_sum(small, p, 0, 1)]


def string_check(small: QuasiPolynomial, big: QuasiPolynomial, pmax: int) -> bool:
    return not string_failures(small, big, pmax)


def surface_euler_characteristic(g: int, s: int) -> int:
    """2 - 2g - s, the coefficient appearing in the divisor equation."""
    return 2 - 2 * g - s


def divisor_failures(
    small: QuasiPolynomial, big: QuasiPolynomial, pmax: int, chi: Fraction | int
) -> list[tuple[int, ...]]:
    """Points where N_{s+1}(0, P) != sum_j sum_k k N_s|_{P_j=k} + (|P|/2 + chi) N_s(P).

    k runs over 1..P_j - 1 with k of the parity of P_j.
    """
    _check_arity(small, big)
    bad = []
    for point in _vectors(small.s, pmax):
        rhs = _shifted_sum(small, point, -1, 0) + (Fraction(sum(point), 2) + chi) * small.evaluate(point)
        if big.evaluate((0, *point)) != rhs:
            bad.append(point)
    return bad


def divisor_check(small: QuasiPolynomial, big: QuasiPolynomial, pmax: int, chi: Fraction | int) -> bool:
    return not divisor_failures(small, big, pmax, chi)


def euler_char(g: int, s: int) -> Fraction:
    """chi(M_{g,s}) = N_{g,s}(0,...,0); closed form in genus zero."""
    if 2 * g - 2 + s <= 0 or s < 1:
        raise ValueError(f"(g, s) = ({g}, {s}) is not stable")
    if g == 0:
        return Fraction((-1) ** (s - 3) * factorial(s - 3))
    if s == 1:
        from .hz import hz_table

        return n_g1_polynomial(g, hz_table(g)[g]).evaluate((0,))
    return fitted_volume(g, s).evaluate((0,) * s)


@dataclass(frozen=True)
class PrepotentialConstants:
    """N_{0,s}(0) for s = 3..smax."""

    values: tuple[Fraction, ...]

    @classmethod
    def up_to(cls, smax: int) -> PrepotentialConstants:
        return cls(tuple(euler_char(0, s) for s in range(3, smax + 1)))


def hat_p(k: int, alpha: int) -> tuple[Fraction, tuple[int, int]]:
    """Image of p_{k,a} in the s-basis: (coefficient, (r, beta))."""
    two = Fraction(2)
    if k % 2 == 0:
        r = k // 2
        if alpha == 0:
            return two ** (1 - 2 * r) * (2 * r + 1), (r, 0)
        return two ** (-2 * r) * (2 * r + 1), (r, 1)
    if alpha == 0:
        r = (k + 1) // 2
        return two ** (2 - 2 * r) * 2 * r * (2 * r + 1), (r, 1)
    r = (k - 1) // 2
    return two ** (-2 * r - 1), (r, 0)


def c_to_bhat(s: int, c: Mapping[Index, Fraction | int]) -> dict[tuple[tuple[int, int], ...], Fraction]:
    """Coefficients on products of s_{r,beta}, slot by slot."""
    out: dict[tuple[tuple[int, int], ...], Fraction] = {}
    for key, value in c.items():
        if len(key) != s:
            raise ArityMismatch(f"index {key} has length {len(key)}, expected {s}")
        coeff = Fraction(value)
        image = []
        for k, alpha in key:
            factor, rb = hat_p(k, alpha)
            coeff *= factor
            image.append(rb)
        out[tuple(image)] = out.get(tuple(image), Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v}


def bhat_of_means(expansion: SExpansion, genus: int) -> dict[tuple[tuple[int, int], ...], Fraction]:
    """b-hat table of a Gaussian mean; genus-zero diagram sums carry half the mean."""
    scale = 2 if genus == 0 else 1
    return {k: Fraction(v) * scale for k, v in expansion.terms.items() if v}


def volume_table_csv(g: int, s: int, qp: QuasiPolynomial, pmax: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["g", "s", *(f"P{i + 1}" for i in range(s)), "N_num", "N_den"])
    for point in _vectors(s, pmax):
        value = qp.evaluate(point)
        writer.writerow([g, s, *point, value.numerator, value.denominator])
    return buf.getvalue()


def volume_json(g: int, s: int, qp: QuasiPolynomial) -> str:
    return json.dumps({"g": g, "s": s, "terms": qp.to_json_obj()}, sort_keys=True)
