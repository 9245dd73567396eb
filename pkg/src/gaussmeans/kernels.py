"""The s-basis, the homomorphism F, and residue checks of the product rules.

Everything is a rational function of ``z = exp(lambda)``; ``d/dlambda`` is
``z d/dz`` and ``dx = (z - 1/z) dlambda``.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import MPoly, MRational, Poly, RationalFunction, TruncatedSeries, _rational_poly_gcd, laurent_expansion, residue
from .diagrams import Color, DiagramPair, FormalSum, Sort
from .recursion import coproduct_column, product_columns

Z = RationalFunction.z()
V = Z - 1 / Z  # e^lambda - e^-lambda
U = Z + 1 / Z  # e^lambda + e^-lambda


class ArityMismatch(ValueError):
    pass


class NonIntegerCoefficient(ArithmeticError):
    pass


def s_basis(k: int, beta: int) -> RationalFunction:
    """(z + 1/z)^beta / (z - 1/z)^(2k+3), reduced."""
    if beta not in (0, 1) or k < 0:
        raise ValueError(f"bad s-basis index ({k}, {beta})")
    z2m1 = Poly([Fraction(-1), Fraction(0), Fraction(1)])
    num = Poly.monomial(2 * k + 3 - beta) * (Poly([Fraction(1), Fraction(0), Fraction(1)]) ** beta)
    return RationalFunction(num, z2m1 ** (2 * k + 3), reduced=True)


def sort_function(sort: Sort) -> RationalFunction:
    return s_basis(sort.k, sort.beta)


def distinct_permutations(items: Sequence) -> Iterator[tuple]:
    counts = Counter(items)
    keys = sorted(counts)
    n = len(items)

    def rec(prefix: list) -> Iterator[tuple]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                prefix.append(key)
                yield from rec(prefix)
                prefix.pop()
                counts[key] += 1

    return rec([])


class SExpansion:
    """Linear combination of products of s-basis functions, one per slot.

    Keys are tuples ``((k_1, beta_1), ..., (k_s, beta_s))``.  Products of
    s-basis functions in distinct variables are linearly independent, so
    the key map is canonical.
    """

    def __init__(self, s: int, terms: Mapping[tuple, Fraction | int]):
        self.s = s
        self.terms = {key: c for key, c in terms.items() if c}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SExpansion) and self.s == other.s and self.terms == other.terms

    def __add__(self, other: SExpansion) -> SExpansion:
        out = Counter(self.terms)
        out.update(other.terms)
        return SExpansion(self.s, out)

    def permuted(self, perm: Sequence[int]) -> SExpansion:
        """Move slot ``i`` to slot ``perm[i]``."""
        out = {}
        for key, c in self.terms.items():
            new = [None] * self.s
            for i, kb in enumerate(key):
                new[perm[i]] = kb
            out[tuple(new)] = c
        return SExpansion(self.s, out)

    def evaluate(self, zs: Sequence[Fraction]) -> Fraction:
        if len(zs) != self.s:
            raise ArityMismatch(f"expected {self.s} points, got {len(zs)}")
        cache: dict[tuple[int, int, int], Fraction] = {}
        total = Fraction(0)
        for key, c in self.terms.items():
            t = Fraction(c)
            for i, (k, beta) in enumerate(key):
                if (i, k, beta) not in cache:
                    cache[i, k, beta] = s_basis(k, beta)(Fraction(zs[i]))
                t *= cache[i, k, beta]
            total += t
        return total

    def to_mrational(self) -> MRational:
        """One fraction over the common denominator prod (z_i^2 - 1)^(2K_i+3)."""
        kmax = [0] * self.s
        for key in self.terms:
            for i, (k, _) in enumerate(key):
                kmax[i] = max(kmax[i], k)
        z2m1 = Poly([Fraction(-1), Fraction(0), Fraction(1)])
        z2p1 = Poly([Fraction(1), Fraction(0), Fraction(1)])
        num = MPoly(self.s)
        slot_cache: dict[tuple[int, int, int], MPoly] = {}
        for key, c in self.terms.items():
            t = MPoly.const(self.s, c)
            for i, (k, beta) in enumerate(key):
                if (i, k, beta) not in slot_cache:
                    p = Poly.monomial(2 * k + 3 - beta) * z2p1**beta * z2m1 ** (2 * (kmax[i] - k))
                    slot_cache[i, k, beta] = MPoly.from_univariate(self.s, i, p)
                t = t * slot_cache[i, k, beta]
            num = num + t
        den = MPoly.const(self.s, 1)
        for i in range(self.s):
            den = den * MPoly.from_univariate(self.s, i, z2m1 ** (2 * kmax[i] + 3))
        return MRational(num, den)

    def __repr__(self) -> str:
        return f"SExpansion(s={self.s}, {self.terms!r})"


def hom_F(total: FormalSum[DiagramPair], s: int) -> SExpansion:
    """Sum over distinct assignments of the s variables to the columns."""
    out: Counter = Counter()
    for pair, c in total.items():
        if pair.length() != s:
            raise ArityMismatch(f"{pair!r} has {pair.length()} columns, expected {s}")
        labels = [(sort.k, sort.beta) for sort in pair.sorts()]
        for arrangement in distinct_permutations(labels):
            out[arrangement] += c
    return SExpansion(s, out)


def nonstable_means() -> tuple[RationalFunction, MRational]:
    w10 = 1 / Z
    z1, z2 = MPoly.var(2, 0), MPoly.var(2, 1)
    den = MPoly.const(2, 1)
    for zi in (z1, z2):
        for zj in (z1, z2):
            # z_i - 1/z_j with 1/z_j as a negative exponent
            inv = MPoly(2, {tuple(-e for e in next(iter(zj.terms))): 1})
            den = den * (zi - inv)
    return w10, MRational(MPoly.const(2, 1), den)


def _lift(p: Poly) -> Poly:
    """Embed a rational polynomial into polynomials over Q(p1)."""
    return Poly(RationalFunction(c) for c in p.c)


def _dx_factor() -> RationalFunction:
    # dp = p dx / (p - 1/p)
    return Z / V


def _branch_laurent(f: RationalFunction, a: int) -> list[Fraction]:
    """Principal-part coefficients [c_-1, c_-2, ...] of f at the point a."""
    series = laurent_expansion(f.num, f.den, Fraction(a), 0)
    out = []
    n = -1
    while n >= series.val:
        out.append(series.coeff(n))
        n -= 1
    return out


def product_rule_residues(k1: int, b1: int, k2: int, b2: int) -> tuple[RationalFunction, RationalFunction]:
    """The product integral as a dx_1 coefficient, computed two ways.

    The integrand reduces to ``s1(q) s2(q) / (q (p1 - q)) dq`` times ``dp1``.
    Returns (sum of residues at the branch points q = +-1,
    minus the residue at the diagonal pole q = p1).
    """
    f = s_basis(k1, b1) * s_basis(k2, b2) / Z
    branch = RationalFunction(0)
    for a in (1, -1):
        # 1/(p1 - q) = sum_i t^i / (p1 - a)^(i+1) with q = a + t
        for i, c in enumerate(_branch_laurent(f, a)):
            if c:
                branch = branch + c / (Z - a) ** (i + 1)
    num = _lift(f.num)
    den = _lift(f.den) * Poly([Z, RationalFunction(-1)])
    diagonal = -residue((num, den), Z)
    conv = _dx_factor()
    return branch * conv, diagonal * conv


def product_rule_expected(k1: int, b1: int, k2: int, b2: int) -> RationalFunction:
    a = Sort(Color(b1), k1 + 1)
    b = Sort(Color(b2), k2 + 1)
    total = RationalFunction(0)
    for sort, c in product_columns(a, b).items():
        total = total + c * sort_function(sort)
    return total


def verify_product_rule(k1: int, beta1: int, k2: int, beta2: int) -> bool:
    expected = product_rule_expected(k1, beta1, k2, beta2)
    branch, diagonal = product_rule_residues(k1, beta1, k2, beta2)
    return branch == expected and diagonal == expected


class _Bivariate:
    """Accumulates c * A(x) B(y) / ((x - y)^i (x y - 1)^j) and decides zero."""

    def __init__(self) -> None:
        self.terms: list[tuple[Fraction, RationalFunction, RationalFunction, int, int]] = []

    def add(self, c, a: RationalFunction, b: RationalFunction, i: int = 0, j: int = 0) -> None:
        if c and a and b:
            self.terms.append((Fraction(c), a, b, i, j))

    def extend(self, other: _Bivariate, sign: int = 1) -> None:
        for c, a, b, i, j in other.terms:
            self.terms.append((sign * c, a, b, i, j))

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        imax = max(t[3] for t in self.terms)
        jmax = max(t[4] for t in self.terms)
        dx = _poly_lcm(t[1].den for t in self.terms)
        dy = _poly_lcm(t[2].den for t in self.terms)
        x, y = MPoly.var(2, 0), MPoly.var(2, 1)
        diff, mixed = x - y, x * y - 1
        total = MPoly(2)
        grouped: dict[tuple[int, int], MPoly] = {}
        for c, a, b, i, j in self.terms:
            pa = MPoly.from_univariate(2, 0, a.num * dx.exact_div(a.den))
            pb = MPoly.from_univariate(2, 1, b.num * dy.exact_div(b.den))
            key = (imax - i, jmax - j)
            grouped[key] = grouped.get(key, MPoly(2)) + pa * pb * c
        for (i, j), part in grouped.items():
            total = total + part * diff**i * mixed**j
        return not total


def _poly_lcm(polys: Iterable[Poly]) -> Poly:
    acc = Poly([Fraction(1)])
    for p in polys:
        g = _rational_poly_gcd(acc, p)
        acc = (acc * p).exact_div(g)
    return acc


def _coproduct_sides(k: int, beta: int) -> tuple[_Bivariate, _Bivariate]:
    """dp1 dp coefficient of the coproduct integral, computed two ways.

    The integrand is h(q) / (p1 - q) * [1/(p - q)^2 + 1/(1 - p q)^2] dq with
    h = s_{k,beta} / (q - 1/q).  The second term is the Bergman kernel at the
    conjugate point taken with the orientation that keeps the result odd
    under p -> 1/p.  Variables: x = p1, y = p.
    """
    h = s_basis(k, beta) / V
    one = RationalFunction(1)
    branch = _Bivariate()
    for a in (1, -1):
        principal = _branch_laurent(h, a)
        n = len(principal)
        # r(a+t) = sum_i t^i (x-a)^-(i+1) * sum_l (l+1) t^l [(y-a)^-(l+2) + y^l (1-a y)^-(l+2)]
        for i in range(n):
            b_part = RationalFunction(0)
            for l in range(n - i):
                c = principal[i + l]
                if c:
                    b_part = b_part + c * (l + 1) * (
                        1 / (Z - a) ** (l + 2) + Z**l / (1 - a * Z) ** (l + 2)
                    )
            branch.add(1, 1 / (Z - a) ** (i + 1), b_part)
    hp = h.derivative()
    h_inv, hp_inv = h.compose_inverse(), hp.compose_inverse()
    poles = _Bivariate()
    # residue at q = p1
    poles.add(-1, h, one, 2, 0)
    poles.add(-1, h, one, 0, 2)
    # residue at q = p (double pole of 1/(p - q)^2)
    poles.add(1, one, hp, 1, 0)
    poles.add(1, one, h, 2, 0)
    # residue at q = 1/p
    poles.add(1, one, hp_inv / Z, 0, 1)
    poles.add(1, one, h_inv, 0, 2)
    diagonal = _Bivariate()
    diagonal.extend(poles, -1)
    return branch, diagonal


def coproduct_rule_expected(k: int, beta: int) -> _Bivariate:
    conv = _dx_factor()
    out = _Bivariate()
    for (one, marked), c in coproduct_column(Sort(Color(beta), k + 1)).items():
        # compare in dp1 dp units: divide the dx1 dxp form by the conversions
        out.add(c, sort_function(one) / conv, sort_function(marked) / conv)
    return out


def verify_coproduct_rule(k: int, beta: int) -> bool:
    expected = coproduct_rule_expected(k, beta)
    branch, poles = _coproduct_sides(k, beta)
    ok = True
    for side in (branch, poles):
        diff = _Bivariate()
        diff.extend(side)
        diff.extend(expected, -1)
        ok = ok and diff.is_zero()
    return ok


def catalan_inverse_series(order: int) -> TruncatedSeries:
    """y = 1/z as a series in w = 1/x, from y = w (1 + y^2)."""
    w = TruncatedSeries.variable(order)
    y = TruncatedSeries([Fraction(0)], order)
    for _ in range(order):
        y = w * (y * y + 1)
    return y


def series_in_w(f: RationalFunction, order: int) -> TruncatedSeries:
    """Expansion of f(z) in powers of w = 1/x, x = z + 1/z, on the branch z ~ x."""
    g = f.compose_inverse()
    y = catalan_inverse_series(order)
    return g.num(y) / g.den(y)


def moment_series(g: int, kmax: int) -> list[Fraction]:
    """Coefficients of w^(2k+1) for 2k <= kmax in the genus-g one-point mean."""
    from .recursion import compute_w

    order = kmax + 2
    if g == 0:
        f = nonstable_means()[0]
    else:
        f = RationalFunction(0)
        for key, c in hom_F(compute_w(g, 1), 1).terms.items():
            (k, beta), = key
            f = f + c * s_basis(k, beta)
    series = series_in_w(f, order)
    return [series.coeff(2 * k + 1) for k in range(kmax // 2 + 1)]


def moment_coefficient(total: FormalSum[DiagramPair], valences: Sequence[int]) -> Fraction:
    """Coefficient of prod_i x_i^-(k_i+1) in hom_F(total), the connected mean of prod tr H^{k_i}."""
    order = max(valences) + 2
    series: dict[tuple[int, int], TruncatedSeries] = {}
    out = Fraction(0)
    for key, c in hom_F(total, len(valences)).terms.items():
        t = Fraction(c)
        for (k, beta), valence in zip(key, valences):
            if (k, beta) not in series:
                series[k, beta] = series_in_w(s_basis(k, beta), order)
            t *= series[k, beta].coeff(valence + 1)
        out += t
    return out


def s_decompose(f: RationalFunction) -> dict[tuple[int, int], Fraction]:
    """Coefficients of f on the s-basis; ValueError if f is outside the span."""
    if not f:
        return {}
    z2m1 = Poly([Fraction(-1), Fraction(0), Fraction(1)])
    rest, n = f.den, 0
    while rest.degree > 0:
        q, r = rest.divmod(z2m1)
        if r:
            break
        rest, n = q, n + 1
    if n % 2 == 0:
        raise ValueError("function is not in the span of the s-basis")
    h = (f * V**n).as_laurent()
    even = {e: c for e, c in h.items() if e % 2 == 0}
    odd = {e: c for e, c in h.items() if e % 2}
    out: dict[tuple[int, int], Fraction] = {}
    v2 = (V * V).as_laurent()
    for beta, part in ((0, even), (1, odd)):
        poly = RationalFunction.laurent(part) if part else RationalFunction(0)
        if beta:
            poly = poly / U
        rem = poly.as_laurent() if poly else {}
        while rem:
            top = max(rem)
            if top % 2 or top < 0:
                raise ValueError("function is not in the span of the s-basis")
            m = top // 2
            c = rem[top]
            k = (n - 3 - 2 * m) // 2
            if n - 3 - 2 * m < 0:
                raise ValueError("function is not in the span of the s-basis")
            out[k, beta] = c
            sub = RationalFunction.laurent(v2) ** m * c
            rem = (RationalFunction.laurent(rem) - sub).as_laurent() if rem else {}
    return out


def _integral(values: Mapping[tuple[int, int], Fraction], what: str) -> dict[tuple[int, int], int]:
    out = {}
    for key, c in values.items():
        if Fraction(c).denominator != 1:
            raise NonIntegerCoefficient(f"{what}: coefficient {c} at {key} is not an integer")
        out[key] = int(c)
    return out


def _d_lambda(plain: dict[int, int], odd: dict[int, int]) -> tuple[dict[int, int], dict[int, int]]:
    """d/dlambda of sum a_n w^n + u * sum h_n w^n with w = 1/v, using u^2 = v^2 + 4."""
    new_plain: dict[int, int] = {}
    new_odd: dict[int, int] = {}
    for n, a in plain.items():
        if n:
            new_odd[n + 1] = new_odd.get(n + 1, 0) - n * a
    for n, h in odd.items():
        if n != 1:
            new_plain[n - 1] = new_plain.get(n - 1, 0) + (1 - n) * h
        if n:
            new_plain[n + 1] = new_plain.get(n + 1, 0) - 4 * n * h
    return new_plain, new_odd


def _time_coefficients(plain: dict[int, int], odd: dict[int, int], d: int, beta: int) -> list[int]:
    for _ in range(2 * d + 1):
        plain, odd = _d_lambda(plain, odd)
    keep, drop = (odd, plain) if beta else (plain, odd)
    if any(drop.values()) or any(n % 2 and c for n, c in keep.items()):
        raise ValueError("time expansion left the expected parity sector")
    # multiplying by w turns w^(2j) into s_{j-1, beta}
    return [keep.get(2 * j, 0) for j in range(1, d + 2)]


@lru_cache(maxsize=None)
def time_expansion(d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Integer coefficients (q_{j,d}, q~_{j,d}) for j = 1..d+1.

    ``t- + t+ = sum_j q_{j,d} s_{j-1,0}`` and ``t- - t+ = sum_j q~_{j,d} s_{j-1,1}``.
    Works in the ring generated by w = 1/v and u = e^l + e^-l; here
    2/(e^{2l} - 1) = u w - 1 and 2/v = 2 w.
    """
    q = _time_coefficients({0: -1}, {1: 1}, d, 0)
    qt = _time_coefficients({1: 2}, {}, d, 1)
    return tuple(q), tuple(qt)


def time_expansion_rational(d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Same coefficients as :func:`time_expansion`, by differentiating in Q(z)."""
    sym = 2 / (Z * Z - 1)
    asym = 2 / V
    for _ in range(2 * d + 1):
        sym, asym = sym.theta(), asym.theta()
    plus = _integral(s_decompose(sym / V), "symmetric time")
    minus = _integral(s_decompose(asym / V), "antisymmetric time")
    if any(b != 0 for _, b in plus) or any(b != 1 for _, b in minus):
        raise ValueError("time expansion left the expected parity sector")
    q = tuple(plus.get((j - 1, 0), 0) for j in range(1, d + 2))
    qt = tuple(minus.get((j - 1, 1), 0) for j in range(1, d + 2))
    return q, qt


def shift_identity_holds(m: int) -> bool:
    """(d^2/dlambda^2 - m^2) v^-m == 4 m (m+1) v^-(m+2)."""
    f = V ** (-m)
    return f.theta().theta() - m * m * f == 4 * m * (m + 1) * V ** (-m - 2)
