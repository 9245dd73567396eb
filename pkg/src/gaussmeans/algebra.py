"""Exact univariate and multivariate algebra over the rationals.

``Poly`` works over any field whose elements support ``+ - * /`` and
truthiness as a zero test, so the same code handles polynomials over
``Fraction`` and over ``RationalFunction`` (a parametric field such as
Q(p)).  ``RationalFunction`` is Q(z) with reduced numerator/denominator.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from typing import Any, Iterable, Mapping, Sequence


def _zero_like(c: Any) -> Any:
    return c - c


class Poly:
    """Dense univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.c = c

    @classmethod
    def x(cls) -> Poly:
        return cls([Fraction(0), Fraction(1)])

    @classmethod
    def const(cls, a: Any) -> Poly:
        return cls([a])

    @classmethod
    def monomial(cls, n: int, a: Any = Fraction(1)) -> Poly:
        return cls([_zero_like(a)] * n + [a])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def lc(self) -> Any:
        return self.c[-1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            other = Poly([other]) if other is not None else None
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(tuple(self.c))

    def _coerce(self, other: Any) -> Poly:
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other: Any) -> Poly:
        other = self._coerce(other)
        zero = 0
        return Poly(a + b for a, b in zip_longest(self.c, other.c, fillvalue=zero))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(-a for a in self.c)

    def __sub__(self, other: Any) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> Poly:
        if not isinstance(other, Poly):
            return Poly(a * other for a in self.c)
        if not self.c or not other.c:
            return Poly()
        out = [None] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = _zero_like(self.c[0] * other.c[0])
        return Poly(zero if v is None else v for v in out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        result = Poly([Fraction(1)])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = len(rem) - len(other.c)
        if dq < 0:
            return Poly(), Poly(rem)
        quot = [None] * (dq + 1)
        lead = other.c[-1]
        for i in range(dq, -1, -1):
            coef = rem[i + len(other.c) - 1] / lead
            quot[i] = coef
            if coef:
                for j, b in enumerate(other.c):
                    rem[i + j] = rem[i + j] - coef * b
        return Poly(quot), Poly(rem[: len(other.c) - 1])

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> Poly:
        lead = self.c[-1]
        return Poly(a / lead for a in self.c)

    def derivative(self) -> Poly:
        return Poly(a * i for i, a in enumerate(self.c) if i)

    def __call__(self, x: Any) -> Any:
        if not self.c:
            return _zero_like(x) if not isinstance(x, (int, Fraction)) else Fraction(0)
        if isinstance(x, RationalFunction):
            return _eval_at_rational_function(self, x)
        acc = self.c[-1]
        for a in reversed(self.c[:-1]):
            acc = acc * x + a
        return acc

    def shift(self, a: Any) -> Poly:
        """Coefficients of ``p(a + t)`` as a polynomial in ``t``."""
        if not self.c:
            return Poly()
        if isinstance(a, int):
            a = Fraction(a)
        one = a / a if a else Fraction(1)
        lin = Poly([a, one])
        acc = Poly([self.c[-1]])
        for coef in reversed(self.c[:-1]):
            acc = acc * lin + coef
        return acc

    def valuation(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        raise ValueError("zero polynomial has no valuation")

    def content_primitive(self) -> tuple[Fraction, Poly]:
        """Split a rational polynomial into content and integer primitive part."""
        from math import gcd, lcm

        den = 1
        for a in self.c:
            den = lcm(den, Fraction(a).denominator)
        ints = [int(Fraction(a) * den) for a in self.c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g == 0:
            return Fraction(0), Poly()
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), Poly(Fraction(v // g) for v in ints)

    def __repr__(self) -> str:
        return f"Poly({self.c!r})"


def _eval_at_rational_function(p: Poly, x: RationalFunction) -> RationalFunction:
    # Horner on unreduced numerator/denominator pairs, reduced once at the end
    def parts(c: Any) -> tuple[Poly, Poly]:
        if isinstance(c, RationalFunction):
            return c.num, c.den
        return Poly([Fraction(c)]), Poly([Fraction(1)])

    num, den = parts(p.c[-1])
    for coef in reversed(p.c[:-1]):
        cn, cd = parts(coef)
        if cd.degree == 0 and cd.c[0] == 1:
            num, den = num * x.num + cn * den * x.den, den * x.den
        else:
            num, den = num * x.num * cd + cn * den * x.den, den * x.den * cd
    return RationalFunction(num, den)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def _rational_poly_gcd(a: Poly, b: Poly) -> Poly:
    # primitive remainder sequence keeps Fraction sizes small over Q
    _, a = a.content_primitive()
    _, b = b.content_primitive()
    while b:
        r = a % b
        if r:
            _, r = r.content_primitive()
        a, b = b, r
    return a.monic() if a else a


class RationalFunction:
    """Element of Q(z), kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Any, den: Poly | Any = None, *, reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly([Fraction(num)])
        if den is None:
            den = Poly([Fraction(1)])
        elif not isinstance(den, Poly):
            den = Poly([Fraction(den)])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            if not num:
                den = Poly([Fraction(1)])
            else:
                g = _rational_poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                lead = den.lc()
                if lead != 1:
                    num, den = num * (1 / Fraction(lead)), den * (1 / Fraction(lead))
        self.num, self.den = num, den

    @classmethod
    def z(cls) -> RationalFunction:
        return cls(Poly.x(), reduced=True)

    @classmethod
    def laurent(cls, coeffs: Mapping[int, Any]) -> RationalFunction:
        """Build sum of c * z**e, with negative exponents allowed."""
        if not coeffs:
            return cls(Poly())
        low = min(min(coeffs), 0)
        num = Poly([Fraction(coeffs.get(e + low, 0)) for e in range(max(coeffs) - low + 1)])
        return cls(num, Poly.monomial(-low))

    def _coerce(self, other: Any) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(Poly([Fraction(other)]), reduced=True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: Any) -> RationalFunction:
        other = self._coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if self.den.degree == 0 or other.den.degree == 0:
            g = Poly([Fraction(1)])
        else:
            g = _rational_poly_gcd(self.den, other.den)
        d1, d2 = self.den.exact_div(g), other.den.exact_div(g)
        num = self.num * d2 + other.num * d1
        den = d1 * other.den
        if not num:
            return RationalFunction(Poly(), reduced=True)
        # with coprime monic denominators the sum is already reduced
        return RationalFunction(num, den, reduced=g.degree <= 0)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other: Any) -> RationalFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> RationalFunction:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> RationalFunction:
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num * Fraction(other), self.den, reduced=bool(other))
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other: Any) -> RationalFunction:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> RationalFunction:
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num**n, self.den**n, reduced=True)

    def __call__(self, x: Any) -> Any:
        d = self.den(x)
        if isinstance(d, (int, Fraction)) and d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def derivative(self) -> RationalFunction:
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den
        )

    def theta(self) -> RationalFunction:
        """The Euler operator z d/dz, i.e. d/dlambda for z = exp(lambda)."""
        return RationalFunction.z() * self.derivative()

    def compose_inverse(self) -> RationalFunction:
        """f(1/z)."""
        n, d = self.num.degree, self.den.degree
        top = max(n, d, 0)
        num = Poly(reversed(self.num.c + [Fraction(0)] * (top - n)))
        den = Poly(reversed(self.den.c + [Fraction(0)] * (top - d)))
        return RationalFunction(num, den)

    def as_laurent(self) -> dict[int, Fraction]:
        """Exponent map when the denominator is a monomial; raises otherwise."""
        v = self.den.degree
        if self.den != Poly.monomial(v):
            raise ValueError("not a Laurent polynomial")
        return {i - v: c for i, c in enumerate(self.num.c) if c}

    def __repr__(self) -> str:
        return f"RationalFunction({self.num.c!r} / {self.den.c!r})"


class NotAPole(ValueError):
    """Residue requested at a point where the function is regular."""


class TruncatedSeries:
    """Laurent series ``sum c[i] t^(val+i)`` known modulo ``t^prec``."""

    __slots__ = ("val", "c", "prec")

    def __init__(self, coeffs: Sequence[Any], prec: int, val: int = 0):
        c = list(coeffs)[: max(prec - val, 0)]
        self.val, self.c, self.prec = val, c, prec

    @classmethod
    def variable(cls, prec: int) -> TruncatedSeries:
        return cls([Fraction(0), Fraction(1)], prec)

    def coeff(self, n: int) -> Any:
        if n >= self.prec:
            raise ValueError(f"coefficient t^{n} beyond precision {self.prec}")
        i = n - self.val
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def _coerce(self, other: Any) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries([other], self.prec)

    def __add__(self, other: Any) -> TruncatedSeries:
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val)
        out = [Fraction(0)] * max(prec - val, 0)
        for s in (self, other):
            for i, a in enumerate(s.c):
                j = s.val + i - val
                if j < len(out):
                    out[j] = out[j] + a
        return TruncatedSeries(out, prec, val)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-a for a in self.c], self.prec, self.val)

    def __sub__(self, other: Any) -> TruncatedSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> TruncatedSeries:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([a * other for a in self.c], self.prec, self.val)
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = max(prec - val, 0)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.c[:n]):
            if not a:
                continue
            for j, b in enumerate(other.c[: n - i]):
                out[i + j] = out[i + j] + a * b
        return TruncatedSeries(out, prec, val)

    __rmul__ = __mul__

    def normalized(self) -> TruncatedSeries:
        """Drop leading zeros, moving them into the valuation."""
        k = 0
        while k < len(self.c) and not self.c[k]:
            k += 1
        return TruncatedSeries(self.c[k:], self.prec, self.val + k)

    def inverse(self) -> TruncatedSeries:
        s = self.normalized()
        if not s.c:
            raise ZeroDivisionError("series is zero to the known precision")
        n = s.prec - s.val
        a0 = s.c[0]
        inv = [None] * n
        inv[0] = 1 / a0
        for m in range(1, n):
            acc = 0
            for i in range(1, min(m, len(s.c) - 1) + 1):
                acc = acc + s.c[i] * inv[m - i]
            inv[m] = -acc / a0
        return TruncatedSeries(inv, n - s.val, -s.val)

    def __truediv__(self, other: Any) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([a / other for a in self.c], self.prec, self.val)
        return self * other.inverse()

    def __pow__(self, n: int) -> TruncatedSeries:
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return TruncatedSeries([Fraction(1)], self.prec - self.val)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def coefficients(self, upto: int) -> list[Any]:
        """Coefficients of t^0..t^(upto-1)."""
        return [self.coeff(i) for i in range(upto)]

    def __repr__(self) -> str:
        return f"TruncatedSeries(val={self.val}, prec={self.prec}, {self.c!r})"


def laurent_expansion(num: Poly, den: Poly, at: Any, order: int) -> TruncatedSeries:
    """Expansion of ``num/den`` in ``t = x - at`` up to ``t^order`` (exclusive)."""
    n = num.shift(at)
    d = den.shift(at)
    if not d:
        raise ZeroDivisionError("zero denominator")
    v = d.valuation()
    d_tail = d.c[v:]
    prec = order + v
    series_num = TruncatedSeries(n.c, prec)
    series_den = TruncatedSeries(d_tail, prec)
    quotient = series_num * series_den.inverse()
    return TruncatedSeries(quotient.c, order, quotient.val - v)


def residue(f: RationalFunction | tuple[Poly, Poly], at: Any) -> Any:
    """Coefficient of (x - at)^-1 in the Laurent expansion of ``f`` at ``at``.

    ``f`` is a :class:`RationalFunction` over Q or a ``(num, den)`` pair of
    polynomials over any field (e.g. Q(p) for a parametric pole).
    """
    num, den = (f.num, f.den) if isinstance(f, RationalFunction) else f
    if den(at):
        raise NotAPole(f"function is regular at {at!r}")
    slope = den.derivative()(at)
    if slope:
        return num(at) / slope
    shifted = den.shift(at)
    if not shifted:
        raise ZeroDivisionError("zero denominator")
    order = shifted.valuation()
    if order == 0:
        raise NotAPole(f"function is regular at {at!r}")
    series = laurent_expansion(num, den, at, 0).normalized()
    if series.val >= 0:
        raise NotAPole(f"pole at {at!r} cancels")
    return series.coeff(-1)


class MPoly:
    """Multivariate Laurent polynomial: exponent tuple -> rational coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Any] | None = None):
        self.nvars = nvars
        self.terms = {e: c if isinstance(c, int) else Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, nvars: int, i: int) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars: int, c: Any) -> MPoly:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def from_univariate(cls, nvars: int, i: int, p: Poly, shift: int = 0) -> MPoly:
        out = {}
        for k, c in enumerate(p.c):
            if c:
                e = [0] * nvars
                e[i] = k + shift
                out[tuple(e)] = c
        return cls(nvars, out)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MPoly) and self.terms == other.terms

    def _coerce(self, other: Any) -> MPoly:
        return other if isinstance(other, MPoly) else MPoly.const(self.nvars, other)

    def __add__(self, other: Any) -> MPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Any) -> MPoly:
        return self + (-self._coerce(other))

    def __mul__(self, other: Any) -> MPoly:
        if not isinstance(other, MPoly):
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MPoly:
        result = MPoly.const(self.nvars, 1)
        for _ in range(n):
            result = result * self
        return result

    def partial(self, i: int) -> MPoly:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MPoly(self.nvars, out)

    def theta(self, i: int) -> MPoly:
        """z_i d/dz_i."""
        return MPoly(self.nvars, {e: c * e[i] for e, c in self.terms.items()})

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                t *= Fraction(x) ** k
            total += t
        return total

    def __repr__(self) -> str:
        return f"MPoly({self.terms!r})"


class MRational:
    """Quotient of multivariate Laurent polynomials; no gcd is taken.

    Equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = MPoly.const(num.nvars, 1)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def from_univariate(cls, nvars: int, i: int, f: RationalFunction) -> MRational:
        return cls(MPoly.from_univariate(nvars, i, f.num), MPoly.from_univariate(nvars, i, f.den))

    def _coerce(self, other: Any) -> MRational:
        return other if isinstance(other, MRational) else MRational(MPoly.const(self.nvars, other))

    def __add__(self, other: Any) -> MRational:
        other = self._coerce(other)
        if self.den == other.den:
            return MRational(self.num + other.num, self.den)
        return MRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> MRational:
        return MRational(-self.num, self.den)

    def __sub__(self, other: Any) -> MRational:
        return self + (-self._coerce(other))

    def __mul__(self, other: Any) -> MRational:
        if not isinstance(other, MRational):
            return MRational(self.num * other, self.den)
        return MRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> MRational:
        other = self._coerce(other)
        return MRational(self.num * other.den, self.den * other.num)

    def theta(self, i: int) -> MRational:
        return MRational(self.num.theta(i) * self.den - self.num * self.den.theta(i), self.den * self.den)

    def equals(self, other: MRational) -> bool:
        return self.num * other.den == other.num * self.den

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError(f"pole at {tuple(point)}")
        return self.num.evaluate(point) / d

    def permute(self, perm: Sequence[int]) -> MRational:
        """Substitute variable ``perm[i]`` for variable ``i``."""

        def move(p: MPoly) -> MPoly:
            out = {}
            for e, c in p.terms.items():
                f = [0] * p.nvars
                for i, k in enumerate(e):
                    f[perm[i]] += k
                out[tuple(f)] = c
            return MPoly(p.nvars, out)

        return MRational(move(self.num), move(self.den))
