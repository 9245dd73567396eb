"""One-backbone coefficients b^(g)_k from the three-term recurrence.

Row ``g`` of the table holds ``b_0 .. b_{g-1}``, the coefficients of the
genus ``g`` one-point mean on ``v^-(4g+1+2k)`` with ``v = e^l - e^-l``.
Everything here is exact; intermediate thirds are carried as fractions and
integrality is only asserted on final quantities.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .kernels import time_expansion


class DivisibilityFailure(ArithmeticError):
    pass


class NonInteger(ArithmeticError):
    pass


class Negative(ArithmeticError):
    pass


class SingularSystem(ArithmeticError):
    pass


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 1 and (-3)!! = -1."""
    if n == -3:
        return -1
    if n < -3:
        raise ValueError(f"{n}!! is not defined")
    return prod(range(n, 0, -2))


def triple_factorial(g: int) -> int:
    """prod_{k=3}^{g} (3k - 2), written (3g-2)!!! in the one-backbone literature."""
    return prod(3 * k - 2 for k in range(3, g + 1))


def _next_row(g: int, row: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for k in range(g + 1):
        bk = row[k] if k < g else 0
        bk1 = row[k - 1] if k >= 1 else 0
        n = 4 * g + 2 * k
        num = (n + 1) * (n + 3) * ((n + 2) * bk + 4 * (n - 1) * bk1)
        q, r = divmod(num, n + 6)
        if r:
            raise DivisibilityFailure(f"b^({g + 1})_{k}: {num} is not divisible by {n + 6}")
        out.append(q)
    return tuple(out)


@lru_cache(maxsize=None)
def _row(g: int) -> tuple[int, ...]:
    if g < 1:
        raise ValueError(f"genus must be at least 1, got {g}")
    row = (1,)
    for h in range(1, g):
        row = _next_row(h, row)
    return row


def hz_table(gmax: int) -> dict[int, tuple[int, ...]]:
    """Rows 1..gmax; every entry is checked to be a positive integer."""
    if gmax < 1:
        raise ValueError(f"gmax must be at least 1, got {gmax}")
    table = {1: (1,)}
    for g in range(1, gmax):
        table[g + 1] = _next_row(g, table[g])
    for g, row in table.items():
        if any(b <= 0 for b in row):
            raise Negative(f"row {g} has a non-positive entry: {row}")
    return table


def _integer(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NonInteger(f"{what} = {x} is not an integer")
    return int(x)


def b_top(g: int) -> int:
    """b_{g-1} = 2^(g-1) (6g-3)!! / (3^g g!)."""
    return _integer(Fraction(2 ** (g - 1) * double_factorial(6 * g - 3), 3**g * factorial(g)), f"b^({g})_{g - 1}")


def b_bottom(g: int) -> int:
    """b_0 = (4g)! / (8^g g! (2g+1)!!)."""
    return _integer(Fraction(factorial(4 * g), 8**g * factorial(g) * double_factorial(2 * g + 1)), f"b^({g})_0")


def b_second(g: int) -> int:
    """b_{g-2} = 2^(g-2) (6g-5)!! / (5 3^(g-2) (g-2)!), g >= 2."""
    if g < 2:
        raise ValueError("b_{g-2} needs g >= 2")
    value = Fraction(2 ** (g - 2) * double_factorial(6 * g - 5), 5 * 3 ** (g - 2) * factorial(g - 2))
    return _integer(value, f"b^({g})_{g - 2}")


def _third_base(g: int) -> Fraction:
    return Fraction(2 ** (g - 3) * double_factorial(6 * g - 7), 3 ** (g - 3) * factorial(g - 3))


def b_third(g: int) -> int:
    """b_{g-3} = (21g - 13)/350 * 2^(g-3) (6g-7)!! / (3^(g-3) (g-3)!), g >= 3.

    This is the solution of the recurrence one step below ``b_second``.
    """
    if g < 3:
        raise ValueError("b_{g-3} needs g >= 3")
    return _integer(Fraction(21 * g - 13, 350) * _third_base(g), f"b^({g})_{g - 3}")


def b_third_as_printed(g: int) -> Fraction:
    """The two-term triple-factorial expression for b_{g-3}, evaluated literally.

    It does not agree with the recurrence (at g = 3 it is 2079/2, not 1485);
    kept so the disagreement stays visible in the test suite.
    """
    if g < 3:
        raise ValueError("b_{g-3} needs g >= 3")
    first = Fraction(2 * g - 1, 25) * _third_base(g)
    second = Fraction(7 * 2 ** (g - 3) * double_factorial(6 * g - 7), 10 * triple_factorial(g))
    return first - second


@dataclass(frozen=True)
class ClosedForms:
    top: int
    bottom: int
    second: int | None
    third: int | None


def closed_forms(g: int) -> ClosedForms:
    """(b_{g-1}, b_0, b_{g-2}, b_{g-3}); entries needing a larger g are None."""
    if g < 1:
        raise ValueError(f"genus must be at least 1, got {g}")
    return ClosedForms(
        top=b_top(g),
        bottom=b_bottom(g),
        second=b_second(g) if g >= 2 else None,
        third=b_third(g) if g >= 3 else None,
    )


def kappa_normalization(g: int) -> Fraction:
    """Factor taking the literal time-expansion solve to kappa_{g,1,0} = 1/(24^g g!)."""
    return Fraction(-(2 ** (2 * g - 1)))


def b_to_kappa(g: int, brow: tuple[int, ...] | list[int]) -> tuple[Fraction, ...]:
    """kappa_{g,1,r} for r = 0..3g-2 from row g of the b table.

    Equates sum_i b_i s_{2g-1+i,0} with
    sum_r (-1)^r kappa_r / (2^(d-r) (d-r)!) * sum_j q_{j,d-r} s_{j-1,0}, d = 3g-2,
    and solves from the highest pole down.
    """
    if len(brow) != g:
        raise ValueError(f"row for genus {g} must have {g} entries, got {len(brow)}")
    d = 3 * g - 2
    target = [Fraction(0)] * (d + 1)
    for i, b in enumerate(brow):
        target[2 * g - 1 + i] = Fraction(b)

    def weight(r: int) -> Fraction:
        return Fraction((-1) ** r, 2 ** (d - r) * factorial(d - r))

    kappa: list[Fraction] = []
    for r in range(d + 1):
        m = d - r  # s_{m,0} is the highest pole reached by kappa_r
        known = sum(
            (weight(t) * kappa[t] * time_expansion(d - t)[0][m] for t in range(r)),
            Fraction(0),
        )
        lead = weight(r) * time_expansion(m)[0][m]
        if lead == 0:
            raise SingularSystem(f"zero pivot at r = {r} for genus {g}")
        kappa.append((target[m] - known) / lead)
    scale = kappa_normalization(g)
    return tuple(k * scale for k in kappa)


def kappa_leading(g: int) -> Fraction:
    return Fraction(1, 24**g * factorial(g))


def subleading_coefficient(g: int) -> Fraction:
    """(12g^2 - 7g + 5)/5, checked against kappa_{g,1,1}/kappa_{g,1,0}."""
    if g < 2:
        raise ValueError("the subleading coefficient needs g >= 2")
    value = Fraction(12 * g * g - 7 * g + 5, 5)
    kappa = b_to_kappa(g, _row(g))
    if kappa[1] / kappa[0] != value:
        raise ArithmeticError(f"kappa ratio {kappa[1] / kappa[0]} differs from {value} at g = {g}")
    return value


@dataclass(frozen=True)
class Census:
    v44: int
    v5: int
    sum_q_vq: int
    v33: int


def census(g: int, brow: tuple[int, ...] | list[int]) -> Census:
    """Counts of rooted one-face shapes with one 5-valent or two 4-valent vertices."""
    if g < 2:
        raise ValueError("census needs g >= 2")
    top, second = Fraction(brow[g - 1]), Fraction(brow[g - 2])
    values = {
        "V44": Fraction(1, 4) * ((3 * g - 4) * (6 * g - 5) * top + g * top - Fraction(20, 3) * second),
        "V5": 2 * (g - 1) * top + Fraction(8, 3) * second,
        "sum qV_q": g * top - Fraction(20, 3) * second,
        "V33": top,
    }
    for name, x in values.items():
        if x < 0:
            raise Negative(f"{name} = {x} at g = {g}")
    v44, v5, sq, v33 = (_integer(x, f"{name} at g = {g}") for name, x in values.items())
    return Census(v44, v5, sq, v33)


def census_identities_hold(g: int, brow: tuple[int, ...] | list[int]) -> bool:
    c = census(g, brow)
    top, second = brow[g - 1], brow[g - 2]
    total = 2 * (c.v44 + c.v5) == 2 * second + (3 * g - 2) * (3 * g - 3) * top
    mixed = 8 * c.v44 + 5 * c.v5 == (6 * g - 5) * (6 * g - 6) * c.v33
    return total and mixed


def blowup_failures(gmax: int) -> list[tuple[int, str]]:
    """All (g, identity) pairs with g <= gmax where a blow-up identity fails."""
    table = hz_table(gmax + 1)

    def b(g: int, k: int) -> int:
        row = table[g]
        return row[k] if 0 <= k < len(row) else 0

    failures = []
    for g in range(1, gmax + 1):
        lhs = 2 * (6 * g - 1) * (6 * g + 1) * b(g, g - 1)
        if 3 * lhs != 3 * (g + 1) * b(g + 1, g) - 20 * b(g + 1, g - 1):
            failures.append((g, "handle"))
        if 10 * (2 * g - 1) * b(g, g - 2) != 3 * g * (g - 1) * b(g, g - 1):
            failures.append((g, "ratio"))
    return failures


def verify_blowup_identities(gmax: int) -> bool:
    """Both blow-up identities over 1 <= g <= gmax (they hold from g = 1 on)."""
    if gmax < 2:
        raise ValueError("gmax must be at least 2")
    return not blowup_failures(gmax)


def b_table_csv(table: dict[int, tuple[int, ...]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["g", "k", "b"])
    for g in sorted(table):
        for k, b in enumerate(table[g]):
            writer.writerow([g, k, str(b)])
    return buf.getvalue()


def kappa_table_csv(rows: dict[int, tuple[Fraction, ...]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["g", "r", "kappa_num", "kappa_den"])
    for g in sorted(rows):
        for r, k in enumerate(rows[g]):
            writer.writerow([g, r, k.numerator, k.denominator])
    return buf.getvalue()
