"""Exact rational arithmetic, local-field shape data and dominant weight tables.

Everything downstream works with valuations normalized so that v_p(p) = 1.
A p-adic place only enters through three numbers: the prime p, the
ramification index e and the residue degree f.  The residue cardinality q
then has v_p(q) = f, and any uniformizer has v_p = 1/e.  No element of the
local field itself is ever represented.

Weights are stored as one integer matrix per place: row sigma (one row per
embedding of the field into its algebraic closure, so e*f rows) and column i
for the dominant coordinates k[sigma][1] >= ... >= k[sigma][n] >= 0.  The
accessor extends indices to -n..n by k[sigma][-i] = -k[sigma][i] and
k[sigma][0] = 0; the extension is never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

#: Exact rational scalar used everywhere; no floating point enters the package.
Rat = Fraction


def rat_str(x) -> str:
    """Serialize a rational (or int) canonically as ``"num/den"``."""
    q = Fraction(x)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(s) -> Fraction:
    """Parse ``"num/den"``, a plain integer string, or a number."""
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    raise TypeError(f"cannot parse rational from {s!r}")


def vp(x, p: int) -> Fraction:
    """p-adic valuation of a nonzero rational, normalized by v_p(p) = 1."""
    q = Fraction(x)
    if q == 0:
        raise ZeroDivisionError("v_p(0) is undefined")

    def _ival(n: int) -> int:
        n = abs(n)
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    return Fraction(_ival(q.numerator) - _ival(q.denominator))


def unit_part(x, p: int) -> Fraction:
    """The p-unit u with x = p^{v_p(x)} * u."""
    q = Fraction(x)
    v = int(vp(q, p))
    return q / Fraction(p) ** v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class LocalDatum:
    """Arithmetic shape of a p-adic place: prime p, ramification e, residue degree f."""

    p: int
    e: int = 1
    f: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1 or self.f < 1:
            raise ValueError("need e >= 1 and f >= 1")

    @property
    def q_valuation(self) -> Fraction:
        """v_p of the residue cardinality q = p^f."""
        return Fraction(self.f)

    @property
    def uniformizer_valuation(self) -> Fraction:
        """v_p of any uniformizer, i.e. 1/e."""
        return Fraction(1, self.e)

    @property
    def embeddings(self) -> int:
        """Number of embeddings into the algebraic closure: e * f."""
        return self.e * self.f


class WeightTable:
    """Dominant integral weights at one place: rows[sigma][i-1] = k[sigma][i].

    Rows are weakly decreasing and nonnegative.  ``entry(sigma, i)`` accepts
    any i in -rank..rank, applying the sign extension and k[sigma][0] = 0.
    Indices are 1-based to match the usual k_{v,sigma,i} bookkeeping.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Sequence[int]]):
        rows = tuple(tuple(int(k) for k in row) for row in rows)
        if not rows:
            raise ValueError("a weight table needs at least one embedding row")
        n = len(rows[0])
        for row in rows:
            if len(row) != n:
                raise ValueError("all embedding rows must have the same rank")
            if any(row[j] < row[j + 1] for j in range(n - 1)):
                raise ValueError(f"row {row} is not weakly decreasing")
            if n and row[-1] < 0:
                raise ValueError(f"row {row} has a negative entry")
        self.rows = rows

    @property
    def rank(self) -> int:
        return len(self.rows[0])

    @property
    def embeddings(self) -> int:
        return len(self.rows)

    def entry(self, sigma: int, i: int) -> int:
        """k[sigma][i] for i in -rank..rank, with k[sigma][-i] = -k[sigma][i], k[sigma][0] = 0."""
        row = self.rows[sigma - 1]
        if i == 0:
            return 0
        if i > 0:
            return row[i - 1]
        return -row[-i - 1]

    def column_sum(self, i: int) -> int:
        """Sum over embeddings of k[sigma][i] (extended index allowed)."""
        return sum(self.entry(s, i) for s in range(1, self.embeddings + 1))

    def total(self) -> int:
        return sum(sum(row) for row in self.rows)

    def __eq__(self, other):
        return isinstance(other, WeightTable) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"WeightTable({list(map(list, self.rows))})"


def very_regular(weights: WeightTable, bound) -> bool:
    """Whether every consecutive gap and every trailing k[sigma][n] is >= bound.

    This is the weight-regularity lower bound that makes enough room for
    classicality and complete refinability at nearby points.
    """
    bound = Fraction(bound)
    n = weights.rank
    for row in weights.rows:
        for j in range(n - 1):
            if row[j] - row[j + 1] < bound:
                return False
        if row[n - 1] < bound:
            return False
    return True
