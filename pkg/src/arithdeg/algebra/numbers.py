"""Certified real algebraic numbers.

An ``AlgebraicReal`` is an irreducible primitive integer polynomial together
with a rational interval holding exactly one of its real roots.  Equality is
decided exactly; floats appear only when a value is formatted for output.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .matrix import RationalMatrix, char_poly
from .poly import IntPoly, poly_gcd, squarefree_part, sylvester_resultant
from .roots import bisect_root, isolate_intervals, sturm_count, sturm_sequence

REPORT_WIDTH = Fraction(1, 10**12)


@functools.lru_cache(maxsize=4096)
def irreducible_factors(p: IntPoly) -> tuple[IntPoly, ...]:
    """Distinct irreducible factors over Z of a nonconstant polynomial."""
    import sympy

    t = sympy.Symbol("t")
    expr = sympy.Poly(list(reversed(p.coeffs)), t, domain="ZZ")
    _, facs = expr.factor_list()
    out = []
    for f, _mult in facs:
        if f.degree() > 0:
            out.append(IntPoly(int(c) for c in reversed(f.all_coeffs())).primitive())
    return tuple(sorted(out, key=lambda q: (q.degree, q.coeffs)))


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class AlgebraicReal:
    minpoly: IntPoly
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        # float endpoints would make bisection stall at machine precision
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))

    @classmethod
    def from_rational(cls, q) -> AlgebraicReal:
        q = Fraction(q)
        return cls(IntPoly([-q.numerator, q.denominator]), q - 1, q + 1)

    @classmethod
    def from_isolating(cls, p: IntPoly, lo: Fraction, hi: Fraction) -> AlgebraicReal:
        """Canonical form of the unique root of squarefree ``p`` in (lo, hi).

        The interval is refined until exactly one irreducible factor of ``p``
        has a root in it; that factor becomes the minimal polynomial.
        """
        p = p.primitive()
        lo, hi = Fraction(lo), Fraction(hi)
        if p.degree == 1:
            return cls(p, lo, hi)
        factors = [f for f in irreducible_factors(p)]
        if len(factors) == 1:
            return cls(factors[0], lo, hi)
        seqs = [(f, sturm_sequence(f)) for f in factors]
        while True:
            hits = [(f, s) for f, s in seqs if sturm_count(s, lo, hi) > 0]
            if len(hits) == 1 and all(g.sign_at(lo) != 0 and g.sign_at(hi) != 0 for g, _ in hits):
                return cls(hits[0][0], lo, hi)
            lo, hi = bisect_root(p, lo, hi, (hi - lo) / 2)

    # exact queries -------------------------------------------------------

    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        b, a = self.minpoly.coeffs
        return Fraction(-b, a)

    def sign(self) -> int:
        if self.is_rational():
            q = self.as_fraction()
            return (q > 0) - (q < 0)
        a = self
        while a.lo < 0 < a.hi:
            a = refine(a, (a.hi - a.lo) / 2)
        return 1 if a.lo >= 0 else -1

    def refined(self, width) -> AlgebraicReal:
        return refine(self, Fraction(width))

    def interval(self, width=REPORT_WIDTH) -> tuple[Fraction, Fraction]:
        a = refine(self, Fraction(width))
        return a.lo, a.hi

    def __float__(self) -> float:
        if self.is_rational():
            return float(self.as_fraction())
        lo, hi = self.interval(Fraction(1, 2**60) * max(1, abs(self.hi)))
        return float((lo + hi) / 2)

    def format_interval(self, decimals: int = 12) -> str:
        lo, hi = self.interval(Fraction(1, 10**decimals))
        scale = 10**decimals
        return f"[{_fmt_fixed(math.floor(lo * scale), decimals)}, {_fmt_fixed(math.ceil(hi * scale), decimals)}]"

    # comparisons -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgebraicReal.from_rational(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        return algebraic_equal(self, other)

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgebraicReal.from_rational(other)
        return compare(self, other) < 0

    def __truediv__(self, other: AlgebraicReal) -> AlgebraicReal:
        return algebraic_ratio(self, other)

    def __mul__(self, other: AlgebraicReal) -> AlgebraicReal:
        return algebraic_product(self, other)

    def __repr__(self) -> str:
        return f"AlgebraicReal({self.minpoly}, [{self.lo}, {self.hi}])"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.as_fraction())
        return f"root of {self.minpoly} near {float(self):.12g}"


def _fmt_fixed(n: int, decimals: int) -> str:
    sign = "-" if n < 0 else ""
    s = str(abs(n)).rjust(decimals + 1, "0")
    return f"{sign}{s[:-decimals]}.{s[-decimals:]}" if decimals else f"{sign}{s}"


def refine(a: AlgebraicReal, width) -> AlgebraicReal:
    """Return the same root with an isolating interval of width <= ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if a.hi - a.lo <= width:
        return a
    if a.is_rational():
        q = a.as_fraction()
        return AlgebraicReal(a.minpoly, q - width / 2, q + width / 2)
    lo, hi = bisect_root(a.minpoly, a.lo, a.hi, width)
    return AlgebraicReal(a.minpoly, lo, hi)


def sturm_isolate_real_roots(p: IntPoly) -> list[AlgebraicReal]:
    """One AlgebraicReal per distinct real root of p, sorted ascending."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    q = squarefree_part(p)
    roots = [AlgebraicReal.from_isolating(q, lo, hi) for lo, hi in isolate_intervals(q)]
    return roots


def algebraic_equal(a: AlgebraicReal, b: AlgebraicReal) -> bool:
    """Exact equality test.

    The common factor g = gcd(minpoly_a, minpoly_b) has a root in the
    intersection of both intervals iff the two numbers coincide; interval
    endpoints are never roots of either minimal polynomial.
    """
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo >= hi:
        return False
    g = poly_gcd(a.minpoly, b.minpoly)
    if g.degree <= 0:
        return False
    return sturm_count(sturm_sequence(squarefree_part(g)), lo, hi) > 0


def compare(a: AlgebraicReal, b: AlgebraicReal) -> int:
    if algebraic_equal(a, b):
        return 0
    while not (a.hi < b.lo or b.hi < a.lo):
        a = refine(a, (a.hi - a.lo) / 2)
        b = refine(b, (b.hi - b.lo) / 2)
    return -1 if a.hi < b.lo else 1


def _interval_quotient(a: AlgebraicReal, b: AlgebraicReal) -> tuple[Fraction, Fraction]:
    cands = [a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi]
    return min(cands), max(cands)


def _interval_product(a: AlgebraicReal, b: AlgebraicReal) -> tuple[Fraction, Fraction]:
    cands = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
    return min(cands), max(cands)


def _excluding_zero(b: AlgebraicReal) -> AlgebraicReal:
    if b.minpoly.coeffs[0] == 0:
        raise ZeroDivisionError("divisor is exactly zero")
    while b.lo <= 0 <= b.hi:
        b = refine(b, (b.hi - b.lo) / 2)
    return b


def _certify(r: IntPoly, a: AlgebraicReal, b: AlgebraicReal, interval_op) -> AlgebraicReal:
    """Locate the root of r produced by combining a and b under interval_op."""
    q = squarefree_part(r)
    seq = sturm_sequence(q)
    while True:
        lo, hi = interval_op(a, b)
        if lo < hi and q.sign_at(lo) != 0 and q.sign_at(hi) != 0 and sturm_count(seq, lo, hi) == 1:
            return AlgebraicReal.from_isolating(q, lo, hi)
        a = refine(a, (a.hi - a.lo) / 2)
        b = refine(b, (b.hi - b.lo) / 2)


def algebraic_ratio(a: AlgebraicReal, b: AlgebraicReal) -> AlgebraicReal:
    """Exact a / b.

    The quotient is a root of Res_y(p_a(t*y), p_b(y)); its isolating interval
    comes from interval division after enough refinement.
    """
    b = _excluding_zero(b)
    if a.is_rational() and b.is_rational():
        return AlgebraicReal.from_rational(a.as_fraction() / b.as_fraction())
    pa, pb = a.minpoly, b.minpoly
    # coefficient of y^k in p_a(t y) is a_k t^k
    ycoeffs_a = [IntPoly([0] * k + [c]) for k, c in enumerate(pa.coeffs)]
    ycoeffs_b = [IntPoly([c]) for c in pb.coeffs]
    r = sylvester_resultant(ycoeffs_a, ycoeffs_b)
    return _certify(r, a, b, _interval_quotient)


def algebraic_product(a: AlgebraicReal, b: AlgebraicReal) -> AlgebraicReal:
    """Exact a * b via Res_y(y^m p_a(t / y), p_b(y))."""
    if a.is_rational() and b.is_rational():
        return AlgebraicReal.from_rational(a.as_fraction() * b.as_fraction())
    if a.minpoly.coeffs[0] == 0 or b.minpoly.coeffs[0] == 0:
        return AlgebraicReal.from_rational(0)
    pa, pb = a.minpoly, b.minpoly
    m = pa.degree
    # y^m p_a(t/y) = sum a_k t^k y^(m-k)
    ycoeffs_a = [IntPoly()] * (m + 1)
    for k, c in enumerate(pa.coeffs):
        ycoeffs_a[m - k] = IntPoly([0] * k + [c])
    ycoeffs_b = [IntPoly([c]) for c in pb.coeffs]
    r = sylvester_resultant(ycoeffs_a, ycoeffs_b)
    return _certify(r, a, b, _interval_product)


def spectral_radius_nonneg(m: RationalMatrix) -> AlgebraicReal:
    """Largest real eigenvalue of a nonnegative square matrix (its spectral radius)."""
    if not m.is_square():
        raise ValueError(f"square matrix required, got {m.shape}")
    if not m.is_nonnegative():
        raise ValueError("matrix has a negative entry")
    if m.nrows == 0:
        raise ValueError("empty matrix has no spectral radius")
    p, _ = char_poly(m)
    roots = sturm_isolate_real_roots(p)
    return max(roots)


def real_eigenvalues(m: RationalMatrix) -> list[AlgebraicReal]:
    p, _ = char_poly(m)
    if p.degree <= 0:
        return []
    return sturm_isolate_real_roots(p)


def distinct(values: Iterable[AlgebraicReal]) -> list[AlgebraicReal]:
    out: list[AlgebraicReal] = []
    for v in values:
        if not any(algebraic_equal(v, w) for w in out):
            out.append(v)
    return out


def multiset_contains(big: Sequence[AlgebraicReal], small: Sequence[AlgebraicReal]) -> bool:
    """True iff ``small`` embeds into ``big`` counting multiplicity."""
    pool = list(big)
    for v in small:
        idx = next((i for i, w in enumerate(pool) if algebraic_equal(v, w)), None)
        if idx is None:
            return False
        pool.pop(idx)
    return True
