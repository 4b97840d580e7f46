"""Arithmetic in Q(alpha) for a real algebraic alpha, with exact signs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numbers import AlgebraicReal, refine


def _trim(cs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class FieldElement:
    """Polynomial in alpha with rational coefficients, reduced mod minpoly(alpha)."""

    alpha: AlgebraicReal
    coeffs: tuple[Fraction, ...]

    @classmethod
    def constant(cls, alpha: AlgebraicReal, c) -> FieldElement:
        return cls(alpha, _trim([Fraction(c)]))

    @classmethod
    def generator(cls, alpha: AlgebraicReal) -> FieldElement:
        return cls(alpha, ())._reduce([Fraction(0), Fraction(1)])

    def _reduce(self, cs: Sequence[Fraction]) -> FieldElement:
        m = self.alpha.minpoly.coeffs
        d = len(m) - 1
        cs = [Fraction(c) for c in cs]
        while len(cs) > d:
            top = cs.pop()
            if top:
                f = top / m[-1]
                base = len(cs) - d
                for i in range(d):
                    cs[base + i] -= f * m[i]
        return FieldElement(self.alpha, _trim(cs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: FieldElement) -> FieldElement:
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return FieldElement(self.alpha, _trim([x + y for x, y in zip(a, b)]))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.alpha, tuple(-c for c in self.coeffs))

    def __sub__(self, other: FieldElement) -> FieldElement:
        return self + (-other)

    def __mul__(self, other: FieldElement) -> FieldElement:
        if self.is_zero() or other.is_zero():
            return FieldElement(self.alpha, ())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return self._reduce(out)

    def _interval(self, a: AlgebraicReal) -> tuple[Fraction, Fraction]:
        lo, hi = Fraction(0), Fraction(0)
        for c in reversed(self.coeffs):
            cands = (lo * a.lo, lo * a.hi, hi * a.lo, hi * a.hi)
            lo, hi = min(cands) + c, max(cands) + c
        return lo, hi

    def sign(self) -> int:
        """Exact sign: zero iff the reduced residue vanishes, else refine alpha."""
        if self.is_zero():
            return 0
        if len(self.coeffs) == 1:
            c = self.coeffs[0]
            return (c > 0) - (c < 0)
        a = self.alpha
        while True:
            lo, hi = self._interval(a)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            a = refine(a, (a.hi - a.lo) / 2)

    def __float__(self) -> float:
        x = float(self.alpha)
        return float(sum(float(c) * x**i for i, c in enumerate(self.coeffs)))
