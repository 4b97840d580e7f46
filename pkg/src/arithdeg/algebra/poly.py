"""Dense univariate polynomials with integer coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients stored lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = _strip(int(c) for c in coeffs)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> IntPoly:
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def from_rationals(cls, coeffs: Sequence[Rational]) -> tuple[IntPoly, int]:
        """Clear denominators: returns (p, s) with p = s * sum(coeffs[i] t^i)."""
        fr = [Fraction(c) for c in coeffs]
        s = reduce(_lcm, (c.denominator for c in fr), 1)
        return cls(int(c * s) for c in fr), s

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> IntPoly:
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero():
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return IntPoly(a // c for a in self.coeffs)

    def derivative(self) -> IntPoly:
        return IntPoly(i * a for i, a in enumerate(self.coeffs) if i > 0)

    def __call__(self, x: Rational) -> Rational:
        acc: Rational = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def sign_at(self, x: Rational) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def __neg__(self) -> IntPoly:
        return IntPoly(-a for a in self.coeffs)

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: Union[IntPoly, int]) -> IntPoly:
        if isinstance(other, int):
            return IntPoly(a * other for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPoly:
        out = IntPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> IntPoly:
        """Multiply by t**k."""
        if self.is_zero():
            return self
        return IntPoly((0,) * k + self.coeffs)

    def reversed(self) -> IntPoly:
        """t**deg * p(1/t)."""
        return IntPoly(reversed(self.coeffs))

    def scale_variable(self, num: int, den: int = 1) -> tuple[IntPoly, int]:
        """Return (q, s) with q(t) = s * p(num * t / den), q integral."""
        d = self.degree
        cs = [a * num**i * den ** (d - i) for i, a in enumerate(self.coeffs)]
        return IntPoly(cs), den**d

    def pseudo_divmod(self, other: IntPoly) -> tuple[IntPoly, IntPoly, int]:
        """Sign-preserving pseudo division.

        Returns (q, r, m) with m * self = q * other + r, m = |lc(other)|**k > 0.
        """
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [0] * max(len(r) - other.degree, 0)
        lc = other.lc
        alc = abs(lc)
        sgn = 1 if lc > 0 else -1
        m = 1
        db = other.degree
        while len(r) - 1 >= db and r:
            shift = len(r) - 1 - db
            top = r[-1]
            # scale everything by |lc| so the leading term cancels exactly
            r = [alc * c for c in r]
            q = [alc * c for c in q]
            m *= alc
            factor = top * sgn
            q[shift] += factor
            for i, b in enumerate(other.coeffs):
                r[shift + i] -= factor * b
            r = list(_strip(r))
        return IntPoly(q), IntPoly(r), m

    def exact_div(self, other: IntPoly) -> IntPoly:
        """Division known to be exact over Z."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        q = [0] * max(len(r) - db, 0)
        lc = other.lc
        while r and len(r) - 1 >= db:
            shift = len(r) - 1 - db
            c, rem = divmod(r[-1], lc)
            if rem:
                raise ArithmeticError("inexact polynomial division")
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                r[shift + i] -= c * b
            r = list(_strip(r))
        if r:
            raise ArithmeticError("inexact polynomial division")
        return IntPoly(q)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd over Z[t] (positive leading coefficient)."""
    a, b = a.primitive(), b.primitive()
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    while not b.is_zero():
        _, r, _ = a.pseudo_divmod(b)
        a, b = b, r.primitive()
    return a.primitive() if a.degree > 0 else IntPoly([1])


def squarefree_part(p: IntPoly) -> IntPoly:
    """Primitive squarefree part p / gcd(p, p')."""
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    p = p.primitive()
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p
    return p.exact_div(g).primitive()


def sylvester_resultant(a: Sequence[IntPoly], b: Sequence[IntPoly]) -> IntPoly:
    """Resultant in y of two polynomials whose y-coefficients lie in Z[t].

    ``a[i]`` is the coefficient of y**i.  Both sequences must have a nonzero
    leading entry.
    """
    from .matrix import bareiss_det_poly

    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return IntPoly([1])
    zero = IntPoly()
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return bareiss_det_poly(rows)
