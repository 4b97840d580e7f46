"""Products of projective spaces and their cohomology rings.

The ring is Q[h_1..h_k] / (h_j^(n_j+1)), graded by total degree.  A class is
stored as a map from exponent vectors to rational coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class ProductSpace:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        ds = tuple(int(n) for n in dims)
        if not ds:
            raise ValueError("need at least one projective factor")
        if any(n < 1 for n in ds):
            raise ValueError(f"factor dimensions must be positive, got {ds}")
        object.__setattr__(self, "dims", ds)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def nvars(self) -> int:
        return sum(n + 1 for n in self.dims)

    def groups(self) -> list[range]:
        """Variable index ranges of each factor inside the concatenated coordinates."""
        out, start = [], 0
        for n in self.dims:
            out.append(range(start, start + n + 1))
            start += n + 1
        return out

    def __mul__(self, other: ProductSpace) -> ProductSpace:
        return ProductSpace(self.dims + other.dims)

    def __str__(self) -> str:
        return " x ".join(f"P^{n}" for n in self.dims)


@dataclass(frozen=True, eq=False)
class CohomClass:
    space: ProductSpace
    degree: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            e = tuple(e)
            if len(e) != self.space.k:
                raise ValueError(f"exponent {e} does not match {self.space}")
            if sum(e) != self.degree:
                raise ValueError(f"exponent {e} not of degree {self.degree}")
            if any(a < 0 for a in e):
                raise ValueError(f"negative exponent {e}")
            if any(a > n for a, n in zip(e, self.space.dims)):
                continue
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        object.__setattr__(self, "terms", {e: c for e, c in sorted(clean.items()) if c})

    @classmethod
    def zero(cls, space: ProductSpace, degree: int) -> CohomClass:
        return cls(space, degree, {})

    @classmethod
    def one(cls, space: ProductSpace) -> CohomClass:
        return cls(space, 0, {(0,) * space.k: 1})

    @classmethod
    def hyperplane(cls, space: ProductSpace, j: int) -> CohomClass:
        e = [0] * space.k
        e[j] = 1
        return cls(space, 1, {tuple(e): 1})

    @classmethod
    def divisor(cls, space: ProductSpace, coeffs: Sequence) -> CohomClass:
        """The degree-1 class sum_j coeffs[j] h_j."""
        if len(coeffs) != space.k:
            raise ValueError("one coefficient per factor required")
        return cls(space, 1, {tuple(int(i == j) for i in range(space.k)): c for j, c in enumerate(coeffs)})

    @classmethod
    def ample(cls, space: ProductSpace) -> CohomClass:
        """The default polarization L = h_1 + ... + h_k."""
        return cls.divisor(space, [1] * space.k)

    def coefficient(self, e: Exponent) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def divisor_coefficients(self) -> tuple[Fraction, ...]:
        if self.degree != 1:
            raise ValueError("not a divisor class")
        return tuple(self.coefficient(tuple(int(i == j) for i in range(self.space.k))) for j in range(self.space.k))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: CohomClass) -> None:
        if self.space != other.space:
            raise ValueError(f"space mismatch: {self.space} vs {other.space}")

    def __add__(self, other: CohomClass) -> CohomClass:
        self._check(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("cannot add classes of different degree")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return CohomClass(self.space, self.degree, terms)

    def __neg__(self) -> CohomClass:
        return CohomClass(self.space, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: CohomClass) -> CohomClass:
        return self + (-other)

    def scale(self, c) -> CohomClass:
        c = Fraction(c)
        return CohomClass(self.space, self.degree, {e: c * a for e, a in self.terms.items()})

    def __mul__(self, other) -> CohomClass:
        if isinstance(other, CohomClass):
            return ring_multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CohomClass:
        out = CohomClass.one(self.space)
        for _ in range(k):
            out = ring_multiply(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomClass):
            return NotImplemented
        if self.space != other.space:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"h{j}" if a == 1 else f"h{j}^{a}" for j, a in enumerate(e) if a) or "1"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts)


def ring_multiply(a: CohomClass, b: CohomClass) -> CohomClass:
    """Truncated product: monomials with some exponent above n_j vanish."""
    a._check(b)
    dims = a.space.dims
    terms: dict[Exponent, Fraction] = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if any(x > n for x, n in zip(e, dims)):
                continue
            terms[e] = terms.get(e, Fraction(0)) + c1 * c2
    return CohomClass(a.space, a.degree + b.degree, terms)


def intersection_number(c: CohomClass) -> Fraction:
    """Degree of a top-degree class: its coefficient on h_1^n_1 ... h_k^n_k."""
    if c.is_zero():
        return Fraction(0)
    if c.degree != c.space.dim:
        raise ValueError(f"class of degree {c.degree} is not top degree {c.space.dim}")
    return c.coefficient(c.space.dims)


def is_big(c: CohomClass) -> bool:
    """Bigness of a divisor class; the big cone is the open positive orthant."""
    if c.degree != 1 and not c.is_zero():
        raise ValueError("bigness is defined for degree-1 classes")
    if c.is_zero():
        return False
    return all(x > 0 for x in c.divisor_coefficients())


def graded_basis(space: ProductSpace, i: int) -> list[Exponent]:
    """Exponent vectors of total degree i with a_j <= n_j, in descending lexicographic order.

    Degree 1 therefore lists h_1, ..., h_k in factor order.
    """
    if not 0 <= i <= space.dim:
        raise ValueError(f"degree {i} outside 0..{space.dim}")
    ranges = [range(n, -1, -1) for n in space.dims]
    return [e for e in itertools.product(*ranges) if sum(e) == i]


def class_vector(c: CohomClass, basis: Sequence[Exponent]) -> list[Fraction]:
    return [c.coefficient(e) for e in basis]


def multinomial_top_degree(coeffs: Sequence, dims: Sequence[int]) -> Fraction:
    """(sum c_j h_j)^d as an integer, by the multinomial formula (independent of ring_multiply)."""
    d = sum(dims)
    out = Fraction(math.factorial(d))
    for c, n in zip(coeffs, dims):
        out *= Fraction(c) ** n / math.factorial(n)
    return out
