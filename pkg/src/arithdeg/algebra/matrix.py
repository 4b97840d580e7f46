"""Exact rational matrices and fraction-free determinants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .poly import IntPoly, _lcm


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rs = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rs[0]) if rs else 0
        for r in rs:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", rs)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, n: int, m: int) -> RationalMatrix:
        return cls([[0] * m for _ in range(n)], m)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix([self.column(j) for j in range(self.ncols)], self.nrows)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.rows for x in r)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.rows for x in r)

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same(other)
        return RationalMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols
        )

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same(other)
        return RationalMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols
        )

    def scale(self, c) -> RationalMatrix:
        c = Fraction(c)
        return RationalMatrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows],
            other.ncols,
        )

    def __pow__(self, k: int) -> RationalMatrix:
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply_row(self, v: Sequence) -> tuple[Fraction, ...]:
        """Row vector times matrix."""
        if len(v) != self.nrows:
            raise ValueError("dimension mismatch")
        return tuple(
            sum((Fraction(v[i]) * self.rows[i][j] for i in range(self.nrows)), Fraction(0))
            for j in range(self.ncols)
        )

    def inverse(self) -> RationalMatrix:
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return RationalMatrix([r[n:] for r in a], n)

    def solve_right(self, rhs: RationalMatrix) -> RationalMatrix:
        """Solve self @ X = rhs exactly; self must have full column rank.

        Raises ValueError when the system is inconsistent.
        """
        n, m = self.shape
        k = rhs.ncols
        a = [list(r) + list(s) for r, s in zip(self.rows, rhs.rows)]
        pivots = []
        row = 0
        for col in range(m):
            piv = next((r for r in range(row, n) if a[r][col] != 0), None)
            if piv is None:
                raise ValueError("matrix does not have full column rank")
            a[row], a[piv] = a[piv], a[row]
            p = a[row][col]
            a[row] = [x / p for x in a[row]]
            for r in range(n):
                if r != row and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[row])]
            pivots.append(row)
            row += 1
        for r in range(row, n):
            if any(x != 0 for x in a[r][m:]):
                raise ValueError("inconsistent linear system")
        return RationalMatrix([a[r][m:] for r in pivots], k)

    def det(self) -> Fraction:
        p, s = char_poly(self)
        c0 = Fraction(p.coeffs[0] if p.coeffs else 0, s)
        return c0 if self.nrows % 2 == 0 else -c0

    def to_floats(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self.rows]

    def _check_same(self, other: RationalMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"


def bareiss_det_poly(rows: Sequence[Sequence[IntPoly]]) -> IntPoly:
    """Determinant of a square matrix over Z[t] by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return IntPoly([1])
    sign = 1
    prev = IntPoly([1])
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if swap is None:
                return IntPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def char_poly(m: RationalMatrix) -> tuple[IntPoly, int]:
    """Characteristic polynomial det(tI - m) as (p, s) with det(tI - m) = p / s.

    For integer matrices p is monic and s == 1.
    """
    if not m.is_square():
        raise ValueError(f"char_poly needs a square matrix, got {m.shape}")
    n = m.nrows
    if n == 0:
        return IntPoly([1]), 1
    den = reduce(_lcm, (x.denominator for r in m.rows for x in r), 1)
    # det(tI - M) = den**-n * det(s I - den*M) evaluated at s = den*t
    entries = [
        [IntPoly([-int(m[i, j] * den), 1 if i == j else 0]) for j in range(n)] for i in range(n)
    ]
    q = bareiss_det_poly(entries)
    coeffs = [Fraction(c * den**i, den**n) for i, c in enumerate(q.coeffs)]
    p, s = IntPoly.from_rationals(coeffs)
    return p, s
