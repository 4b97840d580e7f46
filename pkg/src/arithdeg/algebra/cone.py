"""Exact test for a linear subspace meeting the open positive orthant."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .field import FieldElement
from .matrix import RationalMatrix
from .numbers import AlgebraicReal

Scalar = Union[Fraction, FieldElement]


def _sign(x: Scalar) -> int:
    if isinstance(x, FieldElement):
        return x.sign()
    return (x > 0) - (x < 0)


def _is_zero(x: Scalar) -> bool:
    return x.is_zero() if isinstance(x, FieldElement) else x == 0


def _neg(x: Scalar) -> Scalar:
    return -x


def strict_system_feasible(rows: Sequence[Sequence[Scalar]]) -> bool:
    """Decide whether some real c satisfies row . c > 0 for every row.

    Fourier-Motzkin elimination; positive combinations of strict inequalities
    stay strict, so the projection is exact.  Only ring operations and signs
    are used, so entries may live in Q or in Q(alpha).
    """
    system = [list(r) for r in rows]
    if not system:
        return True
    nvars = len(system[0])
    for var in range(nvars - 1, -1, -1):
        for r in system:
            if all(_is_zero(x) for x in r[: var + 1]):
                # 0 > 0 is unsatisfiable
                return False
        pos, neg, rest = [], [], []
        for r in system:
            s = _sign(r[var])
            (pos if s > 0 else neg if s < 0 else rest).append(r)
        new = [r[:var] for r in rest]
        for p in pos:
            for q in neg:
                # p_v * q - q_v * p eliminates var with positive weights
                a, b = p[var], _neg(q[var])
                new.append([b * p[i] + a * q[i] for i in range(var)])
        system = new
        if not system:
            return True
    return not system


def subspace_meets_open_orthant(generators: Sequence[Sequence[Scalar]]) -> bool:
    """True iff some linear combination of ``generators`` is strictly positive.

    Each generator is a vector of the same dimension k.  The combination
    coefficients are free reals, so this asks whether span(generators) meets
    the open orthant {v : v_i > 0 for all i}.
    """
    if not generators:
        return False
    k = len(generators[0])
    if any(len(g) != k for g in generators):
        raise ValueError("generators have different dimensions")
    if k < 1:
        raise ValueError("ambient dimension must be positive")
    gens = [[x if isinstance(x, FieldElement) else Fraction(x) for x in g] for g in generators]
    # coordinate i of sum_j c_j g_j is sum_j g_j[i] c_j
    rows = [[g[i] for g in gens] for i in range(k)]
    return strict_system_feasible(rows)


def image_minus_scalar(m: RationalMatrix, alpha: AlgebraicReal) -> list[list[Scalar]]:
    """Columns of (m - alpha I), exact in Q(alpha) when alpha is irrational."""
    n = m.nrows
    cols: list[list[Scalar]] = []
    if alpha.is_rational():
        a = alpha.as_fraction()
        for j in range(n):
            cols.append([m[i, j] - (a if i == j else 0) for i in range(n)])
        return cols
    gen = FieldElement.generator(alpha)
    for j in range(n):
        col = []
        for i in range(n):
            e = FieldElement.constant(alpha, m[i, j])
            col.append(e - gen if i == j else e)
        cols.append(col)
    return cols
