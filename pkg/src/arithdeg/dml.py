"""Return sets of paired orbits into a subvariety, and height separation.

Membership in V is exact: every defining equation must vanish on the
canonical integer representative of (f^n(x), g^n(y)).  Once the points
outgrow the digit budget, non-membership is still certified exactly: the
orbits are continued modulo a few primes on unnormalized representatives,
and an equation that is nonzero modulo some prime is nonzero on the canonical
point, by multihomogeneity.  Nothing here proves non-density; the reports are
finite-horizon evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraicReal, algebraic_equal
from .dynamics import (
    DEFAULT_DIGIT_BUDGET,
    Endomorphism,
    ProjPoint,
    evaluate,
    lyapunov_multipliers,
    point_size,
)
from .geometry import ProductSpace
from .polynomials import MPoly, factor_variable_names, parse_polynomial

GENERIC_FINITENESS_NOTE = (
    "generic finiteness of the projections V -> X and V -> Y is assumed by the user, not checked"
)


@dataclass(frozen=True)
class Correspondence:
    """A closed subset V of X x Y cut out by multihomogeneous equations."""

    ambient: ProductSpace
    equations: tuple[MPoly, ...]

    def __post_init__(self):
        eqs = tuple(self.equations)
        if not eqs:
            raise ValueError("a correspondence needs at least one equation")
        groups = self.ambient.groups()
        for p in eqs:
            if p.nvars != self.ambient.nvars:
                raise ValueError("equation uses the wrong variable count")
            if p.is_zero():
                raise ValueError("the zero polynomial is not an admissible equation")
            if len(p.group_degrees(groups)) != 1:
                raise ValueError(f"equation {p.to_string(factor_variable_names(self.ambient.dims))} is not multihomogeneous")
        object.__setattr__(self, "equations", eqs)

    @classmethod
    def from_strings(cls, dims: Sequence[int], equations: Sequence[str]) -> Correspondence:
        space = ProductSpace(dims)
        names = factor_variable_names(space.dims)
        return cls(space, tuple(parse_polynomial(s, names) for s in equations))

    @classmethod
    def diagonal_p1(cls) -> Correspondence:
        """The diagonal of P^1 x P^1."""
        return cls.from_strings([1, 1], ["X0_0*X1_1 - X0_1*X1_0"])

    def contains(self, x: ProjPoint, y: ProjPoint) -> bool:
        flat = x.flat() + y.flat()
        return all(p.evaluate(flat) == 0 for p in self.equations)

    def with_equations(self, extra: Sequence[MPoly]) -> Correspondence:
        return Correspondence(self.ambient, self.equations + tuple(extra))

    def equation_strings(self) -> list[str]:
        names = factor_variable_names(self.ambient.dims)
        return [p.to_string(names) for p in self.equations]


@dataclass(frozen=True)
class Comparison:
    f_multiplier: AlgebraicReal
    g_multiplier: AlgebraicReal
    equal: bool


@dataclass(frozen=True)
class DisjointnessCertificate:
    disjoint: bool
    f_multipliers: tuple[AlgebraicReal, ...]
    g_multipliers: tuple[AlgebraicReal, ...]
    comparisons: tuple[Comparison, ...]

    def __bool__(self) -> bool:
        return self.disjoint


def multiplier_sets_disjoint(f: Endomorphism, g: Endomorphism) -> DisjointnessCertificate:
    """Exact test that no multiplier >= 1 of f equals one of g."""
    mf = tuple(m for m in lyapunov_multipliers(f) if m >= 1)
    mg = tuple(m for m in lyapunov_multipliers(g) if m >= 1)
    comps = tuple(Comparison(a, b, algebraic_equal(a, b)) for a in mf for b in mg)
    return DisjointnessCertificate(not any(c.equal for c in comps), mf, mg, comps)


MODULI = (2**61 - 1, 2**31 - 1, 1_000_000_007)


@dataclass(frozen=True)
class ReturnSetReport:
    """``modular_from`` is the first index decided by a modular certificate, if any."""

    indices: tuple[int, ...]
    horizon: int
    last_checked: int
    stop_reason: str
    modular_from: int | None = None
    note: str = GENERIC_FINITENESS_NOTE


def _check_spaces(f: Endomorphism, g: Endomorphism, V: Correspondence) -> None:
    if V.ambient != f.space * g.space:
        raise ValueError(f"V lives on {V.ambient}, expected {f.space * g.space}")


def return_set(
    f: Endomorphism,
    g: Endomorphism,
    x: ProjPoint,
    y: ProjPoint,
    V: Correspondence,
    horizon: int,
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> ReturnSetReport:
    """Indices n <= horizon with (f^n(x), g^n(y)) in V.

    The digit budget applies to the pair: the sum of both point sizes.
    IndeterminacyError from either orbit propagates.
    """
    _check_spaces(f, g, V)
    a, b = ProjPoint.of(*x.coords), ProjPoint.of(*y.coords)
    hits = []
    last = 0
    for n in range(horizon + 1):
        if n > 0:
            a2, b2 = evaluate(f, a, n - 1), evaluate(g, b, n - 1)
            if point_size(a2.maxima())[1] + point_size(b2.maxima())[1] > digit_budget:
                return _modular_tail(f, g, a, b, V, n, horizon, hits)
            a, b = a2, b2
        last = n
        if V.contains(a, b):
            hits.append(n)
    return ReturnSetReport(tuple(hits), horizon, last, "completed")


def _modular_tail(f, g, a, b, V, start, horizon, hits) -> ReturnSetReport:
    """Continue from the last exact pair, excluding indices by modular certificates."""
    state = {m: (a.flat(), b.flat()) for m in MODULI}
    for n in range(start, horizon + 1):
        certified = False
        for m, (u, v) in state.items():
            u = [p.evaluate_mod(u, m) for block in f.blocks for p in block]
            v = [p.evaluate_mod(v, m) for block in g.blocks for p in block]
            state[m] = (u, v)
            if any(p.evaluate_mod(u + v, m) for p in V.equations):
                certified = True
        if not certified:
            return ReturnSetReport(tuple(hits), horizon, n - 1, "budget", start if n > start else None)
    return ReturnSetReport(tuple(hits), horizon, horizon, "completed", start)


@dataclass(frozen=True)
class SeparationReport:
    N: int
    values: tuple[float, ...]
    crossover: int | None
    decreasing_from_crossover: bool
    diverges: bool


def height_separation(
    f: Endomorphism,
    g: Endomorphism,
    x: ProjPoint,
    y: ProjPoint,
    N: int,
    horizon: int,
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> SeparationReport:
    """The sequence N h(f^n(x)) - h(g^n(y)) with the ample class sum h_j on each side.

    ``crossover`` is the first index where the sequence is negative.  It is
    flagged as diverging when it is strictly decreasing from the crossover on
    and ends below minus the starting magnitude.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    a, b = ProjPoint.of(*x.coords), ProjPoint.of(*y.coords)
    vals = []
    for n in range(horizon + 1):
        if n > 0:
            a2, b2 = evaluate(f, a, n - 1), evaluate(g, b, n - 1)
            if point_size(a2.maxima())[1] + point_size(b2.maxima())[1] > digit_budget:
                break
            a, b = a2, b2
        ha = sum(math.log(m) for m in a.maxima())
        hb = sum(math.log(m) for m in b.maxima())
        vals.append(N * ha - hb)
    cross = next((n for n, v in enumerate(vals) if v < 0), None)
    if cross is None:
        return SeparationReport(N, tuple(vals), None, False, False)
    tail = vals[cross:]
    dec = len(tail) >= 2 and all(q < p for p, q in zip(tail, tail[1:]))
    diverges = dec and tail[-1] < -max(1.0, abs(vals[0]))
    return SeparationReport(N, tuple(vals), cross, dec, diverges)
