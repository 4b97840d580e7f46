"""Endomorphisms of products of projective spaces, orbits, and dynamical degrees."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

import gmpy2

from .algebra import (
    AlgebraicReal,
    IntPoly,
    RationalMatrix,
    algebraic_ratio,
    distinct,
    image_minus_scalar,
    real_eigenvalues,
    spectral_radius_nonneg,
    subspace_meets_open_orthant,
)
from .algebra.poly import sylvester_resultant
from .geometry import CohomClass, ProductSpace, class_vector, graded_basis, intersection_number, ring_multiply
from .polynomials import MPoly, factor_variable_names, parse_polynomial

DEFAULT_DIGIT_BUDGET = 1_000_000
DEFAULT_HORIZON = 15


class InvalidEndomorphism(ValueError):
    pass


class IndeterminacyError(ArithmeticError):
    """All components of a block vanish at a point: the map is not defined there."""

    def __init__(self, index: int, block: int, partial: OrbitRecord | None = None):
        self.index = index
        self.block = block
        self.partial = partial
        super().__init__(f"indeterminacy at orbit index {index} (block {block})")


# points ---------------------------------------------------------------------


def vector_gcd(v: Sequence[int]) -> int:
    """gcd of the entries, smallest first so that a unit entry ends the work early."""
    g = 0
    for x in sorted((abs(x) for x in v if x), key=lambda a: a.bit_length()):
        g = int(gmpy2.gcd(g, x)) if g else x
        if g == 1:
            break
    return g


def _canonical_vector(v: Sequence[int]) -> tuple[int, ...]:
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("projective coordinates cannot all vanish")
    first = next(x for x in v if x)
    if first < 0:
        g = -g
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class ProjPoint:
    """Canonical integer coordinates, one primitive vector per factor."""

    coords: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, *factors: Sequence) -> ProjPoint:
        out = []
        for v in factors:
            fr = [Fraction(x) for x in v]
            den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in fr), 1)
            out.append(_canonical_vector([int(x * den) for x in fr]))
        return cls(tuple(out))

    def is_canonical(self) -> bool:
        return all(v and vector_gcd(v) == 1 and next(x for x in v if x) > 0 for v in self.coords)

    def flat(self) -> list[int]:
        return [x for v in self.coords for x in v]

    def maxima(self) -> tuple[int, ...]:
        return tuple(max(abs(x) for x in v) for v in self.coords)

    def on(self, space: ProductSpace) -> bool:
        return len(self.coords) == space.k and all(len(v) == n + 1 for v, n in zip(self.coords, space.dims))

    def __str__(self) -> str:
        parts = ["[" + ":".join(str(x) for x in v) + "]" for v in self.coords]
        return parts[0] if len(parts) == 1 else "(" + ", ".join(parts) + ")"


def decimal_digits(x: int) -> int:
    """Number of decimal digits of |x| (1 for zero) without a decimal conversion."""
    x = abs(x)
    if x < 10**15:
        return len(str(x))
    v = math.log10(x)
    k = math.floor(v)
    frac = v - k
    if 1e-9 < frac < 1 - 1e-9:
        return k + 1
    # too close to a power of ten for the float estimate
    k = round(v)
    return k + 1 if x >= 10**k else k


# endomorphisms --------------------------------------------------------------


def _binary_resultant(f: MPoly, g: MPoly, xi: int, yi: int, d: int) -> int:
    """Homogeneous resultant of two binary forms of degree d in variables xi, yi."""

    def coeffs(p: MPoly) -> list[IntPoly]:
        cs = [0] * (d + 1)
        for e, c in p.terms:
            cs[e[xi]] = int(c)
        return [IntPoly([c]) for c in cs]

    r = sylvester_resultant(coeffs(f), coeffs(g))
    return r.coeffs[0] if r.coeffs else 0


@dataclass(frozen=True)
class Endomorphism:
    space: ProductSpace
    blocks: tuple[tuple[MPoly, ...], ...]
    name: str = field(default="", compare=False)
    check_resultant: bool = field(default=True, compare=False)

    def __post_init__(self):
        sp = self.space
        if len(self.blocks) != sp.k:
            raise InvalidEndomorphism(f"expected {sp.k} blocks, got {len(self.blocks)}")
        groups = sp.groups()
        scaled = []
        rows = []
        for j, (block, n) in enumerate(zip(self.blocks, sp.dims)):
            block = tuple(block)
            if len(block) != n + 1:
                raise InvalidEndomorphism(f"block {j} needs {n + 1} components, got {len(block)}")
            if any(p.nvars != sp.nvars for p in block):
                raise InvalidEndomorphism(f"block {j} uses the wrong variable count")
            if all(p.is_zero() for p in block):
                raise InvalidEndomorphism(f"block {j} is identically zero")
            degs = set()
            for p in block:
                degs |= p.group_degrees(groups)
            if len(degs) != 1:
                raise InvalidEndomorphism(f"block {j} is not multihomogeneous of a single multidegree")
            row = degs.pop()
            if not any(row):
                raise InvalidEndomorphism(f"block {j} is constant")
            rows.append(row)
            den = reduce(
                lambda a, b: a * b // math.gcd(a, b), (c.denominator for p in block for _, c in p.terms), 1
            )
            scaled.append(tuple(p * den for p in block))
        object.__setattr__(self, "blocks", tuple(scaled))
        object.__setattr__(self, "_degree_rows", tuple(rows))
        if self.topological_degree() <= 0:
            raise InvalidEndomorphism("top-degree pullback vanishes: the map is not surjective")
        if self.check_resultant:
            self._check_binary_blocks()

    def _check_binary_blocks(self) -> None:
        groups = self.space.groups()
        for j, block in enumerate(self.blocks):
            if self.space.dims[j] != 1:
                continue
            used = set().union(*(p.variables_used() for p in block))
            for l, g in enumerate(groups):
                if used <= set(g) and self.space.dims[l] == 1:
                    d = self.degree_matrix[j][l]
                    if _binary_resultant(block[0], block[1], g[0], g[1], d) == 0:
                        raise InvalidEndomorphism(f"block {j} has a common zero (resultant vanishes)")

    @classmethod
    def from_strings(
        cls, dims: Sequence[int], blocks: Sequence[Sequence[str]], name: str = "", check_resultant: bool = True
    ) -> Endomorphism:
        space = ProductSpace(dims)
        names = factor_variable_names(space.dims)
        parsed = tuple(tuple(parse_polynomial(s, names) for s in b) for b in blocks)
        return cls(space, parsed, name, check_resultant)

    @property
    def degree_matrix(self) -> tuple[tuple[int, ...], ...]:
        """D[j][l] = degree of block j in the variables of factor l."""
        return self._degree_rows  # type: ignore[attr-defined]

    def block_strings(self) -> list[list[str]]:
        names = factor_variable_names(self.space.dims)
        return [[p.to_string(names) for p in b] for b in self.blocks]

    def digest(self) -> str:
        payload = json.dumps({"space": list(self.space.dims), "blocks": self.block_strings()}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # cohomology ----------------------------------------------------------------

    @cached_property
    def _pulled_hyperplanes(self) -> tuple[CohomClass, ...]:
        return tuple(CohomClass.divisor(self.space, row) for row in self.degree_matrix)

    def pullback_class(self, c: CohomClass) -> CohomClass:
        """Apply the ring endomorphism h_j -> sum_l D[j][l] h_l."""
        out = CohomClass.zero(self.space, c.degree)
        hs = self._pulled_hyperplanes
        for e, coef in c.terms.items():
            term = CohomClass.one(self.space).scale(coef)
            for j, a in enumerate(e):
                for _ in range(a):
                    term = ring_multiply(term, hs[j])
            out = out + term
        return out

    def topological_degree(self) -> int:
        top = CohomClass(self.space, self.space.dim, {self.space.dims: 1})
        return int(intersection_number(self.pullback_class(top)))

    def __str__(self) -> str:
        blocks = "; ".join("[" + " : ".join(b) + "]" for b in self.block_strings())
        return f"{self.name or 'f'} on {self.space}: {blocks}"


def pullback_on_N1(f: Endomorphism) -> RationalMatrix:
    """Matrix of f* on N^1 in the basis (h_1..h_k), row-vector convention.

    Column j holds the coordinates of f* h_j, so (f*h_1, ..., f*h_k) = (h_1, ..., h_k) M.
    """
    d = f.degree_matrix
    k = f.space.k
    return RationalMatrix([[d[j][l] for j in range(k)] for l in range(k)], k)


def pullback_on_graded(f: Endomorphism, i: int) -> RationalMatrix:
    basis = graded_basis(f.space, i)
    cols = []
    for e in basis:
        img = f.pullback_class(CohomClass(f.space, i, {e: 1}))
        cols.append(class_vector(img, basis))
    n = len(basis)
    return RationalMatrix([[cols[c][r] for c in range(n)] for r in range(n)], n)


def dynamical_degree(f: Endomorphism, i: int) -> AlgebraicReal:
    if not 0 <= i <= f.space.dim:
        raise ValueError(f"degree index {i} outside 0..{f.space.dim}")
    return spectral_radius_nonneg(pullback_on_graded(f, i))


def dynamical_degrees(f: Endomorphism) -> list[AlgebraicReal]:
    return [dynamical_degree(f, i) for i in range(f.space.dim + 1)]


def lyapunov_multipliers(f: Endomorphism) -> list[AlgebraicReal]:
    lam = dynamical_degrees(f)
    return [algebraic_ratio(lam[i], lam[i - 1]) for i in range(1, len(lam))]


def misses_big_cone(f: Endomorphism, alpha: AlgebraicReal) -> bool:
    """True iff Im(f* - alpha) avoids the big cone (open positive orthant)."""
    cols = image_minus_scalar(pullback_on_N1(f), alpha)
    return not subspace_meets_open_orthant(cols)


def multipliers_via_big_cone(
    f: Endomorphism, candidates: Sequence[AlgebraicReal] | None = None
) -> list[AlgebraicReal]:
    """Those candidates alpha with Im(f* - alpha) disjoint from Big(X).

    Default candidates: the real eigenvalues of f* on N^1.
    """
    if candidates is None:
        candidates = real_eigenvalues(pullback_on_N1(f))
    return [a for a in distinct(candidates) if misses_big_cone(f, a)]


# evaluation and orbits ---------------------------------------------------------


def evaluate(f: Endomorphism, x: ProjPoint, index: int = 0) -> ProjPoint:
    if not x.on(f.space):
        raise ValueError(f"point {x} does not lie on {f.space}")
    flat = x.flat()
    out = []
    for j, block in enumerate(f.blocks):
        vals = [p.evaluate(flat) for p in block]
        if not any(vals):
            raise IndeterminacyError(index, j)
        out.append(_canonical_vector(vals))
    return ProjPoint(tuple(out))


def point_size(maxima: Sequence[int]) -> tuple[tuple[int, ...], int]:
    digits = tuple(decimal_digits(m) for m in maxima)
    return digits, sum(digits)


@dataclass(frozen=True)
class OrbitRecord:
    """Forward orbit x, f(x), ... with the per-factor maximal coordinates.

    ``factor_heights[n][j]`` is log max |coordinate of factor j at step n|.
    """

    system_digest: str
    points: tuple[ProjPoint, ...]
    stop_reason: str
    n_max: int = DEFAULT_HORIZON
    digit_budget: int = DEFAULT_DIGIT_BUDGET
    failed_index: int | None = None

    @cached_property
    def maxima(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.maxima() for p in self.points)

    @cached_property
    def factor_heights(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(math.log(m) for m in row) for row in self.maxima)

    @cached_property
    def digits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(point_size(row)[0] for row in self.maxima)

    def __len__(self) -> int:
        return len(self.points)

    def height(self, n: int, c: CohomClass | Sequence) -> float:
        coeffs = c.divisor_coefficients() if isinstance(c, CohomClass) else c
        return sum(float(a) * h for a, h in zip(coeffs, self.factor_heights[n]))

    def heights(self, c: CohomClass | Sequence) -> list[float]:
        return [self.height(n, c) for n in range(len(self.points))]


def iterate(
    f: Endomorphism,
    x: ProjPoint,
    n_max: int = DEFAULT_HORIZON,
    digit_budget: int = DEFAULT_DIGIT_BUDGET,
) -> OrbitRecord:
    """Orbit up to index n_max, stopping before a point exceeds the digit budget.

    The size of a point is the sum over factors of the decimal digit count
    of its largest coordinate.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    digest = f.digest()
    if not x.on(f.space):
        raise ValueError(f"point {x} does not lie on {f.space}")
    x = ProjPoint.of(*x.coords)
    points = [x]
    reason = "completed"
    for n in range(1, n_max + 1):
        try:
            nxt = evaluate(f, points[-1], index=n - 1)
        except IndeterminacyError as exc:
            partial = OrbitRecord(digest, tuple(points), "indeterminacy", n_max, digit_budget, n - 1)
            raise IndeterminacyError(n - 1, exc.block, partial) from None
        if point_size(nxt.maxima())[1] > digit_budget:
            reason = "budget"
            break
        points.append(nxt)
    return OrbitRecord(digest, tuple(points), reason, n_max, digit_budget)


# constructions ------------------------------------------------------------------


def product_system(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    space = f.space * g.space
    nv = space.nvars
    blocks = [tuple(p.embed(nv, 0) for p in b) for b in f.blocks]
    blocks += [tuple(p.embed(nv, f.space.nvars) for p in b) for b in g.blocks]
    name = f"{f.name or 'f'} x {g.name or 'g'}"
    return Endomorphism(space, tuple(blocks), name)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """The endomorphism f o g (apply g first)."""
    if f.space != g.space:
        raise ValueError("composition needs a common space")
    values = [p for b in g.blocks for p in b]
    blocks = tuple(tuple(p.substitute(values) for p in b) for b in f.blocks)
    return Endomorphism(f.space, blocks, f"{f.name or 'f'} o {g.name or 'g'}")


def identity_map(space: ProductSpace) -> Endomorphism:
    nv = space.nvars
    blocks = tuple(tuple(MPoly.variable(nv, i) for i in g) for g in space.groups())
    return Endomorphism(space, blocks, "identity")


def power_map(dims: Sequence[int], degrees: Sequence[int], name: str = "") -> Endomorphism:
    """Coordinatewise power map, factor j raised to degrees[j]."""
    space = ProductSpace(dims)
    nv = space.nvars
    blocks = tuple(
        tuple(MPoly.variable(nv, i) ** d for i in g) for g, d in zip(space.groups(), degrees)
    )
    return Endomorphism(space, blocks, name or f"power{tuple(degrees)}")


# growth cross-check ---------------------------------------------------------------


@dataclass(frozen=True)
class GrowthTable:
    i: int
    values: tuple[Fraction, ...]

    @property
    def roots(self) -> list[float]:
        """n-th roots of ((f^n)* L^i . L^(d-i)), n = 1..n_max."""
        return [float(v) ** (1.0 / n) if v > 0 else 0.0 for n, v in enumerate(self.values) if n > 0]

    @property
    def two_step(self) -> list[float]:
        """sqrt(I_n / I_(n-2)) for n >= 2: cancels the constant and period-2 factors."""
        out = []
        for n in range(2, len(self.values)):
            a, b = self.values[n], self.values[n - 2]
            out.append(math.sqrt(float(a / b)) if b > 0 else 0.0)
        return out


def intersection_growth_estimate(f: Endomorphism, i: int, n_max: int) -> GrowthTable:
    """Exact ((f^n)* L^i . L^(d-i)) for n = 0..n_max, with L = sum h_j."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    d = f.space.dim
    if not 0 <= i <= d:
        raise ValueError(f"degree index {i} outside 0..{d}")
    L = CohomClass.ample(f.space)
    cls = L**i
    comp = L ** (d - i)
    vals = []
    for _ in range(n_max + 1):
        vals.append(intersection_number(ring_multiply(cls, comp)))
        cls = f.pullback_class(cls)
    return GrowthTable(i, tuple(vals))
