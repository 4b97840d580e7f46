"""Weil heights along orbits, canonical height vectors and arithmetic-degree estimates.

Heights use the natural logarithm.  The height attached to a divisor class
sum c_j h_j is the exact representative sum_j c_j log max|x_j|; every bounded
error term from the theory becomes a bounded-sequence check over a finite
horizon.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .algebra import AlgebraicReal, IntPoly, RationalMatrix, char_poly, sturm_isolate_real_roots
from .algebra.numbers import squarefree_part
from .algebra.roots import all_roots_outside_unit_disk
from .dynamics import Endomorphism, OrbitRecord, ProjPoint, iterate, pullback_on_N1
from .geometry import CohomClass, ProductSpace, is_big
from .polynomials import MPoly

INCONCLUSIVE = "inconclusive"
DENSITY_CAVEAT = (
    "Zariski density of the orbit is not verified; heights strictly increasing in each "
    "P^1 factor only certify density of one-dimensional factor orbits."
)

ClassLike = Union[CohomClass, Sequence]


def _coeffs(c: ClassLike) -> tuple[Fraction, ...]:
    return c.divisor_coefficients() if isinstance(c, CohomClass) else tuple(Fraction(x) for x in c)


def weil_height(x: ProjPoint) -> tuple[float, ...]:
    """Per-factor heights log max |coordinate| of a canonical point."""
    return tuple(math.log(m) for m in x.maxima())


def class_height(x: ProjPoint, c: ClassLike) -> float:
    return sum(float(a) * h for a, h in zip(_coeffs(c), weil_height(x)))


# basic height properties ----------------------------------------------------


@dataclass(frozen=True)
class LowerBoundReport:
    minimum: float
    asserted: bool
    holds: bool | None


def height_lower_bound_off_base_locus_check(c: ClassLike, orbit: OrbitRecord) -> LowerBoundReport:
    """Minimum of h_c along the orbit; the bound h_c >= 0 is asserted only for effective c."""
    coeffs = _coeffs(c)
    values = orbit.heights(coeffs)
    m = min(values)
    if all(a >= 0 for a in coeffs):
        return LowerBoundReport(m, True, m >= 0)
    return LowerBoundReport(m, False, None)


NORTHCOTT_BUDGET = 200_000


def _max_coordinate(bound: float) -> int:
    """Largest integer M >= 1 with log M <= bound (0 if none)."""
    if bound < 0:
        return 0
    m = max(1, int(math.floor(math.exp(bound))))
    while math.log(m + 1) <= bound:
        m += 1
    while m > 1 and math.log(m) > bound:
        m -= 1
    return m


def _primitive_vectors(n: int, m: int) -> list[tuple[int, ...]]:
    """Canonical representatives of P^n(Q) with max |coordinate| <= m."""
    out = []
    for v in itertools.product(range(-m, m + 1), repeat=n + 1):
        if not any(v) or math.gcd(*v) != 1:
            continue
        if next(x for x in v if x) < 0:
            continue
        out.append(v)
    return out


def northcott_enumerate(space: ProductSpace, bound: float) -> list[ProjPoint]:
    """All rational points whose every factor height is at most ``bound``."""
    if any(n > 2 for n in space.dims) or space.dim > 3:
        raise ValueError("enumeration supports P^1 and P^2 factors with total dimension <= 3")
    if bound > math.log(100):
        raise ValueError("bound too large for the enumeration budget")
    m = _max_coordinate(bound)
    if m == 0:
        return []
    estimate = 1
    for n in space.dims:
        estimate *= (2 * m + 1) ** (n + 1)
    if estimate > NORTHCOTT_BUDGET:
        raise ValueError(f"bound too large for the enumeration budget ({estimate} candidates)")
    per_factor = [_primitive_vectors(n, m) for n in space.dims]
    return [ProjPoint(tuple(vs)) for vs in itertools.product(*per_factor)]


@dataclass(frozen=True)
class DefectReport:
    values: tuple[float, ...]
    sup: float


def functoriality_defect(f: Endomorphism, c: ClassLike, orbit: OrbitRecord) -> DefectReport:
    """The sequence h_{f*c}(x_n) - h_c(x_{n+1}); bounded by the projection formula."""
    if len(orbit) < 2:
        raise ValueError("orbit needs at least two points")
    coeffs = _coeffs(c)
    pulled = f.pullback_class(CohomClass.divisor(f.space, coeffs)).divisor_coefficients()
    vals = tuple(orbit.height(n, pulled) - orbit.height(n + 1, coeffs) for n in range(len(orbit) - 1))
    return DefectReport(vals, max(abs(v) for v in vals))


# canonical heights -------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalHeightVector:
    basis: tuple[CohomClass, ...]
    lam: RationalMatrix
    values: tuple[float, ...]
    error: float
    n_used: int
    converged: bool
    errors: tuple[float, ...] = field(default=(), repr=False)

    @property
    def status(self) -> str:
        return "converged" if self.converged else "unconverged"


def restricted_pullback(f: Endomorphism, basis: Sequence[CohomClass]) -> RationalMatrix:
    """Lambda with (f*L_1, ..., f*L_r) = (L_1, ..., L_r) Lambda; rejects non-invariant spans."""
    k = f.space.k
    vecs = [b.divisor_coefficients() for b in basis]
    V = RationalMatrix([[v[i] for v in vecs] for i in range(k)], len(vecs))
    image = pullback_on_N1(f) @ V
    try:
        return V.solve_right(image)
    except ValueError as exc:
        raise ValueError(f"basis does not span an f*-invariant subspace: {exc}") from None


def check_expanding(lam: RationalMatrix) -> None:
    p, _ = char_poly(lam)
    if not all_roots_outside_unit_disk(p):
        raise ValueError("Lambda has an eigenvalue of modulus <= 1; canonical limit not defined")


def canonical_limit(rows: Sequence[Sequence[float]], lam: RationalMatrix, tol: float = 1e-12):
    """Limit of rows[n] Lambda^(-n).

    Returns (values, error, n_used, converged, error_history); the error is the
    sup-norm difference of the last two normalized iterates.
    """
    inv = lam.inverse()
    power = RationalMatrix.identity(lam.nrows)
    prev = None
    errors = []
    vals = None
    for n, h in enumerate(rows):
        vals = np.asarray(h, dtype=float) @ np.asarray(power.to_floats())
        if prev is not None:
            errors.append(float(np.max(np.abs(vals - prev))))
        prev = vals
        power = power @ inv
    if vals is None:
        raise ValueError("no heights supplied")
    err = errors[-1] if errors else math.inf
    return tuple(float(v) for v in vals), err, len(rows) - 1, err <= tol, tuple(errors)


def canonical_heights(
    f: Endomorphism,
    x: ProjPoint,
    basis: Sequence[CohomClass],
    n_max: int = 12,
    tol: float = 1e-9,
    digit_budget: int = 1_000_000,
    orbit: OrbitRecord | None = None,
) -> CanonicalHeightVector:
    """Canonical height vector of x for the f*-invariant span of ``basis``."""
    lam = restricted_pullback(f, basis)
    check_expanding(lam)
    if orbit is None:
        orbit = iterate(f, x, n_max, digit_budget)
    pts = orbit.points[: n_max + 1]
    coeffs = [b.divisor_coefficients() for b in basis]
    rows = [[orbit.height(n, c) for c in coeffs] for n in range(len(pts))]
    vals, err, n_used, ok, errs = canonical_limit(rows, lam, tol)
    return CanonicalHeightVector(tuple(basis), lam, vals, err, n_used, ok, errs)


@dataclass(frozen=True)
class CanonicalCheck:
    hat: CanonicalHeightVector
    hat_image: CanonicalHeightVector
    residual: float
    deviations: tuple[float, ...]
    first_quarter_max: float
    last_quarter_max: float
    bounded: bool


def canonical_height_check(
    f: Endomorphism,
    x: ProjPoint,
    basis: Sequence[CohomClass],
    n_used: int = 12,
    digit_budget: int = 1_000_000,
) -> CanonicalCheck:
    """Functional equation residual and |h_hat - h| along the orbit.

    The residual compares h_hat(f(x)) with h_hat(x) Lambda, both computed at the
    same depth n_used.  Deviations are |h_hat(x) Lambda^n - h(x_n)|.
    """
    orbit = iterate(f, x, n_used + 1, digit_budget)
    n = min(n_used, len(orbit) - 2)
    lam = restricted_pullback(f, basis)
    check_expanding(lam)
    coeffs = [b.divisor_coefficients() for b in basis]
    rows = [[orbit.height(m, c) for c in coeffs] for m in range(n + 2)]
    v0, e0, n0, ok0, errs0 = canonical_limit(rows[: n + 1], lam)
    v1, e1, n1, ok1, errs1 = canonical_limit(rows[1 : n + 2], lam)
    hat = CanonicalHeightVector(tuple(basis), lam, v0, e0, n0, ok0, errs0)
    hat_image = CanonicalHeightVector(tuple(basis), lam, v1, e1, n1, ok1, errs1)
    L = np.asarray(lam.to_floats())
    residual = float(np.max(np.abs(np.asarray(v1) - np.asarray(v0) @ L)))
    devs = []
    pred = np.asarray(v0)
    for m in range(n + 1):
        devs.append(float(np.max(np.abs(pred - np.asarray(rows[m])))))
        pred = pred @ L
    first, last = _quarter_maxima(devs)
    scale = max(1.0, max(abs(v) for r in rows for v in r))
    # float rounding in heights of size `scale` is below this floor
    floor = 1e-12 * scale
    return CanonicalCheck(hat, hat_image, residual, tuple(devs), first, last, last <= 2 * first + floor)


def _quarter_maxima(values: Sequence[float]) -> tuple[float, float]:
    q = max(1, len(values) // 4)
    return max(values[:q]), max(values[-q:])


# arithmetic degree -----------------------------------------------------------------


@dataclass(frozen=True)
class AlphaEstimate:
    """Estimators for the growth rate of heights along one orbit.

    ``heights`` is h+ = max(h_c, 1) of the class height.  ``sup_heights`` is the
    max over factors of c_j h_j, again floored at 1; it is comparable to h_c
    for ample c and makes the ratio estimator exact for split monomial maps.
    """

    coeffs: tuple[Fraction, ...]
    heights: tuple[float, ...]
    root: tuple[float, ...]
    ratio: tuple[float, ...]
    two_step: tuple[float, ...]
    sup_heights: tuple[float, ...]
    sup_ratio: tuple[float, ...]
    sup_two_step: tuple[float, ...]
    estimate: float
    method: str
    converged: bool
    bounded: bool
    caveat: str = DENSITY_CAVEAT


def _ratios(hs: Sequence[float]) -> tuple[float, ...]:
    return tuple(b / a for a, b in zip(hs, hs[1:]))


def _two_step(hs: Sequence[float]) -> tuple[float, ...]:
    return tuple(math.sqrt(hs[n + 2] / hs[n]) for n in range(len(hs) - 2))


def _agree(values: Sequence[float], tol: float) -> bool:
    if len(values) < 3:
        return False
    last = values[-3:]
    ref = last[-1]
    return all(abs(v - ref) <= tol * abs(ref) for v in last)


def arithmetic_degree_estimate(orbit: OrbitRecord, c: ClassLike, tol: float = 0.02) -> AlphaEstimate:
    """Root, ratio and two-step ratio estimators of alpha_f(x).

    The point estimate is the last ratio of the sup-height sequence when its
    last three ratios agree within ``tol``; otherwise the last two-step ratio,
    which absorbs period-2 oscillation from factor-swapping maps.
    """
    if len(orbit) < 4:
        raise ValueError("arithmetic degree estimation needs an orbit of length >= 4")
    coeffs = _coeffs(c)
    hs = tuple(max(h, 1.0) for h in orbit.heights(coeffs))
    root = tuple(hs[n] ** (1.0 / n) for n in range(1, len(hs)))
    sup = tuple(
        max(1.0, max(float(a) * h for a, h in zip(coeffs, orbit.factor_heights[n]))) for n in range(len(orbit))
    )
    ratio, two = _ratios(hs), _two_step(hs)
    sratio, stwo = _ratios(sup), _two_step(sup)
    bounded = all(h == hs[0] for h in hs)
    if bounded:
        return AlphaEstimate(coeffs, hs, root, ratio, two, sup, sratio, stwo, 1.0, "bounded", True, True)
    if _agree(sratio, tol):
        est, method, conv = sratio[-1], "ratio", True
    else:
        est, method, conv = stwo[-1], "two-step", _agree(stwo, tol)
    return AlphaEstimate(coeffs, hs, root, ratio, two, sup, sratio, stwo, est, method, conv, False)


def classify_alpha(estimate: float, multipliers: Sequence[AlgebraicReal], tol: float):
    """The multiplier within relative distance ``tol`` of the estimate, else INCONCLUSIVE.

    When several distinct multipliers are within tolerance the larger one wins,
    unless the estimate lies strictly between two of them.
    """
    pool = [m for m in multipliers if m >= 1]
    if not pool:
        raise ValueError("no multiplier >= 1: lambda_1 < 1 is impossible for a surjective endomorphism")
    close = []
    for m in pool:
        v = float(m)
        if abs(estimate - v) <= tol * v and not any(m == w for w in close):
            close.append(m)
    if not close:
        return INCONCLUSIVE
    if len(close) == 1:
        return close[0]
    vals = sorted(float(m) for m in close)
    if vals[0] < estimate < vals[-1]:
        return INCONCLUSIVE
    return max(close)


# growth bound ------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthBoundReport:
    rho: float
    degree: int
    constant: float
    passed: bool
    margin: float
    ratios: tuple[float, ...]


def max_root_modulus(p: IntPoly) -> float:
    """Largest |root| of p; exact isolation when all roots are real."""
    q = squarefree_part(p)
    real = sturm_isolate_real_roots(q)
    if len(real) == q.degree:
        return max(abs(float(r)) for r in real) if real else 0.0
    return float(np.max(np.abs(np.roots(list(reversed(q.coeffs))))))


def growth_bound_check(orbit: OrbitRecord, c: ClassLike, annihilator: IntPoly) -> GrowthBoundReport:
    """Fit C on the first third of the orbit, then require |h_c(x_n)| <= 2 C n^d rho^n.

    When rho < 1 the envelope is the constant 2 C instead.
    """
    if len(orbit) < 6:
        raise ValueError("growth bound check needs at least 6 orbit points")
    rho = max_root_modulus(annihilator)
    d = annihilator.degree
    coeffs = _coeffs(c)
    hs = [abs(h) for h in orbit.heights(coeffs)]

    def envelope(n: int) -> float:
        return 1.0 if rho < 1 else max(n, 1) ** d * rho**n

    third = max(1, len(hs) // 3)
    C = max(hs[n] / envelope(n) for n in range(third))
    ratios = tuple(hs[n] / (2 * C * envelope(n)) if C > 0 else (0.0 if hs[n] == 0 else math.inf) for n in range(third, len(hs)))
    worst = max(ratios) if ratios else 0.0
    return GrowthBoundReport(rho, d, C, worst <= 1.0, 1.0 - worst, ratios)


# big height subsequence ----------------------------------------------------------------


@dataclass(frozen=True)
class BigHeightReport:
    indices: tuple[int, ...]
    roots: tuple[float, ...]
    heights: tuple[float, ...]
    record_breaking: bool
    verdict: str


def section_class(space: ProductSpace, section: MPoly) -> CohomClass:
    degs = section.group_degrees(space.groups())
    if len(degs) != 1:
        raise ValueError("section is not multihomogeneous")
    return CohomClass.divisor(space, next(iter(degs)))


def big_height_subsequence(
    f: Endomorphism, orbit: OrbitRecord, big_class: CohomClass, effective_part: MPoly
) -> BigHeightReport:
    """Orbit indices off the support of E, with h+_B(x_n)^(1/n) along them.

    ``big_class`` must equal an ample class plus the class of ``effective_part``.
    The unboundedness conclusion is tested heuristically: the heights of the
    selected subsequence must keep setting new records over the horizon.
    """
    if not is_big(big_class):
        raise ValueError("class is not big")
    ample_part = big_class - section_class(f.space, effective_part)
    if ample_part.is_zero() or not all(a > 0 for a in ample_part.divisor_coefficients()):
        raise ValueError("big_class minus the class of the section is not ample")
    coeffs = big_class.divisor_coefficients()
    idx = tuple(n for n, p in enumerate(orbit.points) if effective_part.evaluate(p.flat()) != 0)
    if not idx:
        return BigHeightReport((), (), (), False, "all orbit points lie on the support (orbit not dense)")
    hs = tuple(max(orbit.height(n, coeffs), 1.0) for n in idx)
    roots = tuple(h ** (1.0 / n) for n, h in zip(idx, hs) if n > 0)
    tail = hs[len(hs) // 2 :] if len(hs) > 1 else hs
    records = len(hs) > 1 and all(b > a for a, b in zip(tail, tail[1:])) and hs[-1] > max(hs[:-1])
    verdict = "consistent with density" if records else "inconsistent with density (heights bounded)"
    return BigHeightReport(idx, roots, hs, records, verdict)
