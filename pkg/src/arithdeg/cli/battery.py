"""Acceptance battery: each check returns a machine-readable pass/fail record."""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from ..algebra import (
    AlgebraicReal,
    IntPoly,
    RationalMatrix,
    algebraic_equal,
    char_poly,
    distinct,
    multiset_contains,
    squarefree_part,
    sturm_isolate_real_roots,
)
from ..dml import Correspondence, height_separation, multiplier_sets_disjoint, return_set
from ..dynamics import (
    Endomorphism,
    ProjPoint,
    dynamical_degrees,
    intersection_growth_estimate,
    iterate,
    lyapunov_multipliers,
    multipliers_via_big_cone,
    power_map,
    product_system,
)
from ..geometry import CohomClass, ProductSpace
from ..heights import (
    INCONCLUSIVE,
    arithmetic_degree_estimate,
    canonical_height_check,
    canonical_limit,
    classify_alpha,
    growth_bound_check,
    northcott_enumerate,
    restricted_pullback,
)
from .cache import OrbitCache
from .systems import SystemDescription, load_corpus, load_corpus_system

SUITES = ("degrees", "heights", "theorem11", "dml", "all")
SEED = 20240601
DEGREE_STEP = 8
DEGREE_TOL = 0.05
BATTERY_TOL = 0.02
BATTERY_HORIZON = 15
BATTERY_BUDGET = 10**6
RESIDUAL_TOL = 1e-9
JORDAN_TOL = 1e-6
JORDAN_STEPS = 30


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    margin: float | None = None
    details: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict[str, Any]:
        return {"id": self.id, "name": self.name, "passed": self.passed, "margin": self.margin, "details": self.details}


@dataclass
class Context:
    cache: OrbitCache | None = None
    corpus: list[SystemDescription] = field(default_factory=list)

    def orbit(self, f: Endomorphism, x: ProjPoint, n_max: int, budget: int):
        if self.cache is None:
            return iterate(f, x, n_max, budget)
        return self.cache.orbit(f, x, n_max, budget)[0]


def _maps(ctx: Context) -> list[tuple[SystemDescription, Endomorphism]]:
    return [(s, s.endomorphism()) for s in ctx.corpus]


# degrees ------------------------------------------------------------------------------


def check_degree_growth(ctx: Context) -> CriterionResult:
    """Spectral radii against exact intersection-number growth at n = 8."""
    rows, worst = [], 0.0
    for s, f in _maps(ctx):
        lam = dynamical_degrees(f)
        for i in range(1, f.space.dim + 1):
            table = intersection_growth_estimate(f, i, DEGREE_STEP)
            est = table.two_step[-1]
            target = float(lam[i])
            rel = abs(est - target) / target
            worst = max(worst, rel)
            rows.append({"system": s.name, "i": i, "lambda": lam[i], "two_step": est, "root": table.roots[-1], "relative_error": rel})
    passed = len(ctx.corpus) >= 20 and worst <= DEGREE_TOL
    return CriterionResult(1, "degree oracle equivalence", passed, DEGREE_TOL - worst, {"systems": len(ctx.corpus), "rows": rows})


def check_multiplier_double_oracle(ctx: Context) -> CriterionResult:
    rows, ok = [], True
    for s, f in _maps(ctx):
        by_ratio = distinct(lyapunov_multipliers(f))
        by_cone = multipliers_via_big_cone(f)
        same = len(by_ratio) == len(by_cone) and all(any(algebraic_equal(a, b) for b in by_cone) for a in by_ratio)
        ok &= same
        rows.append({"system": s.name, "ratio_set": by_ratio, "big_cone_set": by_cone, "equal": same})
    return CriterionResult(2, "multiplier double oracle", ok, None, {"rows": rows})


def check_log_concavity(ctx: Context) -> CriterionResult:
    rows, ok = [], True
    for s, f in _maps(ctx):
        mu = lyapunov_multipliers(f)
        good = all(a >= b for a, b in zip(mu, mu[1:])) and mu[-1].sign() > 0
        ok &= good
        rows.append({"system": s.name, "multipliers": mu, "holds": good})
    return CriterionResult(3, "multipliers non-increasing and positive", ok, None, {"rows": rows})


def check_semiconjugacy(ctx: Context, pairs: int = 10) -> CriterionResult:
    pool = [(s, f) for s, f in _maps(ctx) if f.space.dim <= 2 and all(n == 1 for n in f.space.dims)]
    rng = random.Random(SEED)
    rows, ok = [], True
    for _ in range(pairs):
        (sa, fa), (sb, fb) = rng.choice(pool), rng.choice(pool)
        prod = product_system(fa, fb)
        mp = lyapunov_multipliers(prod)
        ma, mb = lyapunov_multipliers(fa), lyapunov_multipliers(fb)
        good = multiset_contains(mp, ma) and multiset_contains(mp, mb)
        ok &= good
        rows.append({"factors": [sa.name, sb.name], "product": mp, "first": ma, "second": mb, "contained": good})
    return CriterionResult(4, "factor multipliers embed in product multipliers", ok, None, {"rows": rows})


# arithmetic degree battery ---------------------------------------------------------------------


def _strictly_growing(orbit, k: int) -> bool:
    fh = orbit.factor_heights
    return all(all(fh[n + 1][j] > fh[n][j] for n in range(len(fh) - 1)) for j in range(k))


def alpha_battery_rows(ctx: Context) -> list[dict[str, Any]]:
    rows = []
    for s, f in _maps(ctx):
        if "alpha_battery" not in s.tags:
            continue
        orbit = ctx.orbit(f, s.point(), BATTERY_HORIZON, BATTERY_BUDGET)
        est = arithmetic_degree_estimate(orbit, [1] * f.space.k, BATTERY_TOL)
        mu = lyapunov_multipliers(f)
        cls = classify_alpha(est.estimate, mu, BATTERY_TOL)
        rows.append(
            {
                "system": s.name,
                "point": str(s.point()),
                "orbit_length": len(orbit),
                "stop_reason": orbit.stop_reason,
                "wandering": _strictly_growing(orbit, f.space.k),
                "estimate": est.estimate,
                "method": est.method,
                "converged": est.converged,
                "multipliers": mu,
                "lambda1": dynamical_degrees(f)[1],
                "classified": cls,
            }
        )
    return rows


def _named(rows, name):
    return next(r for r in rows if r["system"] == name)


def check_alpha_classification(ctx: Context, rows: list[dict[str, Any]]) -> CriterionResult:
    failures = []
    for r in rows:
        if not r["wandering"]:
            failures.append(f"{r['system']}: orbit not strictly growing in every factor")
        if r["classified"] == INCONCLUSIVE:
            failures.append(f"{r['system']}: inconclusive")
    for d in range(2, 7):
        name = f"p1_power_d{d}"
        if any(r["system"] == name for r in rows):
            r = _named(rows, name)
            if r["classified"] == INCONCLUSIVE or not r["classified"] == d or abs(r["estimate"] - d) > 1e-9:
                failures.append(f"{name}: expected exactly {d}")
    split = _named(rows, "split_23")
    split_err = abs(split["estimate"] - 3)
    if split_err > 1e-6:
        failures.append("split_23: estimate not within 1e-6 of 3")
    swap = _named(rows, "swap_twist_23")
    swap_err = abs(swap["estimate"] - math.sqrt(6)) / math.sqrt(6)
    if swap_err > BATTERY_TOL or swap["classified"] == INCONCLUSIVE or not algebraic_equal(swap["classified"], _sqrt6()):
        failures.append("swap_twist_23: not classified as sqrt(6)")
    passed = len(rows) >= 8 and not failures
    details = {"systems": len(rows), "split_23_error": split_err, "swap_twist_23_relative_error": swap_err, "failures": failures}
    return CriterionResult(5, "arithmetic degree lies in the multiplier set", passed, BATTERY_TOL - swap_err, details)


def _sqrt6() -> AlgebraicReal:
    return AlgebraicReal.from_isolating(IntPoly([-6, 0, 1]), Fraction(2), Fraction(3))


def check_alpha_below_lambda1(ctx: Context, rows: list[dict[str, Any]]) -> CriterionResult:
    worst = -math.inf
    out = []
    for r in rows:
        lam1 = float(r["lambda1"])
        slack = r["estimate"] - lam1 * (1 + BATTERY_TOL)
        worst = max(worst, slack)
        out.append({"system": r["system"], "estimate": r["estimate"], "lambda1": r["lambda1"], "holds": slack <= 0})
    return CriterionResult(6, "estimate at most lambda_1", worst <= 0, -worst, {"rows": out})


# heights -------------------------------------------------------------------------------


def in_residual_scope(lam: RationalMatrix) -> bool:
    """Lambda is diagonalizable over R with every eigenvalue >= 2."""
    p, _ = char_poly(lam)
    q = squarefree_part(p)
    roots = sturm_isolate_real_roots(q)
    if len(roots) != q.degree or any(r < 2 for r in roots):
        return False
    # diagonalizable iff the squarefree part of the char poly annihilates Lambda
    n = lam.nrows
    acc = RationalMatrix.zeros(n, n)
    for c in reversed(q.coeffs):
        acc = acc @ lam + RationalMatrix.identity(n).scale(c)
    return all(v == 0 for row in acc.rows for v in row)


def check_canonical(ctx: Context) -> CriterionResult:
    """Residual and boundedness on every corpus system whose Lambda on N^1 is in scope."""
    rows, ok, info = [], True, []
    worst = 0.0
    for s, f in _maps(ctx):
        basis = [CohomClass.hyperplane(f.space, j) for j in range(f.space.k)]
        lam = restricted_pullback(f, basis)
        if not in_residual_scope(lam):
            info.append({"system": s.name, "skipped": "Lambda not diagonalizable with real eigenvalues >= 2"})
            continue
        chk = canonical_height_check(f, s.point(), basis, 12, BATTERY_BUDGET)
        good = chk.residual < RESIDUAL_TOL and chk.bounded
        ok &= good
        worst = max(worst, chk.residual)
        rows.append(
            {
                "system": s.name,
                "values": chk.hat.values,
                "residual": chk.residual,
                "error_estimate": chk.hat.error,
                "n_used": chk.hat.n_used,
                "first_quarter_max": chk.first_quarter_max,
                "last_quarter_max": chk.last_quarter_max,
                "bounded": chk.bounded,
                "holds": good,
            }
        )
    jordan = jordan_residual()
    ok &= jordan < JORDAN_TOL
    failing = [r["system"] for r in rows if not r["holds"]]
    details = {"rows": rows, "failing": failing, "jordan_residual": jordan, "not_in_scope": info}
    return CriterionResult(7, "canonical height functional equation and boundedness", ok, RESIDUAL_TOL - worst, details)


def jordan_rows(steps: int = JORDAN_STEPS, seed: int = SEED) -> tuple[RationalMatrix, list[list[float]]]:
    """Heights obeying h_{n+1} = h_n Lambda + noise with a 2x2 Jordan block and |noise| <= 0.1."""
    lam = RationalMatrix([[2, 0], [1, 2]])
    rng = random.Random(seed)
    rows = [[0.7, 1.3]]
    for _ in range(steps + 1):
        a, b = rows[-1]
        rows.append([2 * a + b + rng.uniform(-0.1, 0.1), 2 * b + rng.uniform(-0.1, 0.1)])
    return lam, rows


def jordan_residual(steps: int = JORDAN_STEPS) -> float:
    lam, rows = jordan_rows(steps)
    v0 = canonical_limit(rows[: steps + 1], lam)[0]
    v1 = canonical_limit(rows[1 : steps + 2], lam)[0]
    pred = (v0[0] * 2 + v0[1], v0[1] * 2)
    return max(abs(v1[0] - pred[0]), abs(v1[1] - pred[1]))


def check_growth_bound(ctx: Context) -> CriterionResult:
    f = load_corpus_system("split_23").endomorphism()
    orbit = ctx.orbit(f, ProjPoint.of([2, 1], [2, 1]), BATTERY_HORIZON, BATTERY_BUDGET)
    good = growth_bound_check(orbit, [1, -1], IntPoly.from_roots([2, 3]))
    bad = growth_bound_check(orbit, [0, 1], IntPoly.from_roots([2]))
    passed = good.passed and not bad.passed
    details = {"true_annihilator": {"rho": good.rho, "margin": good.margin}, "wrong_annihilator": {"rho": bad.rho, "margin": bad.margin}}
    return CriterionResult(8, "growth bound from an annihilating polynomial", passed, good.margin, details)


def _brute_count(dims: tuple[int, ...], m: int) -> int:
    """Count points with max |coord| <= m per factor by a sieve over primitive vectors."""
    total = 1
    for n in dims:
        count = 0
        grid = [range(m, -m - 1, -1)] * (n + 1)
        for v in itertools.product(*grid):
            if any(v) and math.gcd(*v) == 1:
                count += 1
        total *= count // 2
    return total


def check_northcott(ctx: Context) -> CriterionResult:
    p1 = len(northcott_enumerate(ProductSpace([1]), math.log(2)))
    p1p1 = len(northcott_enumerate(ProductSpace([1, 1]), 0.0))
    recount = (_brute_count((1,), 2), _brute_count((1, 1), 1))
    passed = p1 == 8 and p1p1 == 16 and recount == (p1, p1p1)
    return CriterionResult(9, "Northcott enumeration counts", passed, None, {"p1_ln2": p1, "p1xp1_zero": p1p1, "recount": list(recount)})


# dml -----------------------------------------------------------------------------------------


def check_dml(ctx: Context) -> CriterionResult:
    f, g = power_map([1], [2], "square"), power_map([1], [3], "cube")
    x = ProjPoint.of([2, 1])
    rs = return_set(f, g, x, x, Correspondence.diagonal_p1(), 20, BATTERY_BUDGET)
    cert = multiplier_sets_disjoint(f, g)
    sep = height_separation(f, g, x, x, 1, 20, BATTERY_BUDGET)
    swap = load_corpus_system("swap_twist_23").endomorphism()
    cert6 = multiplier_sets_disjoint(swap, power_map([1], [6], "sextic"))
    minpolys = sorted({str(c.f_multiplier.minpoly) for c in cert6.comparisons} | {str(c.g_multiplier.minpoly) for c in cert6.comparisons})
    full = rs.stop_reason == "completed" and rs.last_checked == 20
    passed = rs.indices == (0,) and full and cert.disjoint and sep.decreasing_from_crossover and cert6.disjoint
    details = {
        "return_set": list(rs.indices),
        "last_checked": rs.last_checked,
        "stop_reason": rs.stop_reason,
        "modular_from": rs.modular_from,
        "disjoint_2_3": cert.disjoint,
        "separation": sep.values,
        "crossover": sep.crossover,
        "strictly_decreasing": sep.decreasing_from_crossover,
        "disjoint_swap_6": cert6.disjoint,
        "swap_6_minimal_polynomials": minpolys,
    }
    return CriterionResult(10, "dynamical Mordell-Lang experiment", passed, None, details)


# runner ------------------------------------------------------------------------------------


def _timed(fn: Callable[[], CriterionResult]) -> CriterionResult:
    t = time.perf_counter()
    r = fn()
    r.seconds = time.perf_counter() - t
    return r


def run_suite(name: str, cache: OrbitCache | None = None) -> list[CriterionResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ctx = Context(cache, load_corpus())
    out: list[CriterionResult] = []
    if name in ("degrees", "all"):
        out += [_timed(lambda c=c: c(ctx)) for c in (check_degree_growth, check_multiplier_double_oracle, check_log_concavity, check_semiconjugacy)]
    if name in ("theorem11", "all"):
        t = time.perf_counter()
        rows = alpha_battery_rows(ctx)
        spent = time.perf_counter() - t
        r5 = _timed(lambda: check_alpha_classification(ctx, rows))
        r5.seconds += spent
        r5.details["rows"] = rows
        out += [r5, _timed(lambda: check_alpha_below_lambda1(ctx, rows))]
    if name in ("heights", "all"):
        out += [_timed(lambda c=c: c(ctx)) for c in (check_canonical, check_growth_bound, check_northcott)]
    if name in ("dml", "all"):
        out.append(_timed(lambda: check_dml(ctx)))
    return out
