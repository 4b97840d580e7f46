import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import totient

from arithdeg.algebra import AlgebraicReal, IntPoly, RationalMatrix
from arithdeg.dynamics import Endomorphism, ProjPoint, identity_map, iterate, power_map
from arithdeg.geometry import CohomClass, ProductSpace
from arithdeg.heights import (
    INCONCLUSIVE,
    arithmetic_degree_estimate,
    big_height_subsequence,
    canonical_height_check,
    canonical_heights,
    canonical_limit,
    class_height,
    classify_alpha,
    functoriality_defect,
    growth_bound_check,
    height_lower_bound_off_base_locus_check,
    northcott_enumerate,
    restricted_pullback,
    weil_height,
)
from arithdeg.polynomials import factor_variable_names, parse_polynomial

LN2 = math.log(2)
SQRT6 = AlgebraicReal.from_isolating(IntPoly([-6, 0, 1]), 2, 3)
P1 = ProductSpace([1])
P1P1 = ProductSpace([1, 1])


def pt(*coords):
    return ProjPoint.of(*coords)


# Weil heights ---------------------------------------------------------------


def test_weil_height_examples():
    assert weil_height(pt([2, 1])) == (LN2,)
    assert weil_height(pt([0, 1])) == (0.0,)
    x = pt([4, 1], [27, 1])
    assert class_height(x, [1, 1]) == pytest.approx(math.log(4) + math.log(27), abs=1e-15)


def test_lower_bound_report(split23):
    orbit = iterate(split23, pt([2, 1], [3, 1]), 6)
    r = height_lower_bound_off_base_locus_check([1, 1], orbit)
    assert r.asserted and r.holds and r.minimum >= 0
    r = height_lower_bound_off_base_locus_check(CohomClass.hyperplane(P1P1, 0), orbit)
    assert r.holds
    r = height_lower_bound_off_base_locus_check([1, -1], orbit)
    assert not r.asserted and r.holds is None


# Northcott --------------------------------------------------------------------------


def _points_strings(pts):
    return sorted(tuple(p.coords[0]) for p in pts)


def test_northcott_examples():
    got = _points_strings(northcott_enumerate(P1, LN2))
    assert got == sorted([(0, 1), (1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (2, 1), (2, -1)])
    assert _points_strings(northcott_enumerate(P1, 0.0)) == sorted([(0, 1), (1, 0), (1, 1), (1, -1)])
    assert len(northcott_enumerate(P1P1, 0.0)) == 16
    assert northcott_enumerate(P1, -0.5) == []


def test_northcott_rejects_large_inputs():
    with pytest.raises(ValueError):
        northcott_enumerate(P1, math.log(101))
    with pytest.raises(ValueError):
        northcott_enumerate(ProductSpace([3]), 0.0)
    with pytest.raises(ValueError):
        northcott_enumerate(ProductSpace([2, 2]), 0.0)


def _p1_count(m):
    # points of P^1(Q) with height exactly log k number 4 phi(k) for k >= 2
    return 0 if m == 0 else 4 + 4 * sum(int(totient(k)) for k in range(2, m + 1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 12), st.integers(1, 2))
def test_northcott_count_matches_totient_formula(m, k):
    m = m if k == 1 else min(m, 6)
    bound = math.log(m) if m else -1.0
    if m == 1:
        bound = 0.0
    assert len(northcott_enumerate(ProductSpace([1] * k), bound)) == _p1_count(m) ** k


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 4))
def test_northcott_p2_recount(m):
    # recount by scanning the largest coordinate value first
    pts = northcott_enumerate(ProductSpace([2]), math.log(m))
    seen = set()
    for top in range(m, 0, -1):
        for v in ((a, b, c) for a in range(-top, top + 1) for b in range(-top, top + 1) for c in range(-top, top + 1)):
            if max(map(abs, v)) == top and math.gcd(*v) == 1:
                seen.add(tuple(x * (1 if next(y for y in v if y) > 0 else -1) for x in v))
    assert len(pts) == len(seen)
    assert all(p.is_canonical() and max(map(abs, p.coords[0])) <= m for p in pts)


# functoriality --------------------------------------------------------------------------


def test_functoriality_defect_examples(square_p1):
    d = functoriality_defect(square_p1, [1], iterate(square_p1, pt([3, 2]), 8))
    assert d.sup == 0 and set(d.values) == {0.0}
    ident = identity_map(P1P1)
    assert functoriality_defect(ident, [1, 2], iterate(ident, pt([3, 1], [5, 7]), 5)).sup == 0
    with pytest.raises(ValueError):
        functoriality_defect(square_p1, [1], iterate(square_p1, pt([2, 1]), 0))


def test_functoriality_defect_sum_of_squares():
    f = Endomorphism.from_strings([1], [["X0_0^2 + X0_1^2", "X0_0*X0_1"]])
    d = functoriality_defect(f, [1], iterate(f, pt([2, 1]), 10))
    # gcd(a^2+b^2, ab) = 1 for coprime a, b, and max <= a^2+b^2 <= 2 max^2
    assert len(d.values) == 10
    assert all(-LN2 - 1e-9 <= v <= 1e-9 for v in d.values)
    assert d.sup <= LN2 + 1e-9


# canonical heights ----------------------------------------------------------------------


def test_canonical_examples(square_p1, split23):
    h = canonical_heights(square_p1, pt([2, 1]), [CohomClass.hyperplane(P1, 0)], n_max=10)
    assert h.values[0] == pytest.approx(LN2, abs=1e-15) and h.converged
    assert canonical_heights(square_p1, pt([1, 1]), [CohomClass.hyperplane(P1, 0)]).values == (0.0,)
    basis = [CohomClass.hyperplane(P1P1, 0), CohomClass.hyperplane(P1P1, 1)]
    h = canonical_heights(split23, pt([2, 1], [2, 1]), basis, n_max=10)
    assert h.lam == RationalMatrix([[2, 0], [0, 3]])
    assert h.values == pytest.approx((LN2, LN2), abs=1e-12)


def test_canonical_preconditions(split23):
    with pytest.raises(ValueError, match="invariant"):
        canonical_heights(split23, pt([2, 1], [2, 1]), [CohomClass.divisor(P1P1, [1, 1])])
    ident = identity_map(P1)
    with pytest.raises(ValueError, match="modulus"):
        canonical_heights(ident, pt([2, 1]), [CohomClass.hyperplane(P1, 0)])


def test_restricted_pullback_on_swap(swap23):
    basis = [CohomClass.hyperplane(P1P1, 0), CohomClass.hyperplane(P1P1, 1)]
    lam = restricted_pullback(swap23, basis)
    assert sorted(lam.to_floats()[0] + lam.to_floats()[1]) == [0, 0, 2, 3]


def test_canonical_functional_equation_on_split(split23):
    basis = [CohomClass.hyperplane(P1P1, 0), CohomClass.hyperplane(P1P1, 1)]
    chk = canonical_height_check(split23, pt([2, 1], [3, 1]), basis, n_used=12)
    assert chk.residual < 1e-9 and chk.bounded


def test_canonical_residual_decays_for_non_monomial_map():
    # h(f(x)) = 2 h(x) + delta with delta in [0, log 2], so the truncation error halves per step
    f = Endomorphism.from_strings([1], [["X0_0^2 + X0_1^2", "X0_0*X0_1"]])
    basis = [CohomClass.hyperplane(P1, 0)]
    res = [canonical_height_check(f, pt([2, 1]), basis, n_used=n).residual for n in (4, 6, 8, 10, 12)]
    assert all(0 < b < 0.3 * a for a, b in zip(res, res[1:]))
    assert res[-1] < LN2 / 2**12


def _jordan_rows(steps, seed):
    rng = random.Random(seed)
    rows = [[0.7, 1.3]]
    noise = []
    for _ in range(steps):
        e = [rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)]
        a, b = rows[-1]
        rows.append([2 * a + b + e[0], 2 * b + e[1]])
        noise.append(e)
    return rows, noise


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_jordan_block_limit(seed):
    lam = RationalMatrix([[2, 0], [1, 2]])
    rows, noise = _jordan_rows(31, seed)
    vals, err, n_used, ok, errors = canonical_limit(rows, lam)
    # closed form: h_hat = h_0 + sum_n e_n Lambda^-(n+1), summed to a long tail of zero noise
    L = np.array([[2.0, 0.0], [1.0, 2.0]])
    inv = np.linalg.inv(L)
    oracle = np.array(rows[0])
    p = inv.copy()
    for e in noise:
        oracle = oracle + np.array(e) @ p
        p = p @ inv
    assert n_used == 31
    assert np.max(np.abs(np.array(vals) - oracle)) < 1e-6
    assert err < 1e-6
    v1 = canonical_limit(rows[1:], lam)[0]
    assert np.max(np.abs(np.array(v1) - np.array(vals) @ L)) < 1e-6


# arithmetic degree ------------------------------------------------------------------


def test_alpha_power_map(square_p1):
    est = arithmetic_degree_estimate(iterate(square_p1, pt([2, 1]), 12), [1])
    assert set(est.sup_ratio[1:]) == {2.0}
    assert est.estimate == 2.0 and est.converged and not est.bounded


def test_alpha_identity():
    ident = identity_map(P1)
    est = arithmetic_degree_estimate(iterate(ident, pt([5, 3]), 6), [1])
    assert est.estimate == 1.0 and est.bounded and est.method == "bounded"


def test_alpha_swap_twist(swap23):
    est = arithmetic_degree_estimate(iterate(swap23, pt([2, 1], [3, 1]), 12), [1, 1])
    assert abs(est.two_step[-1] - math.sqrt(6)) <= 0.02 * math.sqrt(6)
    assert classify_alpha(est.estimate, [SQRT6, SQRT6], 0.02) == SQRT6


def test_alpha_needs_four_points(square_p1):
    with pytest.raises(ValueError):
        arithmetic_degree_estimate(iterate(square_p1, pt([2, 1]), 2), [1])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_root_and_ratio_gap_shrinks(d):
    f = power_map([1], [d])
    est = arithmetic_degree_estimate(iterate(f, pt([3, 2]), 10), [1])
    gaps = [abs(r - q) for r, q in zip(est.root[1:], est.ratio[1:])]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_classify_examples():
    three, two = AlgebraicReal.from_rational(3), AlgebraicReal.from_rational(2)
    assert classify_alpha(2.9997, [three, two], 0.01) == three
    assert classify_alpha(2.44, [SQRT6, SQRT6], 0.01) == SQRT6
    assert classify_alpha(2.5, [three, two], 0.01) == INCONCLUSIVE
    with pytest.raises(ValueError):
        classify_alpha(0.5, [AlgebraicReal.from_rational("1/2")], 0.01)


def test_classify_tie_break():
    a, b = AlgebraicReal.from_rational(2), AlgebraicReal.from_rational("201/100")
    assert classify_alpha(2.02, [a, b], 0.02) == b
    assert classify_alpha(2.005, [a, b], 0.02) == INCONCLUSIVE


# growth bound -----------------------------------------------------------------------


def test_growth_bound_examples(split23):
    orbit = iterate(split23, pt([2, 1], [2, 1]), 12)
    good = IntPoly([6, -5, 1])
    assert growth_bound_check(orbit, [1, -1], good).passed
    wrong = growth_bound_check(orbit, [0, 1], IntPoly([-2, 1]))
    assert not wrong.passed and wrong.margin < 0
    ident = identity_map(P1)
    assert growth_bound_check(iterate(ident, pt([7, 2]), 8), [1], IntPoly([-1, 1])).passed
    with pytest.raises(ValueError):
        growth_bound_check(iterate(ident, pt([7, 2]), 3), [1], IntPoly([-1, 1]))


# big heights -----------------------------------------------------------------------


def _section(text, dims=(1, 1)):
    return parse_polynomial(text, factor_variable_names(dims))


def test_big_height_subsequence_examples(split23):
    B = CohomClass.divisor(P1P1, [2, 1])
    orbit = iterate(split23, pt([2, 1], [2, 1]), 12)
    r = big_height_subsequence(split23, orbit, B, _section("X0_0"))
    assert r.indices == tuple(range(13)) and r.record_breaking
    assert r.verdict == "consistent with density"
    assert abs(r.roots[-1] - 3) < abs(r.roots[0] - 3)

    stuck = iterate(split23, pt([0, 1], [2, 1]), 6)
    r = big_height_subsequence(split23, stuck, B, _section("X0_0"))
    assert r.indices == () and "support" in r.verdict

    ident = identity_map(P1P1)
    r = big_height_subsequence(ident, iterate(ident, pt([2, 1], [3, 1]), 6), B, _section("X0_0"))
    assert r.indices and not r.record_breaking and "inconsistent" in r.verdict


def test_big_height_rejects_bad_decomposition(split23):
    orbit = iterate(split23, pt([2, 1], [2, 1]), 4)
    with pytest.raises(ValueError):
        big_height_subsequence(split23, orbit, CohomClass.divisor(P1P1, [1, 0]), _section("X0_0"))
    with pytest.raises(ValueError):
        big_height_subsequence(split23, orbit, CohomClass.divisor(P1P1, [1, 1]), _section("X0_0"))


# properties ----------------------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(2, 4), st.integers(2, 30), st.integers(1, 30))
def test_alpha_never_exceeds_lambda1(d1, d2, a, b):
    f = power_map([1, 1], [d1, d2])
    x = pt([a, 1], [b + 1, 1])
    est = arithmetic_degree_estimate(iterate(f, x, 10, digit_budget=200_000), [1, 1])
    assert est.estimate <= max(d1, d2) * 1.02


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=2, max_size=2).filter(any), st.integers(2, 3))
def test_canonical_height_bounded_deviation(v, d):
    f = power_map([1], [d])
    chk = canonical_height_check(f, ProjPoint.of(v), [CohomClass.hyperplane(P1, 0)], n_used=10)
    assert chk.residual < 1e-9
    assert chk.bounded
