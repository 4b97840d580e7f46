"""Command-line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 indeterminacy,
3 digit budget exhausted before the horizon (partial report still written).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Sequence

from ..dml import Correspondence, height_separation, multiplier_sets_disjoint, return_set
from ..dynamics import (
    IndeterminacyError,
    InvalidEndomorphism,
    dynamical_degrees,
    intersection_growth_estimate,
    iterate,
    lyapunov_multipliers,
    multipliers_via_big_cone,
    pullback_on_N1,
)
from ..geometry import CohomClass
from ..heights import (
    DENSITY_CAVEAT,
    INCONCLUSIVE,
    arithmetic_degree_estimate,
    canonical_height_check,
    classify_alpha,
)
from ..polynomials import ParseError
from .battery import SUITES, run_suite
from .cache import OrbitCache
from .reports import DEFAULT_PRECISION, RunReport, render
from .systems import SystemDescription, SystemFileError, load_correspondence, resolve_system

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--horizon", type=int, help="number of orbit steps")
    p.add_argument("--digit-budget", type=int, help="stop before a point exceeds this many decimal digits")
    p.add_argument("--tol", type=float, help="relative tolerance for classification")
    p.add_argument("--cache-dir", help="orbit cache directory (default: $ARITHDEG_CACHE_DIR)")
    p.add_argument("--no-cache", action="store_true", help="do not read or write the orbit cache")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="decimals in float output")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arithdeg", description="Dynamical and arithmetic degrees on products of projective spaces.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("degrees", help="dynamical degrees and multipliers")
    p.add_argument("system")
    _common(p)

    p = sub.add_parser("alpha", help="estimate and classify the arithmetic degree of a point")
    p.add_argument("system")
    p.add_argument("--point")
    _common(p)

    p = sub.add_parser("orbit", help="iterate a point and tabulate heights")
    p.add_argument("system")
    p.add_argument("--point")
    _common(p)

    p = sub.add_parser("canonical", help="canonical height vector of a point")
    p.add_argument("system")
    p.add_argument("--point")
    p.add_argument("--basis", help="divisor classes as coefficient rows, e.g. '1,0;0,1' (default: hyperplanes)")
    p.add_argument("--n-used", type=int, default=12)
    _common(p)

    p = sub.add_parser("dml", help="return set and height separation of a paired orbit")
    p.add_argument("system_f")
    p.add_argument("system_g")
    p.add_argument("--point-f")
    p.add_argument("--point-g")
    p.add_argument("--correspondence", help="file with equations of V (default: the diagonal of P^1 x P^1)")
    p.add_argument("--N", type=int, default=1, dest="N")
    _common(p)

    p = sub.add_parser("check", help="run an acceptance suite")
    p.add_argument("suite", choices=SUITES)
    _common(p)
    return parser


def _cache(args) -> OrbitCache | None:
    return None if args.no_cache else OrbitCache(args.cache_dir)


def _settings(args, desc: SystemDescription) -> tuple[int, int, float]:
    o = desc.options
    return (
        args.horizon if args.horizon is not None else o.horizon,
        args.digit_budget if args.digit_budget is not None else o.digit_budget,
        args.tol if args.tol is not None else o.tol,
    )


def _orbit(args, f, x, horizon, budget):
    cache = _cache(args)
    if cache is None:
        return iterate(f, x, horizon, budget)
    return cache.orbit(f, x, horizon, budget)[0]


def cmd_degrees(args) -> tuple[RunReport, int]:
    desc = resolve_system(args.system)
    f = desc.endomorphism()
    horizon = args.horizon if args.horizon is not None else 8
    lam = dynamical_degrees(f)
    growth = {}
    for i in range(1, f.space.dim + 1):
        t = intersection_growth_estimate(f, i, horizon)
        growth[str(i)] = {"intersections": [str(v) for v in t.values], "roots": t.roots, "two_step": t.two_step}
    results = {
        "degree_matrix": [list(r) for r in f.degree_matrix],
        "pullback_N1": [[str(v) for v in row] for row in pullback_on_N1(f).rows],
        "topological_degree": f.topological_degree(),
        "dynamical_degrees": lam,
        "multipliers": lyapunov_multipliers(f),
        "big_cone_multipliers": multipliers_via_big_cone(f),
        "growth": growth,
    }
    inputs = {"system": desc.name, "space": list(desc.space), "blocks": f.block_strings(), "horizon": horizon}
    return RunReport("degrees", inputs, results, f.digest()), EXIT_OK


def _point_inputs(desc, args, horizon, budget, tol=None):
    out = {"system": desc.name, "point_name": desc.point_name(args.point), "point": str(desc.point(args.point))}
    out.update(horizon=horizon, digit_budget=budget)
    if tol is not None:
        out["tol"] = tol
    return out


def cmd_alpha(args) -> tuple[RunReport, int]:
    desc = resolve_system(args.system)
    f = desc.endomorphism()
    horizon, budget, tol = _settings(args, desc)
    x = desc.point(args.point)
    inputs = _point_inputs(desc, args, horizon, budget, tol)
    orbit = _orbit(args, f, x, horizon, budget)
    est = arithmetic_degree_estimate(orbit, [1] * f.space.k, tol)
    mu = lyapunov_multipliers(f)
    cls = classify_alpha(est.estimate, mu, tol)
    if cls == INCONCLUSIVE:
        verdict = f"alpha estimate {est.estimate:.6f}: inconclusive against the multiplier set"
    else:
        verdict = f"alpha estimate {est.estimate:.6f} classified as multiplier {float(cls):.6f} ({cls.minpoly})"
    verdict += "; orbit density not verified"
    results = {
        "verdict": verdict,
        "estimate": est.estimate,
        "method": est.method,
        "converged": est.converged,
        "bounded_orbit": est.bounded,
        "classified": cls,
        "multipliers": mu,
        "lambda1": dynamical_degrees(f)[1],
        "orbit_length": len(orbit),
        "stop_reason": orbit.stop_reason,
        "estimators": {
            "heights": est.heights,
            "root": est.root,
            "ratio": est.ratio,
            "two_step": est.two_step,
            "sup_heights": est.sup_heights,
            "sup_ratio": est.sup_ratio,
            "sup_two_step": est.sup_two_step,
        },
        "caveat": DENSITY_CAVEAT,
    }
    code = EXIT_BUDGET if orbit.stop_reason == "budget" else EXIT_OK
    return RunReport("alpha", inputs, results, f.digest()), code


def cmd_orbit(args) -> tuple[RunReport, int]:
    desc = resolve_system(args.system)
    f = desc.endomorphism()
    horizon, budget, _ = _settings(args, desc)
    inputs = _point_inputs(desc, args, horizon, budget)
    orbit = _orbit(args, f, desc.point(args.point), horizon, budget)
    table = [
        {"n": n, "digits": list(orbit.digits[n]), "factor_heights": list(orbit.factor_heights[n])}
        for n in range(len(orbit))
    ]
    small = [str(p) if sum(d) <= 60 else None for p, d in zip(orbit.points, orbit.digits)]
    results = {"orbit_length": len(orbit), "stop_reason": orbit.stop_reason, "table": table, "points": small}
    code = EXIT_BUDGET if orbit.stop_reason == "budget" else EXIT_OK
    return RunReport("orbit", inputs, results, f.digest()), code


def _parse_basis(text: str | None, f) -> list[CohomClass]:
    if not text:
        return [CohomClass.hyperplane(f.space, j) for j in range(f.space.k)]
    rows = [r for r in text.split(";") if r.strip()]
    try:
        return [CohomClass.divisor(f.space, [int(c) for c in r.split(",")]) for r in rows]
    except ValueError as exc:
        raise UsageError(f"bad --basis {text!r}: {exc}") from None


def cmd_canonical(args) -> tuple[RunReport, int]:
    desc = resolve_system(args.system)
    f = desc.endomorphism()
    horizon, budget, _ = _settings(args, desc)
    basis = _parse_basis(args.basis, f)
    inputs = _point_inputs(desc, args, horizon, budget)
    inputs.update(basis=[str(b) for b in basis], n_used=args.n_used)
    chk = canonical_height_check(f, desc.point(args.point), basis, args.n_used, budget)
    results = {
        "values": chk.hat.values,
        "lambda": [[str(v) for v in row] for row in chk.hat.lam.rows],
        "n_used": chk.hat.n_used,
        "status": chk.hat.status,
        "error_estimate": chk.hat.error,
        "functional_equation_residual": chk.residual,
        "deviation_sup": max(chk.deviations),
        "deviations": chk.deviations,
        "bounded": chk.bounded,
    }
    return RunReport("canonical", inputs, results, f.digest()), EXIT_OK


def cmd_dml(args) -> tuple[RunReport, int]:
    df, dg = resolve_system(args.system_f), resolve_system(args.system_g)
    f, g = df.endomorphism(), dg.endomorphism()
    x, y = df.point(args.point_f), dg.point(args.point_g)
    horizon = args.horizon if args.horizon is not None else 20
    budget = args.digit_budget if args.digit_budget is not None else df.options.digit_budget
    V = load_correspondence(args.correspondence) if args.correspondence else Correspondence.diagonal_p1()
    cert = multiplier_sets_disjoint(f, g)
    rs = return_set(f, g, x, y, V, horizon, budget)
    sep = height_separation(f, g, x, y, args.N, horizon, budget)
    comparisons = [
        {"f": c.f_multiplier, "g": c.g_multiplier, "equal": c.equal} for c in cert.comparisons
    ]
    results = {
        "disjoint": cert.disjoint,
        "comparisons": comparisons,
        "hypotheses_met": cert.disjoint,
        "return_set": list(rs.indices),
        "last_checked": rs.last_checked,
        "stop_reason": rs.stop_reason,
        "modular_from": rs.modular_from,
        "separation": sep.values,
        "crossover": sep.crossover,
        "strictly_decreasing": sep.decreasing_from_crossover,
        "diverges": sep.diverges,
        "note": rs.note,
    }
    inputs = {
        "system_f": df.name,
        "system_g": dg.name,
        "point_f": str(x),
        "point_g": str(y),
        "equations": V.equation_strings(),
        "N": args.N,
        "horizon": horizon,
        "digit_budget": budget,
    }
    digest = f"{f.digest()}+{g.digest()}"
    code = EXIT_BUDGET if rs.stop_reason == "budget" else EXIT_OK
    return RunReport("dml", inputs, results, digest), code


def cmd_check(args) -> tuple[RunReport, int]:
    results = run_suite(args.suite, _cache(args))
    report = RunReport("check", {"suite": args.suite})
    report.results = {
        "criteria": [r.as_dict() for r in results],
        "all_passed": all(r.passed for r in results),
        "summary": [f"criterion {r.id}: {'PASS' if r.passed else 'FAIL'} {r.name}" for r in results],
    }
    report.timings = {f"criterion_{r.id}": r.seconds for r in results}
    return report, EXIT_OK


COMMANDS = {
    "degrees": cmd_degrees,
    "alpha": cmd_alpha,
    "orbit": cmd_orbit,
    "canonical": cmd_canonical,
    "dml": cmd_dml,
    "check": cmd_check,
}


def _emit(report: RunReport, args) -> None:
    text = render(report, args.format, args.precision)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"arithdeg: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        report, code = COMMANDS[args.verb](args)
    except (UsageError, SystemFileError, ParseError, InvalidEndomorphism, FileNotFoundError) as exc:
        print(f"arithdeg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IndeterminacyError as exc:
        print(f"arithdeg: {exc}", file=sys.stderr)
        partial = exc.partial
        report = RunReport(
            args.verb,
            {"system": getattr(args, "system", None), "point": getattr(args, "point", None)},
            {
                "error": "indeterminacy",
                "index": exc.index,
                "block": exc.block,
                "partial_points": [str(p) for p in partial.points] if partial else [],
            },
        )
        code = EXIT_MATH
    except ValueError as exc:
        print(f"arithdeg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.timings.setdefault("total", time.perf_counter() - t0)
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
