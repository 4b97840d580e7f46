"""CSV tables of intersection-number growth and height growth for the bundled corpus.

Two tables go to stdout (or to --prefix_degrees.csv / --prefix_heights.csv):
the n-th root and two-step estimates of lambda_i next to the exact spectral
radius, and the ratio / two-step height estimators along the stored orbit.
"""

import argparse
import csv
import sys

from arithdeg.cli.systems import load_corpus
from arithdeg.dynamics import dynamical_degrees, intersection_growth_estimate, iterate
from arithdeg.heights import arithmetic_degree_estimate


def degree_rows(n_max):
    for s in load_corpus():
        f = s.endomorphism()
        lam = dynamical_degrees(f)
        for i in range(1, f.space.dim + 1):
            t = intersection_growth_estimate(f, i, n_max)
            for n in range(1, n_max + 1):
                two = t.two_step[n - 2] if n >= 2 else ""
                yield [s.name, i, n, float(lam[i]), t.roots[n - 1], two]


def height_rows(horizon, budget):
    for s in load_corpus():
        if "alpha_battery" not in s.tags:
            continue
        f = s.endomorphism()
        orbit = iterate(f, s.point(), horizon, budget)
        est = arithmetic_degree_estimate(orbit, [1] * f.space.k)
        for n in range(1, len(orbit)):
            two = est.sup_two_step[n - 2] if n >= 2 else ""
            yield [s.name, n, est.heights[n], est.root[n - 1], est.sup_ratio[n - 1], two]


def emit(rows, header, path):
    fh = open(path, "w", newline="") if path else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path:
        fh.close()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--horizon", type=int, default=15)
    ap.add_argument("--digit-budget", type=int, default=10**6)
    ap.add_argument("--prefix", help="write <prefix>_degrees.csv and <prefix>_heights.csv")
    args = ap.parse_args()
    emit(degree_rows(args.n_max), ["system", "i", "n", "lambda", "nth_root", "two_step"],
         args.prefix and f"{args.prefix}_degrees.csv")
    emit(height_rows(args.horizon, args.digit_budget), ["system", "n", "h_plus", "root", "sup_ratio", "sup_two_step"],
         args.prefix and f"{args.prefix}_heights.csv")


if __name__ == "__main__":
    main()
