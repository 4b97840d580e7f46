"""Deg-2 against deg-3 on P^1: return sets into the diagonal and the height separation.

For each starting value a and each N the script prints the return set up to
the horizon, how it was decided, and the first index where
N h(f^n(x)) - h(g^n(y)) turns negative.  The crossover for x = y = [a:1] is
the least n with N 2^n < 3^n.
"""

import argparse

from arithdeg.dml import Correspondence, height_separation, multiplier_sets_disjoint, return_set
from arithdeg.dynamics import ProjPoint, power_map


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizon", type=int, default=20)
    ap.add_argument("--digit-budget", type=int, default=10**6)
    ap.add_argument("--starts", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--N", type=int, nargs="+", default=[1, 2, 10, 100])
    args = ap.parse_args()

    f, g = power_map([1], [2]), power_map([1], [3])
    V = Correspondence.diagonal_p1()
    print(f"multiplier sets disjoint: {bool(multiplier_sets_disjoint(f, g))}")
    print("a  N    return_set  checked  modular_from  crossover  predicted")
    for a in args.starts:
        x = ProjPoint.of([a, 1])
        rs = return_set(f, g, x, x, V, args.horizon, args.digit_budget)
        for N in args.N:
            sep = height_separation(f, g, x, x, N, args.horizon, args.digit_budget)
            predicted = next(n for n in range(200) if N * 2**n < 3**n)
            print(
                f"{a:<2} {N:<4} {str(list(rs.indices)):<11} {rs.last_checked:<8} "
                f"{str(rs.modular_from):<13} {str(sep.crossover):<10} {predicted}"
            )


if __name__ == "__main__":
    main()
