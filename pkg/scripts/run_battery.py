"""Run an acceptance suite and print one line per criterion.

    python3 scripts/run_battery.py --suite all --output battery.json
"""

import argparse
import sys

from arithdeg.cli.battery import SUITES, run_suite
from arithdeg.cli.cache import OrbitCache
from arithdeg.cli.reports import RunReport, render


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suite", choices=SUITES, default="all")
    ap.add_argument("--cache-dir")
    ap.add_argument("--output", help="also write the full json report here")
    args = ap.parse_args()

    results = run_suite(args.suite, OrbitCache(args.cache_dir) if args.cache_dir else None)
    for r in results:
        margin = "" if r.margin is None else f"  margin {r.margin:.3g}"
        print(f"criterion {r.id:2d}  {'PASS' if r.passed else 'FAIL'}  {r.seconds:7.2f}s  {r.name}{margin}")
        if not r.passed and r.details.get("failing"):
            print(f"              failing: {', '.join(r.details['failing'])}")
    if args.output:
        report = RunReport("check", {"suite": args.suite})
        report.results = {"criteria": [r.as_dict() for r in results], "all_passed": all(r.passed for r in results)}
        report.timings = {f"criterion_{r.id}": r.seconds for r in results}
        with open(args.output, "w") as fh:
            fh.write(render(report))
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
