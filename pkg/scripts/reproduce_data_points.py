"""Recompute the two large single values of B(n) and time them.

    python scripts/reproduce_data_points.py            # B(93837)
    python scripts/reproduce_data_points.py --extended # also B(337561)
"""

from __future__ import annotations

import argparse
import json
import time

from cyclomax.numcyclo import divisors, factor
from cyclomax.polycore import height
from cyclomax.search import SearchOptions, compute_B, product_of

POINTS = [(93837, 599)]
EXTENDED = [(7**2 * 83**2, 64)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--extended", action="store_true")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    opts = SearchOptions(allow_closed_form=False, jobs=args.jobs)
    ok = True
    for n, expected in POINTS + (EXTENDED if args.extended else []):
        t0 = time.perf_counter()
        r = compute_B(n, opts)
        check = height(product_of(r.witnesses[0]))
        row = {
            "n": n,
            "factorization": str(factor(n)),
            "divisors": len(divisors(n)),
            "B": r.value,
            "expected": expected,
            "witness": r.witnesses[0],
            "witness_height": check,
            "seconds": round(time.perf_counter() - t0, 2),
        }
        ok &= r.value == expected == check
        print(json.dumps(row))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
