"""B(p^a q^b) against the lower bound min(p^a, q^b), for all such n up to a limit.

Writes one JSON line per n and a closing summary.  n above the divisor budget
are handled by checking the explicit witness ``{p..p^a, q..q^b}`` instead of
a full search.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from cyclomax.numcyclo import factor, num_divisors
from cyclomax.polycore import height
from cyclomax.search import SearchOptions, compute_B, lower_bound_pq, lower_bound_witness, product_of


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=5000)
    ap.add_argument("--max-divisors", type=int, default=28)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--slow", type=float, default=2.0, help="only print n that took longer (seconds)")
    args = ap.parse_args()

    opts = SearchOptions(allow_closed_form=False, max_divisors=args.max_divisors, jobs=args.jobs)
    t_start = time.perf_counter()
    searched = certified = below = 0
    for n in range(2, args.limit + 1):
        fac = factor(n)
        if len(fac) != 2:
            continue
        bound = lower_bound_pq(n)
        t0 = time.perf_counter()
        if num_divisors(n) <= args.max_divisors:
            value, how = compute_B(n, opts).value, "search"
            searched += 1
        else:
            value, how = height(product_of(lower_bound_witness(n))), "witness"
            certified += 1
        dt = time.perf_counter() - t0
        below += value < bound
        if value < bound or dt > args.slow or how == "witness":
            row = {"n": n, "factorization": str(fac), "tau": num_divisors(n), "value": value,
                   "bound": bound, "how": how, "seconds": round(dt, 2)}
            print(json.dumps(row), flush=True)
    summary = {"searched": searched, "certified": certified, "below_bound": below,
               "seconds": round(time.perf_counter() - t_start, 1)}
    print(json.dumps(summary))
    sys.exit(1 if below else 0)


if __name__ == "__main__":
    main()
