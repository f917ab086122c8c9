"""Run every conjecture scan and write one CSV of reports.

Exit status is 1 if any report fails.
"""

from __future__ import annotations

import argparse
import sys
import time

from cyclomax import conjectures as cj
from cyclomax.cli import render_table, report_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="conjecture_scans.csv")
    ap.add_argument("--scale", type=float, default=1.0, help="multiply every scan limit")
    args = ap.parse_args()

    s = args.scale
    plan = [
        (cj.PARITY_PRODUCTS, lambda: cj.scan(cj.PARITY_PRODUCTS, int(1000 * s))),
        (cj.TWO_QB, lambda: cj.scan(cj.TWO_QB, int(2000 * s))),
        (cj.P2Q2, lambda: cj.scan(cj.P2Q2, int(50000 * s))),
        (cj.PQRB, lambda: cj.scan(cj.PQRB, int(2000 * s))),
        (cj.PQB_STRICT, lambda: cj.scan(cj.PQB_STRICT, int(5000 * s))),
        (cj.PQ_DIVISIBILITY, lambda: [cj.check_pq_divisibility(p, b, int(20 * s)) for p in (3, 5) for b in (2, 3)]),
        (cj.FINITE_RANGE, lambda: [cj.finite_range_scan(3, 1, 2, int(60 * s)), cj.finite_range_scan(2, 2, 1, int(200 * s))]),
    ]
    reports = []
    for cid, run in plan:
        t0 = time.perf_counter()
        rs = run()
        reports += rs
        fails = sum(r.failed for r in rs)
        print(f"{cid:16s} {len(rs):4d} reports  {fails} fail  {time.perf_counter() - t0:7.1f}s", flush=True)
    header, rows = report_rows(reports)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(render_table(header, rows, as_csv=True))
    print(f"wrote {args.out}")
    sys.exit(1 if any(r.failed for r in reports) else 0)


if __name__ == "__main__":
    main()
