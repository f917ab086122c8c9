"""Compute B(n) over a range into a checkpoint file and print per-shape tables.

    python scripts/tabulate_shapes.py 1 1000 --checkpoint data/b_1_1000.jsonl
"""

from __future__ import annotations

import argparse

from cyclomax.cli import pq_rows, record_rows, render_table, summary_rows
from cyclomax.records import load_records, run_range
from cyclomax.search import SearchOptions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("lo", type=int)
    ap.add_argument("hi", type=int)
    ap.add_argument("--checkpoint", required=True)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-divisors", type=int, default=24)
    ap.add_argument("--shapes", default="pq,p2q,p2q2,pqr", help="comma separated shapes to list in full")
    args = ap.parse_args()

    opts = SearchOptions(allow_closed_form=False, max_divisors=args.max_divisors)
    print(run_range(args.lo, args.hi, "B", opts, args.checkpoint, workers=args.workers))
    records = [r for r in load_records(args.checkpoint).values() if args.lo <= r.n <= args.hi]
    print(render_table(*summary_rows(records)))
    for shape in args.shapes.split(","):
        print(f"== {shape}")
        header, rows = pq_rows(records) if shape == "pq" else record_rows(records, shape)
        print(render_table(header, rows))


if __name__ == "__main__":
    main()
