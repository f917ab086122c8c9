"""Command line interface: ``cyclomax compute|range|verify|table|selftest``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

from cyclomax import __version__
from cyclomax import conjectures as cj
from cyclomax.numcyclo import InputOutOfRange, factor
from cyclomax.records import RecordLine, emit_record, load_records, run_range
from cyclomax.search import BudgetExceeded, SearchOptions, compute_B, compute_C, known_formula, lower_bound_pq

log = logging.getLogger("cyclomax")


# -- rendering -----------------------------------------------------------------------


def render_table(header: list[str], rows: list[list], as_csv: bool = False) -> str:
    cells = [[("" if v is None else str(v)) for v in row] for row in rows]
    if as_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


_REPORT_KEYS = ("B", "first_product", "second_product", "larger", "odd_height", "even_height",
                "divisible_by_smallest_prime", "distinct", "counterexamples")


def report_rows(reports: list[cj.ConjectureReport]) -> tuple[list[str], list[list]]:
    header = ["conjecture", "params", "verdict", *_REPORT_KEYS, "note"]
    rows = []
    for r in reports:
        params = ";".join(f"{k}={v}" for k, v in r.params.items())
        ev = [r.evidence.get(k) for k in _REPORT_KEYS]
        ev = [(" ".join(map(str, v)) if isinstance(v, list) else v) for v in ev]
        ev = [(json.dumps(v, separators=(",", ":")) if isinstance(v, dict) else v) for v in ev]
        rows.append([r.conjecture_id, params, r.verdict, *ev, r.note])
    # drop evidence columns nobody filled
    keep = [i for i in range(len(header)) if i < 3 or i == len(header) - 1 or any(row[i] is not None for row in rows)]
    return [header[i] for i in keep], [[row[i] for i in keep] for row in rows]


def shape_of(n: int) -> str:
    """Exponent pattern with letters, largest exponent first: 'pq', 'p2q', 'pqr', 'pk', '1'."""
    exps = sorted(factor(n).exponents, reverse=True)
    if not exps:
        return "1"
    if len(exps) == 1:
        return "p" if exps[0] == 1 else "pk"
    letters = "pqrstuvw"
    return "".join(letters[i] + (str(a) if a > 1 else "") for i, a in enumerate(exps))


def record_rows(records: list[RecordLine], shape: str | None) -> tuple[list[str], list[list]]:
    header = ["n", "factorization", "shape", "measure", "value", "closed_form", "lower_bound", "match"]
    rows = []
    for rec in sorted(records, key=lambda r: (r.measure, r.n)):
        sh = shape_of(rec.n)
        if shape and sh != shape:
            continue
        known = known_formula(rec.n) if rec.measure == "B" else None
        lb = lower_bound_pq(rec.n) if rec.measure == "B" else None
        expect = known[0] if known else None
        if rec.value is None:
            match = "skipped"
        elif expect is not None:
            match = "yes" if rec.value == expect else "NO"
        elif lb is not None:
            match = "yes" if rec.value >= lb else "NO"
        else:
            match = ""
        rows.append([rec.n, rec.factorization, sh, rec.measure, rec.value, expect, lb, match])
    return header, rows


def pq_rows(records: list[RecordLine]) -> tuple[list[str], list[list]]:
    header = ["n", "p", "q", "B(n)", "min(p,q)", "match"]
    rows = []
    for rec in sorted(records, key=lambda r: r.n):
        if rec.measure != "B" or shape_of(rec.n) != "pq" or rec.value is None:
            continue
        p, q = factor(rec.n).primes
        rows.append([rec.n, p, q, rec.value, min(p, q), "yes" if rec.value == min(p, q) else "NO"])
    return header, rows


def summary_rows(records: list[RecordLine]) -> tuple[list[str], list[list]]:
    """One row per shape: n range, data points, closed-form or bound agreement."""
    header = ["shape", "measure", "n_min", "n_max", "points", "skipped", "checked", "mismatches"]
    groups: dict[tuple[str, str], list[RecordLine]] = {}
    for rec in records:
        groups.setdefault((shape_of(rec.n), rec.measure), []).append(rec)
    rows = []
    for (sh, meas), recs in sorted(groups.items()):
        _, rr = record_rows(recs, None)
        checked = sum(r[-1] in ("yes", "NO") for r in rr)
        bad = sum(r[-1] == "NO" for r in rr)
        ns = [r.n for r in recs]
        rows.append([sh, meas, min(ns), max(ns), len(recs), sum(r.value is None for r in recs), checked, bad])
    return header, rows


# -- commands ---------------------------------------------------------------------------


def _opts(args) -> SearchOptions:
    return SearchOptions(
        jobs=args.jobs,
        witness_cap=args.witness_cap,
        allow_closed_form=not args.no_closed_form,
        force_bigint=args.force_bigint,
        max_divisors=args.max_divisors,
    )


def cmd_compute(args) -> int:
    fn = compute_B if args.measure == "B" else compute_C
    r = fn(args.n, _opts(args))
    rec = RecordLine.from_result(r)
    if args.json:
        print(emit_record(rec))
    else:
        print(f"{args.measure}({r.n}) = {r.value}   [{rec.factorization}, {r.method}]")
        print(f"maximizing subsets: {r.witness_total}")
        for w in r.witnesses:
            print("  {" + ", ".join(map(str, w)) + "}")
        print(f"nodes: {r.nodes_visited}  elapsed: {r.elapsed:.3f}s  escalated: {r.escalated}")
    return 0


def cmd_range(args) -> int:
    opts = _opts(args)
    workers, opts.jobs = opts.jobs, 1
    summary = run_range(args.lo, args.hi, args.measure, opts, args.checkpoint, workers=workers)
    print(json.dumps(summary))
    return 0


_ARITY = {
    cj.P2Q2: ("p", "q"),
    cj.TWO_QB: ("q", "b"),
    cj.PQB_STRICT: ("p", "q", "b"),
    cj.PQ_DIVISIBILITY: ("p", "b", "q_max"),
    cj.PARITY_PRODUCTS: ("n",),
    cj.PQRB: ("p", "q", "r", "b"),
    cj.FINITE_RANGE: ("p", "a", "b", "q_max"),
}

_CHECKERS = {
    cj.P2Q2: cj.check_p2q2,
    cj.TWO_QB: cj.check_2qb,
    cj.PQB_STRICT: cj.check_pqb_strict,
    cj.PQ_DIVISIBILITY: cj.check_pq_divisibility,
    cj.PARITY_PRODUCTS: cj.check_parity_products,
    cj.PQRB: cj.check_pqrb,
    cj.FINITE_RANGE: cj.finite_range_scan,
}


def verify_cmd(conjecture_id: str, params: list[int], *, upto: int | None = None, n: int | None = None,
               opts: SearchOptions | None = None) -> list[cj.ConjectureReport]:
    """Run one checker, or a scan over all n <= ``upto``."""
    if conjecture_id not in _CHECKERS:
        raise ValueError(f"unknown conjecture id {conjecture_id!r}; choose from {', '.join(cj.CONJECTURE_IDS)}")
    if upto is not None:
        return cj.scan(conjecture_id, upto, opts)
    if n is not None:
        if conjecture_id != cj.PQ_DIVISIBILITY:
            raise ValueError("--n is only meaningful for PQ_DIVISIBILITY")
        return [cj.check_pq_divisibility_at(n, opts)]
    names = _ARITY[conjecture_id]
    if len(params) != len(names):
        raise ValueError(f"{conjecture_id} takes {len(names)} parameters: {' '.join(names)}")
    return [_CHECKERS[conjecture_id](*params, opts=opts)]


def cmd_verify(args) -> int:
    opts = _opts(args)
    opts.allow_closed_form = False
    try:
        reports = verify_cmd(args.conjecture, args.params, upto=args.upto, n=args.n, opts=opts)
    except cj.OutOfShape as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    header, rows = report_rows(reports)
    sys.stdout.write(render_table(header, rows, args.csv))
    failed = sum(r.failed for r in reports)
    if not args.csv:
        counts = {v: sum(r.verdict == v for r in reports) for v in (cj.HOLDS, cj.FAILS, cj.SKIPPED)}
        print(f"{len(reports)} reports: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
        parity = [r.evidence for r in reports if r.conjecture_id == cj.PARITY_PRODUCTS and r.evidence]
        if parity:
            even = sum(e["even_attains"] for e in parity)
            odd = sum(e["odd_attains"] for e in parity)
            print(f"odd-omega product attains B: {odd}/{len(parity)}; even-omega product: {even}/{len(parity)}")
    return 1 if failed else 0


def cmd_table(args) -> int:
    records = list(load_records(args.input).values())
    if args.summary:
        header, rows = summary_rows(records)
    elif args.shape == "pq":
        header, rows = pq_rows(records)
    else:
        header, rows = record_rows(records, args.shape)
    sys.stdout.write(render_table(header, rows, args.csv))
    return 0


def selftest(limit: int = 30, identity_limit: int = 300, out=None) -> bool:
    """Oracle equivalence for n <= limit (both measures) and the product identity."""
    out = out or sys.stdout
    from cyclomax.numcyclo import cyclotomic, divisors, euler_phi
    from cyclomax.oracle import naive_cyclotomic, naive_subset_max
    from cyclomax.polycore import IntPoly

    ok = True
    t0 = time.perf_counter()
    bad = []
    for m in range(1, identity_limit + 1):
        f = IntPoly([1])
        for d in divisors(m):
            f = f * cyclotomic(d)
        if f != IntPoly.binomial(m) or cyclotomic(m).degree != euler_phi(m):
            bad.append(m)
    for m in range(1, min(identity_limit, 120) + 1):
        if naive_cyclotomic(m) != cyclotomic(m):
            bad.append(m)
    print(f"identity  n<={identity_limit}: {'PASS' if not bad else 'FAIL ' + str(bad[:5])}"
          f"  ({time.perf_counter() - t0:.1f}s)", file=out)
    ok &= not bad
    t0 = time.perf_counter()
    bad = []
    opts = SearchOptions(allow_closed_form=False)
    for m in range(1, limit + 1):
        for meas, fn in (("height", compute_B), ("length", compute_C)):
            v, hits = naive_subset_max(m, meas)
            r = fn(m, opts)
            if (r.value, r.witness_total, r.witnesses) != (v, len(hits), hits[: opts.witness_cap]):
                bad.append((m, meas))
    print(f"oracle    n<={limit}: {'PASS' if not bad else 'FAIL ' + str(bad[:5])}"
          f"  ({time.perf_counter() - t0:.1f}s)", file=out)
    return ok and not bad


def cmd_selftest(args) -> int:
    return 0 if selftest(args.limit, args.identity_limit) else 1


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--measure", choices=("B", "C"), default="B")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--witness-cap", type=int, default=16)
    p.add_argument("--no-closed-form", action="store_true")
    p.add_argument("--force-bigint", action="store_true")
    p.add_argument("--max-divisors", type=int, default=28)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclomax", description="Maximal heights of divisors of x^n - 1.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute B(n) or C(n)")
    p.add_argument("n", type=int)
    _search_flags(p)
    p.add_argument("--json", action="store_true", help="print the result as a record line")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("range", help="compute a range of n into a resumable record file")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    _search_flags(p)
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("verify", help="check a conjecture")
    p.add_argument("conjecture", choices=cj.CONJECTURE_IDS)
    p.add_argument("params", type=int, nargs="*")
    p.add_argument("--upto", type=int, help="scan every parameter tuple with n <= UPTO")
    p.add_argument("--n", type=int, help="PQ_DIVISIBILITY at a single n")
    p.add_argument("--csv", action="store_true")
    _search_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="tabulate a record file")
    p.add_argument("--input", required=True)
    p.add_argument("--shape", help="pq, p2q, p2q2, pqr, pk, ...")
    p.add_argument("--summary", action="store_true", help="one row per shape")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("selftest", help="oracle equivalence and identity checks")
    p.add_argument("--limit", type=int, default=30)
    p.add_argument("--identity-limit", type=int, default=300)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (BudgetExceeded, InputOutOfRange, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
