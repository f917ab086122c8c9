"""Mechanical checkers for the conjectures about B(n).

Each checker computes every B value by exhaustive search (closed forms are
never used to decide a verdict) and returns a :class:`ConjectureReport`
whose evidence is enough to re-audit the verdict from witness subsets alone.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from cyclomax.numcyclo import divisors, factor, is_prime, is_squarefree, omega
from cyclomax.polycore import height
from cyclomax.search import (
    SearchOptions,
    SearchResult,
    compute_B,
    known_formula,
    product_of,
)

P2Q2 = "P2Q2"
TWO_QB = "TWO_QB"
PQB_STRICT = "PQB_STRICT"
PQ_DIVISIBILITY = "PQ_DIVISIBILITY"
PARITY_PRODUCTS = "PARITY_PRODUCTS"
PQRB = "PQRB"
FINITE_RANGE = "FINITE_RANGE"

CONJECTURE_IDS = (P2Q2, TWO_QB, PQB_STRICT, PQ_DIVISIBILITY, PARITY_PRODUCTS, PQRB, FINITE_RANGE)

HOLDS = "holds"
FAILS = "fails"
SKIPPED = "skipped"


class OutOfShape(ValueError):
    """The input does not have the factorization shape a conjecture is about."""


class NotSquarefree(OutOfShape):
    pass


@dataclass
class ConjectureReport:
    conjecture_id: str
    params: dict
    verdict: str
    evidence: dict = field(default_factory=dict)
    cost: dict = field(default_factory=dict)
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.verdict == FAILS

    def to_dict(self) -> dict:
        return asdict(self)


def _opts(opts: SearchOptions | None) -> SearchOptions:
    base = opts or SearchOptions()
    return SearchOptions(
        jobs=base.jobs,
        witness_cap=base.witness_cap,
        allow_closed_form=False,
        force_bigint=base.force_bigint,
        max_divisors=base.max_divisors,
        block_levels=base.block_levels,
        prune=base.prune,
    )


class _Meter:
    def __init__(self):
        self.nodes = 0
        self.t0 = time.perf_counter()

    def search(self, n: int, opts: SearchOptions) -> SearchResult:
        r = compute_B(n, opts)
        self.nodes += r.nodes_visited
        return r

    def cost(self) -> dict:
        return {"nodes": self.nodes, "elapsed": round(time.perf_counter() - self.t0, 6)}


def _entry(r: SearchResult) -> dict:
    e = {"n": r.n, "factorization": str(factor(r.n)), "B": r.value, "witnesses": r.witnesses[:1]}
    known = known_formula(r.n)
    if known is not None:
        if known[0] != r.value:
            raise AssertionError(f"search gives B({r.n})={r.value}, closed form {known[1]} gives {known[0]}")
        e["closed_form"] = known[1]
    return e


def _require_prime(*ps: int) -> None:
    for p in ps:
        if not is_prime(p):
            raise OutOfShape(f"{p} is not prime")


def check_p2q2(p: int, q: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """B(p^2 q^2) is the larger of two explicit four-factor product heights."""
    _require_prime(p, q)
    if not p < q:
        raise OutOfShape("need p < q")
    m = _Meter()
    n = p * p * q * q
    r = m.search(n, _opts(opts))
    first = height(product_of([p, q, p * p * q, p * q * q]))
    second = height(product_of([p, q, p * p, q * q]))
    larger = max(first, second)
    winner = "tie" if first == second else ("first" if first > second else "second")
    ev = _entry(r) | {"first_product": first, "second_product": second, "larger": winner}
    return ConjectureReport(P2Q2, {"p": p, "q": q}, HOLDS if r.value == larger else FAILS, ev, m.cost())


def check_2qb(q: int, b: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """B(2 q^b) = 2 for odd primes q."""
    _require_prime(q)
    if q == 2:
        raise OutOfShape("q must be odd")
    if b < 1:
        raise OutOfShape("b must be positive")
    m = _Meter()
    r = m.search(2 * q**b, _opts(opts))
    return ConjectureReport(TWO_QB, {"q": q, "b": b}, HOLDS if r.value == 2 else FAILS, _entry(r), m.cost())


def check_pqb_strict(p: int, q: int, b: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """B(p q^b) > p for odd primes p < q and b > 2."""
    _require_prime(p, q)
    if p == 2 or not p < q:
        raise OutOfShape("need odd primes p < q")
    params = {"p": p, "q": q, "b": b}
    if b <= 2:
        return ConjectureReport(PQB_STRICT, params, SKIPPED, note="precondition b > 2 not met")
    m = _Meter()
    r = m.search(p * q**b, _opts(opts))
    return ConjectureReport(PQB_STRICT, params, HOLDS if r.value > p else FAILS, _entry(r), m.cost())


def pq_shape(n: int) -> tuple[int, int, int]:
    """``(p, q, b)`` with ``n = p * q**b``, p < q, p an odd prime; else OutOfShape."""
    fac = factor(n)
    if len(fac) != 2:
        raise OutOfShape(f"{n} = {fac} is not a product of powers of two primes")
    (p, a), (q, b) = fac.pairs
    if a != 1:
        raise OutOfShape(f"{n} = {fac}: the smaller prime must appear to the first power")
    if p == 2:
        raise OutOfShape(f"{n} = {fac}: p must be odd")
    return p, q, b


def check_pq_divisibility_at(n: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """p | B(n) for a single n = p q^b (p < q, p odd); other shapes are refused."""
    p, q, b = pq_shape(n)
    m = _Meter()
    r = m.search(n, _opts(opts))
    ev = _entry(r) | {"divisible": r.value % p == 0}
    return ConjectureReport(PQ_DIVISIBILITY, {"n": n, "p": p, "q": q, "b": b},
                            HOLDS if r.value % p == 0 else FAILS, ev, m.cost())


def _primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(lo + 1, hi + 1) if is_prime(q)]


def check_pq_divisibility(p: int, b: int, q_max: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """Every B(p q^b), p < q <= q_max, is divisible by the odd prime p."""
    _require_prime(p)
    if p == 2:
        raise OutOfShape("p must be odd")
    if b < 1:
        raise OutOfShape("b must be positive")
    m = _Meter()
    values, points = {}, []
    for q in _primes_between(p, q_max):
        r = m.search(p * q**b, _opts(opts))
        values[q] = r.value
        points.append(_entry(r))
    bad = {q: v for q, v in values.items() if v % p}
    ev = {"values": values, "distinct": sorted(set(values.values())), "points": points,
          "counterexamples": bad}
    verdict = FAILS if bad else HOLDS
    note = "" if values else "no primes q in range"
    return ConjectureReport(PQ_DIVISIBILITY, {"p": p, "b": b, "q_max": q_max}, verdict, ev, m.cost(), note)


def parity_products(n: int) -> tuple[list[int], list[int]]:
    """Divisors of n with an odd, resp. even, number of prime factors."""
    ds = divisors(n)
    return [d for d in ds if omega(d) % 2 == 1], [d for d in ds if omega(d) % 2 == 0]


def check_parity_products(n: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """For squarefree n, B(n) is the height of the odd-omega or the even-omega product."""
    if n < 1 or not is_squarefree(n):
        raise NotSquarefree(f"{n} is not squarefree")
    m = _Meter()
    r = m.search(n, _opts(opts))
    odd, even = parity_products(n)
    h_odd = height(product_of(odd))
    h_even = height(product_of(even))
    fac = factor(n)
    ev = _entry(r) | {
        "odd_divisors": odd,
        "even_divisors": even,
        "odd_height": h_odd,
        "even_height": h_even,
        "odd_attains": h_odd == r.value,
        "even_attains": h_even == r.value,
    }
    if fac.pairs:
        p = fac.primes[0]
        ev["smallest_prime"] = p
        ev["divisible_by_smallest_prime"] = r.value % p == 0
    verdict = HOLDS if r.value in (h_odd, h_even) else FAILS
    return ConjectureReport(PARITY_PRODUCTS, {"n": n, "t": len(fac)}, verdict, ev, m.cost())


def check_pqrb(p: int, q: int, r: int, b: int, opts: SearchOptions | None = None) -> ConjectureReport:
    """p | B(p q r^b) and B(p q r^b) > p, for primes p < q < r and b > 1."""
    _require_prime(p, q, r)
    if not p < q < r:
        raise OutOfShape("need primes p < q < r")
    params = {"p": p, "q": q, "r": r, "b": b}
    if b < 2:
        return ConjectureReport(PQRB, params, SKIPPED, note="precondition b > 1 not met")
    m = _Meter()
    res = m.search(p * q * r**b, _opts(opts))
    ok = res.value % p == 0 and res.value > p
    ev = _entry(res) | {"divisible": res.value % p == 0, "exceeds_p": res.value > p}
    return ConjectureReport(PQRB, params, HOLDS if ok else FAILS, ev, m.cost())


def finite_range_scan(p: int, a: int, b: int, q_max: int, opts: SearchOptions | None = None,
                      tail: float = 0.5) -> ConjectureReport:
    """Distinct values of B(p^a q^b) over primes q <= q_max, q != p.

    The verdict is scan-consistent (reported as holds) when no new value
    shows up among the last ``tail`` fraction of the primes scanned, and
    skipped (inconclusive) otherwise.  It never fails: finiteness is a theorem.
    """
    _require_prime(p)
    m = _Meter()
    values = {}
    first_seen = {}
    for i, q in enumerate(q for q in _primes_between(1, q_max) if q != p):
        v = m.search(p**a * q**b, _opts(opts)).value
        values[q] = v
        first_seen.setdefault(v, i)
    params = {"p": p, "a": a, "b": b, "q_max": q_max}
    count = len(values)
    if count == 0:
        return ConjectureReport(FINITE_RANGE, params, SKIPPED, cost=m.cost(), note="no primes scanned")
    last_new = max(first_seen.values())
    stable = last_new < count - max(1, int(count * tail)) or count == 1
    ev = {"values": values, "distinct": sorted(first_seen), "last_new_index": last_new, "scanned": count}
    if stable:
        return ConjectureReport(FINITE_RANGE, params, HOLDS, ev, m.cost(), note="scan-consistent")
    return ConjectureReport(FINITE_RANGE, params, SKIPPED, ev, m.cost(), note="inconclusive: new values in the tail")


def audit(report: ConjectureReport) -> bool:
    """Recheck every B value in the evidence by multiplying out its witness."""
    entries = [report.evidence] if "B" in report.evidence else report.evidence.get("points", [])
    for e in entries:
        for w in e.get("witnesses", []):
            if height(product_of(w)) != e["B"]:
                return False
    if report.conjecture_id == PARITY_PRODUCTS and report.evidence:
        ev = report.evidence
        if height(product_of(ev["odd_divisors"])) != ev["odd_height"]:
            return False
        if height(product_of(ev["even_divisors"])) != ev["even_height"]:
            return False
    return True


# -- scans over ranges of n ------------------------------------------------------------


def primes_upto(m: int) -> list[int]:
    return [p for p in range(2, m + 1) if is_prime(p)]


def scan(conjecture_id: str, limit: int, opts: SearchOptions | None = None) -> list[ConjectureReport]:
    """Run a checker over every parameter tuple whose n is at most ``limit``."""
    ps = primes_upto(max(2, limit))
    out = []
    if conjecture_id == PARITY_PRODUCTS:
        out = [check_parity_products(n, opts) for n in range(1, limit + 1) if is_squarefree(n)]
    elif conjecture_id == TWO_QB:
        for q in ps[1:]:
            b = 1
            while 2 * q**b <= limit:
                out.append(check_2qb(q, b, opts))
                b += 1
    elif conjecture_id == P2Q2:
        for i, p in enumerate(ps):
            for q in ps[i + 1 :]:
                if (p * q) ** 2 > limit:
                    break
                out.append(check_p2q2(p, q, opts))
    elif conjecture_id == PQB_STRICT:
        for i, p in enumerate(ps[1:], start=1):
            for q in ps[i + 1 :]:
                if p * q**3 > limit:
                    break
                b = 3
                while p * q**b <= limit:
                    out.append(check_pqb_strict(p, q, b, opts))
                    b += 1
    elif conjecture_id == PQRB:
        for i, p in enumerate(ps):
            if p * (p + 1) * (p + 2) ** 2 > limit:
                break
            for j in range(i + 1, len(ps)):
                q = ps[j]
                if p * q * (q + 1) ** 2 > limit:
                    break
                for r in ps[j + 1 :]:
                    if p * q * r * r > limit:
                        break
                    b = 2
                    while p * q * r**b <= limit:
                        out.append(check_pqrb(p, q, r, b, opts))
                        b += 1
    else:
        raise ValueError(f"no n-range scan for {conjecture_id}")
    return out
