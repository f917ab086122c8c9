"""Naive reference implementations, kept independent of the search engine.

They materialize every subset product from scratch with plain polynomial
multiplication and build cyclotomic polynomials by direct division, so they
share no code path with :mod:`cyclomax.search` beyond :class:`IntPoly`.
"""

from __future__ import annotations

from itertools import combinations

from cyclomax.polycore import IntPoly, exact_div, height, length


def naive_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def naive_cyclotomic(n: int) -> IntPoly:
    """``x**n - 1`` divided by ``Phi_d`` for every proper divisor d (no caching)."""
    f = IntPoly.binomial(n)
    for d in naive_divisors(n)[:-1]:
        f = exact_div(f, naive_cyclotomic(d))
    return f


def naive_subset_max(n: int, measure: str = "height", *, bigint: bool = False):
    """``(value, sorted maximizing subsets)`` over all 2**tau(n) subsets."""
    ds = naive_divisors(n)
    phis = {d: naive_cyclotomic(d) for d in ds}
    if bigint:
        phis = {d: f.to_bigint() for d, f in phis.items()}
    fn = height if measure == "height" else length
    best, hits = -1, []
    for r in range(len(ds) + 1):
        for subset in combinations(ds, r):
            f = IntPoly([1], bigint=bigint)
            for d in subset:
                f = f * phis[d]
            v = fn(f)
            if v > best:
                best, hits = v, [list(subset)]
            elif v == best:
                hits.append(list(subset))
    return best, sorted(hits)
