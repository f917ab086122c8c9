"""Maximal height (or length) over all divisors of x**n - 1.

Every divisor of ``x**n - 1`` with positive leading coefficient is a product
of distinct ``Phi_d`` with ``d | n``, so the maximum is taken over the
``2**tau(n)`` subsets of divisors.  The enumeration is a depth-first
include/exclude tree over the divisors ordered by decreasing degree of
``Phi_d``; every node reuses its parent's partial product.  The last
``k`` levels of the tree are expanded at once as a ``2**k``-row matrix.

Multiplication by ``Phi_d`` is carried out as
``prod (x**e - 1) ** mu(d/e)``: each factor is one shift-and-subtract or one
strided cumulative sum, so a node costs a few linear passes.

Subtrees are skipped only when a rigorous upper bound on every completion is
strictly below the best value seen, which leaves the maximum, the count of
maximizers and the witness list unchanged.
"""

from __future__ import annotations

import heapq
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from cyclomax.numcyclo import (
    InputOutOfRange,
    cyclotomic,
    cyclotomic_binomials,
    divisors,
    euler_phi,
    factor,
    num_divisors,
    omega,
)
from cyclomax.polycore import INT64_MAX, IntPoly, NotDivisible, binomial_div, exact_div, height, length

log = logging.getLogger(__name__)

HEIGHT = "height"
LENGTH = "length"
MEASURES = (HEIGHT, LENGTH)


class BudgetExceeded(RuntimeError):
    """The divisor count of n is above the configured search budget."""


@dataclass
class SearchOptions:
    jobs: int = 1
    witness_cap: int = 16
    allow_closed_form: bool = True
    force_bigint: bool = False
    max_divisors: int = 28
    #: levels expanded as one matrix at the bottom of the tree (None: automatic)
    block_levels: int | None = None
    prune: bool = True


@dataclass
class SearchStats:
    nodes_visited: int = 0
    leaves_evaluated: int = 0
    leaves_pruned: int = 0
    escalated: bool = False

    def merge(self, other: SearchStats) -> None:
        self.nodes_visited += other.nodes_visited
        self.leaves_evaluated += other.leaves_evaluated
        self.leaves_pruned += other.leaves_pruned
        self.escalated |= other.escalated


@dataclass
class SearchResult:
    n: int
    measure: str
    value: int
    witnesses: list[list[int]]
    witness_total: int
    nodes_visited: int = 0
    escalated: bool = False
    elapsed: float = 0.0
    method: str = "exhaustive"
    stats: SearchStats = field(default_factory=SearchStats)


# -- closed forms ---------------------------------------------------------------


def known_formula(n: int) -> tuple[int, str] | None:
    """B(n) for n = 1, p**k, p*q and p**2*q (either orientation), else None."""
    fac = factor(n)
    if len(fac) == 0:
        return 1, "B(1)=1"
    if len(fac) == 1:
        return 1, "B(p^k)=1"
    if len(fac) == 2:
        (p, a), (q, b) = fac.pairs
        if a == b == 1:
            return min(p, q), "B(pq)=min(p,q)"
        if (a, b) == (2, 1):
            return min(p * p, q), "B(p^2q)=min(p^2,q)"
        if (a, b) == (1, 2):
            return min(q * q, p), "B(p^2q)=min(p^2,q)"
    return None


def lower_bound_pq(n: int) -> int | None:
    """min(p**a, q**b) when n = p**a * q**b has exactly two prime factors."""
    if n < 2:
        return None
    fac = factor(n)
    if len(fac) != 2:
        return None
    (p, a), (q, b) = fac.pairs
    return min(p**a, q**b)


def lower_bound_witness(n: int) -> list[int] | None:
    """The divisor set ``{p, ..., p**a, q, ..., q**b}`` whose product reaches the bound."""
    fac = factor(n)
    if len(fac) != 2:
        return None
    (p, a), (q, b) = fac.pairs
    return sorted([p**i for i in range(1, a + 1)] + [q**j for j in range(1, b + 1)])


def _closed_form_witness(n: int) -> list[int]:
    fac = factor(n)
    if len(fac) <= 1:
        return []
    return lower_bound_witness(n)


# -- measure helpers --------------------------------------------------------------


def product_of(subset, *, bigint: bool = False) -> IntPoly:
    """``prod Phi_d`` over ``subset`` (plain multiplication, no tricks)."""
    f = IntPoly([1], bigint=bigint)
    for d in subset:
        g = cyclotomic(d)
        f = f * (g.to_bigint() if bigint else g)
    return f


def measure_of(f: IntPoly, measure: str) -> int:
    if measure == HEIGHT:
        return height(f)
    if measure == LENGTH:
        return length(f)
    raise ValueError(f"unknown measure {measure!r}")


# -- array kernels -------------------------------------------------------------------


def _phi_ops(d: int) -> list[tuple[int, int]]:
    """Binomial factors of Phi_d, multiplications first."""
    ops = cyclotomic_binomials(d)
    return [op for op in ops if op[1] > 0] + [op for op in ops if op[1] < 0]


def _abs_max(c: np.ndarray) -> int:
    return int(np.abs(c).max()) if c.size else 0


def _apply_1d(c: np.ndarray, ops) -> np.ndarray:
    """Multiply a 1-D coefficient array by Phi_d, growing the width as needed.

    The caller is responsible for choosing a dtype wide enough (see
    :func:`_growth`).
    """
    for e, sign in ops:
        if sign > 0:
            out = np.zeros(len(c) + e, dtype=c.dtype)
            out[e:] += c
            out[: len(c)] -= c
            c = out
        else:
            w = -(-len(c) // e) * e
            buf = np.zeros(w, dtype=c.dtype)
            buf[: len(c)] = c
            q = binomial_div(buf, e)
            if np.any(q[len(c) - e :] != 0):
                raise NotDivisible(f"x^{e}-1 does not divide the working product")
            c = q[: len(c) - e]
    return c


def _growth(ops) -> int:
    """Largest length of the intermediate products when ``ops`` act on 1.

    A working product ``A`` then never exceeds ``height(A) * _growth(ops)``.
    """
    c = np.ones(1, dtype=np.int64)
    worst = 1
    for op in ops:
        c = _apply_1d(c, [op])
        s = int(np.abs(c).sum())
        if s > 1 << 40:
            break
        worst = max(worst, s)
    else:
        return worst
    f = IntPoly([1])
    worst = 1
    for e, sign in ops:
        f = f * IntPoly.binomial(e) if sign > 0 else exact_div(f, IntPoly.binomial(e))
        worst = max(worst, length(f))
    return worst


def _widen(c: np.ndarray, h: int, growth: int, stats: SearchStats) -> np.ndarray:
    if c.dtype != object and h * growth > INT64_MAX:
        stats.escalated = True
        return _to_object(c)
    return c


def _to_object(c: np.ndarray) -> np.ndarray:
    out = np.empty(c.shape, dtype=object)
    out[...] = c.tolist() if c.ndim else int(c)
    return out


def _expand(first: np.ndarray, plan, dtype, track=None) -> np.ndarray:
    """All 2**k products ``first * prod_{j in T} Phi_{d_j}`` as rows.

    Row ``r`` includes bottom divisor ``j`` iff bit ``j`` of ``r`` is set.
    ``track`` (a list) receives the largest row length seen at every
    intermediate step, including the partial binomial products.
    """
    k = len(plan)
    w = first.shape[-1]
    m = np.zeros((1 << k, w), dtype=dtype)
    m[0] = first
    for j, ops in enumerate(plan):
        half = 1 << j
        cur = m[:half]
        for e, sign in ops:
            if sign > 0:
                nxt = -cur
                nxt[:, e:] += cur[:, :-e]
            else:
                nxt = -np.cumsum(cur.reshape(half, w // e, e), axis=1, dtype=dtype).reshape(half, w)
            cur = nxt
            if track is not None:
                track.append(np.abs(cur).sum(axis=1).max())
        m[half : 2 * half] = cur
    return m


class _Bottom:
    """Precomputed data for the block of the last ``k`` tree levels."""

    def __init__(self, divs: list[int], force_bigint: bool):
        self.divs = divs
        self.plan = [_phi_ops(d) for d in divs]
        self.k = len(divs)
        self.lcm = math.lcm(1, *(e for ops in self.plan for e, s in ops if s < 0))
        # widest intermediate degree contributed by the block
        grow = 0
        extra = 0
        for d, ops in zip(divs, self.plan):
            extra = max(extra, grow + sum(e for e, s in ops if s > 0))
            grow += euler_phi(d)
        self.grow = grow
        self.extra = max(extra, grow)
        width = -(-(self.extra + 1) // self.lcm) * self.lcm
        one = np.zeros(width, dtype=np.float64)
        one[0] = 1.0
        track: list = []
        rows = _expand(one, self.plan, np.float64, track)
        if max([1.0, *track]) >= 2.0**52:
            rows = _expand(_to_object(one.astype(np.int64)), self.plan, object, track := [])
        #: largest length of any polynomial the block multiplies a prefix by
        self.max_length = int(max([1, *track]))
        #: coefficientwise max |coefficient| over all block products
        self.envelope = np.abs(rows).max(axis=0)
        self.force_bigint = force_bigint

    def dtype_for(self, h: int):
        if self.force_bigint:
            return object
        bound = h * self.max_length
        if bound < 2**15 - 1:
            return np.int16
        if bound < 2**31 - 1:
            return np.int32
        if bound < INT64_MAX:
            return np.int64
        return object


def _order(divs: list[int]) -> list[int]:
    return sorted(divs, key=lambda d: (-euler_phi(d), d))


@dataclass
class _Best:
    """Running maximum with a bounded, lexicographically smallest witness list."""

    cap: int
    value: int = -1
    total: int = 0
    witnesses: list = field(default_factory=list)

    def offer(self, value: int, subsets) -> None:
        if value < self.value:
            return
        subsets = list(subsets)
        if value > self.value:
            self.value, self.total, self.witnesses = value, 0, []
        self.total += len(subsets)
        self.witnesses = heapq.nsmallest(self.cap, self.witnesses + [sorted(s) for s in subsets])

    def merge(self, other: _Best) -> None:
        if other.value > self.value:
            self.value, self.total, self.witnesses = other.value, other.total, list(other.witnesses)
        elif other.value == self.value:
            self.total += other.total
            self.witnesses = heapq.nsmallest(self.cap, self.witnesses + other.witnesses)


class _Engine:
    def __init__(self, divs, measure, opts: SearchOptions, floor: int = -1):
        self.measure = measure
        self.opts = opts
        order = _order(divs)
        k = opts.block_levels
        if k is None:
            k = _auto_block(order, opts.prune)
        if opts.jobs > 1:
            # keep enough levels above the block to hand one subtree to each job
            k = min(k, len(order) - math.ceil(math.log2(opts.jobs)))
        k = max(0, min(k, len(order)))
        self.top = order[: len(order) - k]
        self.top_ops = [_phi_ops(d) for d in self.top]
        self.top_growth = [_growth(ops) for ops in self.top_ops]
        self.bottom = _Bottom(order[len(order) - k :], opts.force_bigint)
        self.floor = floor
        self.envelopes = self._suffix_envelopes() if opts.prune else None

    def _suffix_envelopes(self):
        """Coefficientwise bounds on |product| over every completion of a prefix.

        Completions from depth i either skip ``top[i]`` or multiply by it, so
        ``U_i = max(U_{i+1}, U_{i+1} * |Phi|)`` bounds them all.
        """
        env = [None] * (len(self.top) + 1)
        u = self.bottom.envelope.astype(np.float64)
        u = u[: _last_nonzero(u) + 1]
        env[len(self.top)] = u
        for i in range(len(self.top) - 1, -1, -1):
            phi = np.abs(cyclotomic(self.top[i]).array).astype(np.float64)
            grown = np.convolve(u, phi)
            grown[: len(u)] = np.maximum(grown[: len(u)], u)
            u = grown
            env[i] = u
        return env

    def run(self, prefix: tuple[int, ...] = ()):
        """DFS from a forced include/exclude prefix over the top divisors."""
        best = _Best(self.opts.witness_cap, value=-1)
        stats = SearchStats()
        c = np.ones(1, dtype=object if self.opts.force_bigint else np.int64)
        chosen = []
        for i, bit in enumerate(prefix):
            stats.nodes_visited += 1
            if bit:
                c = _apply_1d(_widen(c, _abs_max(c), self.top_growth[i], stats), self.top_ops[i])
                chosen.append(self.top[i])
        self._dfs(len(prefix), c, chosen, best, stats)
        return best, stats

    def _prunable(self, depth: int, a: np.ndarray, threshold: int) -> bool:
        env = self.envelopes[depth]
        if len(a) * len(env) > 4_000_000:
            return False
        a = a.astype(np.float64)
        if self.measure == LENGTH:
            bound = float(a.sum() * env.sum())
        else:
            bound = float(np.convolve(a, env).max())
        # float sums of nonnegative terms: relative error far below 1e-6
        return bound * (1 + 1e-6) < threshold

    def _dfs(self, depth, c, chosen, best, stats):
        stats.nodes_visited += 1
        a = np.abs(c)
        h = int(a.max())
        if self.envelopes is not None:
            threshold = max(best.value, self.floor)
            if threshold > 0 and self._prunable(depth, a, threshold):
                stats.leaves_pruned += 1 << (len(self.top) - depth + self.bottom.k)
                return
        if depth == len(self.top):
            self._leaf_block(c, h, chosen, best, stats)
            return
        inc = _apply_1d(_widen(c, h, self.top_growth[depth], stats), self.top_ops[depth])
        self._dfs(depth + 1, inc, chosen + [self.top[depth]], best, stats)
        self._dfs(depth + 1, c, chosen, best, stats)

    def _leaf_block(self, c, h, chosen, best, stats):
        bottom = self.bottom
        dtype = bottom.dtype_for(h)
        if dtype is object:
            stats.escalated = True
        width = -(-(len(c) + bottom.extra) // bottom.lcm) * bottom.lcm
        first = np.zeros(width, dtype=dtype)
        first[: len(c)] = c if dtype is not object else c.tolist()
        rows = _expand(first, bottom.plan, dtype)
        a = np.abs(rows)
        if self.measure == HEIGHT:
            vals = a.max(axis=1)
        else:
            if dtype is not object and width * bottom.max_length * h >= INT64_MAX:
                a = _to_object(a)
            vals = a.sum(axis=1, dtype=object if a.dtype == object else np.int64)
        stats.nodes_visited += (1 << bottom.k) - 1
        stats.leaves_evaluated += 1 << bottom.k
        top = int(vals.max())
        if top < best.value:
            return
        hits = np.flatnonzero(vals == top)
        subsets = [chosen + [d for j, d in enumerate(bottom.divs) if r >> j & 1] for r in hits.tolist()]
        best.offer(top, subsets)


def _last_nonzero(u: np.ndarray) -> int:
    nz = np.flatnonzero(u)
    return int(nz[-1]) if nz.size else 0


def _auto_block(order: list[int], prune: bool) -> int:
    """Bottom block size: ~4M matrix cells at most.

    With pruning, small blocks pay off: bounds are checked at every tree node
    above the block, and most of the tree is cut well before the leaves.
    """
    n = max(order) if order else 1
    cap = 6 if prune else 12
    k = 0
    while k < min(cap, len(order)) and (1 << (k + 1)) * (n + 1) <= 4_000_000:
        k += 1
    return k


def _run_task(args):
    engine, prefix = args
    return engine.run(prefix)


def subset_max(divs: list[int], measure: str = HEIGHT, opts: SearchOptions | None = None, *, floor: int = -1):
    """Exact maximum of ``measure`` over all products of ``Phi_d``, ``d`` in a subset of ``divs``.

    Returns ``(value, witnesses, witness_total, stats)``.  ``floor`` may carry
    a value known to be attained by some subset; it only feeds pruning.
    """
    opts = opts or SearchOptions()
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    engine = _Engine(list(divs), measure, opts, floor)
    jobs = max(1, opts.jobs)
    split = min(math.ceil(math.log2(jobs)), len(engine.top)) if jobs > 1 else 0
    prefixes = [tuple((i >> j) & 1 for j in range(split)) for i in range(1 << split)]
    best = _Best(opts.witness_cap)
    stats = SearchStats()
    if split == 0:
        results = [engine.run(())]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, [(engine, p) for p in prefixes]))
    for b, s in results:
        best.merge(b)
        stats.merge(s)
    return best.value, best.witnesses, best.total, stats


def _evaluate(subset, measure: str) -> int:
    c = np.ones(1, dtype=np.int64)
    stats = SearchStats()
    for d in sorted(subset, key=lambda d: -euler_phi(d)):
        ops = _phi_ops(d)
        c = _apply_1d(_widen(c, _abs_max(c), _growth(ops), stats), ops)
    return measure_of(IntPoly(c), measure)


def _seed(n: int, divs: list[int], measure: str, max_evals: int = 2000) -> int:
    """A value attained by some explicit subset, found by hill climbing.

    Only used as a pruning floor, so any attained value is sound; a good one
    just prunes more.
    """
    cands = [[d] for d in divs]
    cands.append([d for d in divs if d > 1 and omega(d) % 2 == 1])
    cands.append([d for d in divs if omega(d) % 2 == 0])
    w = lower_bound_witness(n)
    if w:
        cands.append(w)
    scored = sorted(((_evaluate(s, measure), s) for s in cands), reverse=True)
    best, cur = scored[0]
    cur = set(cur)
    if n > 20_000:
        return best
    evals = 0
    improved = True
    while improved and evals < max_evals:
        improved = False
        for d in divs:
            trial = cur ^ {d}
            v = _evaluate(trial, measure)
            evals += 1
            if v > best:
                best, cur, improved = v, trial, True
    return best


_PRUNE_MIN_TAU = 12


def _compute(n: int, measure: str, opts: SearchOptions | None) -> SearchResult:
    opts = opts or SearchOptions()
    if not isinstance(n, int) or n < 1:
        raise InputOutOfRange(f"n must be a positive integer, got {n!r}")
    t0 = time.perf_counter()
    if measure == HEIGHT and opts.allow_closed_form:
        known = known_formula(n)
        if known is not None:
            w = _closed_form_witness(n)
            return SearchResult(
                n=n, measure=measure, value=known[0], witnesses=[w], witness_total=1,
                method="closed_form", elapsed=time.perf_counter() - t0,
            )
    tau = num_divisors(n)
    if tau > opts.max_divisors:
        raise BudgetExceeded(f"n={n} has {tau} divisors; budget is {opts.max_divisors}")
    divs = divisors(n)
    if tau <= _PRUNE_MIN_TAU:
        # 2**tau leaves are cheaper than the envelope setup
        opts = replace(opts, prune=False)
    floor = _seed(n, divs, measure) if opts.prune else -1
    value, witnesses, total, stats = subset_max(divs, measure, opts, floor=floor)
    elapsed = time.perf_counter() - t0
    log.debug("n=%d %s=%d in %.3fs (%d nodes)", n, measure, value, elapsed, stats.nodes_visited)
    return SearchResult(
        n=n, measure=measure, value=value, witnesses=witnesses, witness_total=total,
        nodes_visited=stats.nodes_visited, escalated=stats.escalated, elapsed=elapsed,
        method="exhaustive", stats=stats,
    )


def compute_B(n: int, opts: SearchOptions | None = None) -> SearchResult:
    """B(n): the largest height of a divisor of x**n - 1 in Z[x]."""
    return _compute(n, HEIGHT, opts)


def compute_C(n: int, opts: SearchOptions | None = None) -> SearchResult:
    """C(n): the largest length (sum of |coefficients|) of a divisor of x**n - 1."""
    return _compute(n, LENGTH, opts)
