"""Arithmetic functions and exact cyclotomic polynomials."""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from itertools import product
from math import prod

from cyclomax.polycore import IntPoly, exact_div, height, inflate

#: default upper limit accepted by :func:`factor`
MAX_N = 2**63 - 1


class InputOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return prod(p**a for p, a in self.pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return "*".join(str(p) if a == 1 else f"{p}^{a}" for p, a in self.pairs)

    @classmethod
    def parse(cls, text: str) -> Factorization:
        text = text.strip()
        if text == "1":
            return cls(())
        pairs = []
        for part in text.split("*"):
            p, _, a = part.partition("^")
            pairs.append((int(p), int(a) if a else 1))
        return cls(tuple(pairs))


def _check(n: int, bound: int = MAX_N) -> None:
    if not isinstance(n, int) or n < 1 or n > bound:
        raise InputOutOfRange(f"n must be an integer in [1, {bound}], got {n!r}")


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def factor(n: int, bound: int = MAX_N) -> Factorization:
    """Complete factorization by trial division; ``factor(1)`` is empty."""
    _check(n, bound)
    pairs = []
    for p in (2, 3):
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            pairs.append((p, a))
    f = 5
    step = 2
    while f * f <= n:
        if n % f == 0:
            a = 0
            while n % f == 0:
                n //= f
                a += 1
            pairs.append((f, a))
        f += step
        step = 6 - step
    if n > 1:
        pairs.append((n, 1))
    return Factorization(tuple(pairs))


def _fac(n) -> Factorization:
    return n if isinstance(n, Factorization) else factor(n)


def divisors(n) -> list[int]:
    """All divisors of ``n`` in ascending order."""
    fac = _fac(n)
    powers = [[p**k for k in range(a + 1)] for p, a in fac]
    return sorted(prod(combo) for combo in product(*powers))


def num_divisors(n) -> int:
    return prod(a + 1 for _, a in _fac(n))


def euler_phi(n) -> int:
    return prod((p - 1) * p ** (a - 1) for p, a in _fac(n))


def mobius(n) -> int:
    fac = _fac(n)
    if any(a > 1 for _, a in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def omega(n) -> int:
    """Number of distinct prime divisors."""
    return len(_fac(n))


def radical(n) -> int:
    return prod(p for p, _ in _fac(n))


def is_squarefree(n) -> bool:
    return all(a == 1 for _, a in _fac(n))


def cyclotomic_binomials(n: int) -> list[tuple[int, int]]:
    """``[(e, mu(n/e)), ...]`` over divisors ``e`` with ``mu(n/e) != 0``.

    ``Phi_n = prod (x**e - 1) ** mu(n/e)``; used by the search engine to
    multiply by ``Phi_n`` with a handful of linear-time passes.
    """
    rad = radical(n)
    out = []
    for d in divisors(rad):
        mu = mobius(d)
        out.append((n // d, mu))
    out.sort()
    return out


class CyclotomicCache:
    """Thread-safe LRU of cyclotomic polynomials, capped by total coefficients."""

    def __init__(self, max_coeffs: int = 50_000_000):
        self.max_coeffs = max_coeffs
        self._data: OrderedDict[int, IntPoly] = OrderedDict()
        self._size = 0
        self._lock = threading.RLock()

    def get(self, n: int) -> IntPoly | None:
        with self._lock:
            f = self._data.get(n)
            if f is not None:
                self._data.move_to_end(n)
            return f

    def put(self, n: int, f: IntPoly) -> None:
        with self._lock:
            if n in self._data or len(f) > self.max_coeffs:
                return
            self._data[n] = f
            self._size += len(f)
            while self._size > self.max_coeffs:
                _, old = self._data.popitem(last=False)
                self._size -= len(old)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self._size = 0

    def __contains__(self, n: int) -> bool:
        return n in self._data

    def __len__(self) -> int:
        return len(self._data)


_cache = CyclotomicCache()


def _build(n: int, lookup) -> IntPoly:
    rad = radical(n)
    if rad == n:
        f = IntPoly.binomial(n)
        for d in divisors(n)[:-1]:
            f = exact_div(f, lookup(d))
        return f
    return inflate(lookup(rad), n // rad)


def cyclotomic(n: int, *, cache: CyclotomicCache | None = _cache) -> IntPoly:
    """The n-th cyclotomic polynomial.

    Squarefree ``n``: ``x**n - 1`` with every ``Phi_d`` (``d | n``, ``d < n``)
    divided out in increasing ``d``.  Otherwise ``Phi_rad(n)(x**(n/rad(n)))``.
    Pass ``cache=None`` to build without memoization.
    """
    _check(n)
    if cache is None:
        return _build(n, lambda d: cyclotomic(d, cache=None))
    f = cache.get(n)
    if f is None:
        f = _build(n, lambda d: cyclotomic(d, cache=cache))
        cache.put(n, f)
    return f


def a_function(n: int) -> int:
    """Height of the n-th cyclotomic polynomial."""
    return height(cyclotomic(n))


def prefix_product_check(p: int, k: int) -> bool:
    """Is ``Phi_p * Phi_{p^2} * ... * Phi_{p^k}`` the all-ones polynomial of length p**k?"""
    f = IntPoly([1])
    for i in range(1, k + 1):
        f = f * cyclotomic(p**i)
    return f == IntPoly.ones(p**k)
