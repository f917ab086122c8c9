"""Exact dense integer polynomials.

Coefficients live in a numpy array, low degree first.  Values are held as
``int64`` whenever a rigorous magnitude bound says the operation cannot
overflow; otherwise the operation is carried out on Python integers (numpy
``object`` arrays) and the result is marked escalated.  Callers never see the
difference except through :attr:`IntPoly.escalated`.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

# Largest magnitude an int64 slot may hold.  -2**63 is excluded so that
# ``abs`` is always safe.
INT64_MAX = 2**63 - 1

#: operand size (coefficients) above which multiplication switches to Karatsuba
KARATSUBA_THRESHOLD = 256


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


def _fits(bound: int) -> bool:
    return bound <= INT64_MAX


def _to_array(values, bigint: bool) -> np.ndarray:
    if isinstance(values, np.ndarray) and values.dtype != object and not bigint:
        if values.dtype.kind not in "iub":
            raise TypeError(f"integer coefficients required, got {values.dtype}")
        return np.array(values, dtype=np.int64)
    ints = [int(v) for v in values]
    if not bigint and all(-INT64_MAX <= v <= INT64_MAX for v in ints):
        return np.array(ints, dtype=np.int64)
    out = np.empty(len(ints), dtype=object)
    out[:] = ints
    return out


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return c[:0]
    return c[: nz[-1] + 1]


def _height(c: np.ndarray) -> int:
    if c.size == 0:
        return 0
    return int(np.abs(c).max())


class IntPoly:
    """Immutable polynomial with exact integer coefficients.

    ``IntPoly([1, 0, -1])`` is ``1 - x**2``.  The zero polynomial has no
    coefficients and degree ``-1``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[int] | np.ndarray = (), *, bigint: bool = False):
        c = _trim(_to_array(coeffs, bigint))
        c.flags.writeable = False
        self._c = c

    @classmethod
    def _wrap(cls, c: np.ndarray) -> IntPoly:
        p = cls.__new__(cls)
        c = _trim(c)
        c.flags.writeable = False
        p._c = c
        return p

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> IntPoly:
        c = np.zeros(k + 1, dtype=np.int64)
        c[k] = coeff
        return cls._wrap(c)

    @classmethod
    def binomial(cls, m: int) -> IntPoly:
        """``x**m - 1``."""
        c = np.zeros(m + 1, dtype=np.int64)
        c[0], c[m] = -1, 1
        return cls._wrap(c)

    @classmethod
    def ones(cls, k: int) -> IntPoly:
        """``1 + x + ... + x**(k-1)``."""
        return cls._wrap(np.ones(k, dtype=np.int64))

    @property
    def array(self) -> np.ndarray:
        """Read-only coefficient array (int64 or object)."""
        return self._c

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self._c)

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def escalated(self) -> bool:
        return self._c.dtype == object

    def is_zero(self) -> bool:
        return self._c.size == 0

    def to_bigint(self) -> IntPoly:
        return IntPoly(self.coeffs, bigint=True)

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self._c):
            return int(self._c[i])
        return 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntPoly):
            return NotImplemented
        if len(self._c) != len(other._c):
            return False
        if self.escalated or other.escalated:
            return self.coeffs == other.coeffs
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __neg__(self) -> IntPoly:
        return IntPoly._wrap(-self._c)

    def __add__(self, other: IntPoly) -> IntPoly:
        return add(self, other)

    def __sub__(self, other: IntPoly) -> IntPoly:
        return add(self, -other)

    def __mul__(self, other: IntPoly) -> IntPoly:
        return mul(self, other)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def height(f: IntPoly) -> int:
    """Largest coefficient in absolute value (0 for the zero polynomial)."""
    return _height(f.array)


def length(f: IntPoly) -> int:
    """Sum of absolute values of the coefficients."""
    c = f.array
    if c.size == 0:
        return 0
    if c.dtype != object and _fits(_height(c) * c.size):
        return int(np.abs(c).sum())
    return sum(abs(int(v)) for v in c)


def _as_object(c: np.ndarray) -> np.ndarray:
    if c.dtype == object:
        return c
    out = np.empty(c.size, dtype=object)
    out[:] = c.tolist()
    return out


def add(a: IntPoly, b: IntPoly) -> IntPoly:
    x, y = a.array, b.array
    if len(x) < len(y):
        x, y = y, x
    big = x.dtype == object or y.dtype == object or not _fits(_height(x) + _height(y))
    if big:
        x, y = _as_object(x), _as_object(y)
    out = x.copy()
    out[: len(y)] += y
    return IntPoly._wrap(out)


def _karatsuba(a: np.ndarray, b: np.ndarray, threshold: int) -> np.ndarray:
    la, lb = len(a), len(b)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    if lb <= threshold:
        return np.convolve(a, b)
    out = np.zeros(la + lb - 1, dtype=a.dtype)
    if 2 * lb <= la:
        for s in range(0, la, lb):
            part = _karatsuba(a[s : s + lb], b, threshold)
            out[s : s + len(part)] += part
        return out
    m = la // 2
    a0, a1 = a[:m], a[m:]
    b0, b1 = b[:m], b[m:]
    z0 = _karatsuba(a0, b0, threshold)
    z2 = _karatsuba(a1, b1, threshold)
    sa = a1.copy()
    sa[:m] += a0
    sb = np.zeros(max(m, lb - m), dtype=b.dtype)
    sb[: lb - m] = b1
    sb[:m] += b0
    z1 = _karatsuba(sa, sb, threshold)
    z1[: len(z0)] -= z0
    z1[: len(z2)] -= z2
    out[: len(z0)] += z0
    out[2 * m : 2 * m + len(z2)] += z2
    tail = la + lb - 1 - m
    out[m : m + min(len(z1), tail)] += z1[:tail]
    return out


def _mul_bound(ha: int, hb: int, la: int, lb: int, threshold: int) -> int:
    # Karatsuba doubles operand heights at each split; depth <= log2(m/threshold)+1.
    m = min(la, lb)
    depth_factor = 2 * max(1, (2 * m) // max(threshold, 1) + 2)
    return 3 * ha * hb * m * depth_factor


def mul(a: IntPoly, b: IntPoly, threshold: int | None = None) -> IntPoly:
    """Exact product.  Schoolbook below ``threshold`` coefficients, Karatsuba above."""
    if a.is_zero() or b.is_zero():
        return IntPoly()
    if threshold is None:
        threshold = KARATSUBA_THRESHOLD
    x, y = a.array, b.array
    if x.dtype != object and y.dtype != object:
        bound = _mul_bound(_height(x), _height(y), len(x), len(y), threshold)
        if _fits(bound):
            return IntPoly._wrap(_karatsuba(x, y, threshold))
    return IntPoly._wrap(_karatsuba(_as_object(x), _as_object(y), threshold))


def truncate(f: IntPoly, k: int) -> IntPoly:
    """``f mod x**k``."""
    return IntPoly._wrap(f.array[:k].copy())


def reverse(f: IntPoly, deg: int | None = None) -> IntPoly:
    """``x**deg * f(1/x)``; ``deg`` defaults to ``f.degree``."""
    c = f.array
    if deg is None:
        deg = len(c) - 1
    out = np.zeros(deg + 1, dtype=c.dtype)
    out[: len(c)] = c
    return IntPoly._wrap(out[::-1].copy())


def series_inverse(f: IntPoly, k: int, *, word_only: bool = False) -> IntPoly | None:
    """Power series inverse of ``f`` modulo ``x**k``; needs ``f(0) == ±1``.

    With ``word_only`` the iteration gives up (returns None) as soon as the
    partial inverse no longer fits in machine words.
    """
    c0 = f[0]
    if c0 not in (1, -1):
        raise ValueError("series inverse over Z needs a unit constant term")
    g = IntPoly([c0])
    prec = 1
    two = IntPoly([2])
    while prec < k:
        prec = min(2 * prec, k)
        fg = truncate(mul(truncate(f, prec), g), prec)
        g = truncate(mul(g, two - fg), prec)
        if word_only and g.escalated:
            return None
    return g


def _long_division(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Schoolbook division over Z; raises NotDivisible on a fractional quotient.

    Runs on int64 while ``H(a) + H(b) * L(q so far)`` stays representable and
    switches the remainder to Python ints the moment it might not.
    """
    db = len(b) - 1
    lead = int(b[-1])
    hb = _height(b)
    big = a.dtype == object or b.dtype == object
    r = _as_object(a).copy() if big else a.copy()
    bb = _as_object(b) if big else b
    budget = _height(a)
    q = [0] * (len(a) - db)
    for i in range(len(q) - 1, -1, -1):
        c = int(r[i + db])
        if c == 0:
            continue
        t, rem = divmod(c, lead)
        if rem:
            raise NotDivisible(f"leading coefficient {lead} does not divide {c}")
        q[i] = t
        budget += abs(t) * hb
        if not big and not _fits(budget):
            big = True
            r, bb = _as_object(r), _as_object(b)
        r[i : i + db + 1] -= t * bb
    return _to_array(q, False), r[:db]


# below this many quotient or divisor coefficients, schoolbook division wins
_NEWTON_MIN = 64


def _is_binomial(b: IntPoly) -> bool:
    """``b == ±(x**e - 1)`` for some e >= 1."""
    c = b.array
    return len(c) > 1 and abs(int(c[-1])) == 1 and int(c[0]) == -int(c[-1]) and not np.any(c[1:-1])


def _binomial_quotient(a: IntPoly, e: int, sign: int) -> IntPoly:
    c = a.array
    w = -(-len(c) // e) * e
    dtype = c.dtype if _fits(length(a)) else object
    buf = np.zeros(w, dtype=dtype)
    buf[: len(c)] = c
    q = binomial_div(buf, e)
    if np.any(q[len(c) - e :] != 0):
        raise NotDivisible("nonzero remainder")
    q = q[: len(c) - e]
    return IntPoly._wrap(q if sign == 1 else -q)


def exact_div(a: IntPoly, b: IntPoly) -> IntPoly:
    """Quotient ``q`` with ``q * b == a``.

    Raises :class:`NotDivisible` if ``b`` does not divide ``a`` over Z and
    :class:`ZeroDivisionError` for ``b == 0``.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return IntPoly()
    da, db = a.degree, b.degree
    if da < db:
        raise NotDivisible("divisor has larger degree than dividend")
    dq = da - db
    if _is_binomial(b):
        return _binomial_quotient(a, db, int(b[db]))
    if min(dq, db) >= _NEWTON_MIN and b[db] in (1, -1) and not (a.escalated or b.escalated):
        # Monic divisor: quotient from the reversed power series, then verify.
        # An exploding inverse series means b has roots far from the unit
        # circle; schoolbook division is the better tool there.
        inv = series_inverse(reverse(b), dq + 1, word_only=True)
        if inv is not None:
            q = reverse(truncate(mul(truncate(reverse(a), dq + 1), inv), dq + 1), dq)
            if mul(q, b) != a:
                raise NotDivisible("nonzero remainder")
            return q
    q, r = _long_division(a.array, b.array)
    if np.any(r != 0):
        raise NotDivisible("nonzero remainder")
    return IntPoly._wrap(q)


def inflate(f: IntPoly, m: int) -> IntPoly:
    """``f(x**m)``."""
    if m < 1:
        raise ValueError("inflation factor must be positive")
    c = f.array
    if m == 1 or c.size == 0:
        return f
    out = np.zeros(m * (len(c) - 1) + 1, dtype=c.dtype)
    out[::m] = c
    return IntPoly._wrap(out)


def sign_alternate(f: IntPoly) -> IntPoly:
    """``f(-x)``."""
    c = f.array.copy()
    c[1::2] = -c[1::2]
    return IntPoly._wrap(c)


# -- in-place style kernels on raw coefficient arrays --------------------------
#
# The search engine keeps its working products as bare arrays (1-D, or 2-D with
# one polynomial per row) and multiplies/divides by binomials x**e - 1 along the
# last axis.  Arrays must be wide enough to hold every intermediate degree.


def binomial_mul(c: np.ndarray, e: int) -> np.ndarray:
    """Coefficients of ``c * (x**e - 1)`` without changing the width."""
    out = -c
    out[..., e:] += c[..., :-e]
    return out


def binomial_div(c: np.ndarray, e: int) -> np.ndarray:
    """Coefficients of ``c / (x**e - 1)``, assuming the division is exact.

    Uses ``q[i] = q[i-e] - c[i]``: a cumulative sum down each residue class
    mod ``e``.  Width must be a multiple of ``e``.
    """
    w = c.shape[-1]
    lead = c.shape[:-1]
    q = c.reshape(*lead, w // e, e)
    return -np.cumsum(q, axis=-2, dtype=c.dtype).reshape(*lead, w)
