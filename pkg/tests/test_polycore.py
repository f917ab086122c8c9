from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclomax.polycore import (
    INT64_MAX,
    IntPoly,
    NotDivisible,
    binomial_div,
    binomial_mul,
    exact_div,
    height,
    inflate,
    length,
    mul,
    sign_alternate,
)

small = st.lists(st.integers(-10, 10), min_size=1, max_size=65).map(IntPoly)
wide = st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=40).map(lambda c: IntPoly(c, bigint=True))


def schoolbook(a, b):
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            out[i + j] += x * y
    return IntPoly(out)


@given(small, small)
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(small, small, small)
def test_mul_associates(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(small, small, small)
def test_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(small, small)
def test_karatsuba_matches_schoolbook(a, b):
    assert mul(a, b, threshold=2) == schoolbook(a, b)


def test_karatsuba_unbalanced():
    rng = np.random.default_rng(1)
    a = IntPoly(rng.integers(-5, 6, 1000))
    b = IntPoly(rng.integers(-5, 6, 300))
    assert mul(a, b) == IntPoly(np.convolve(a.array, b.array))


@given(small, small)
def test_exact_div_round_trip(a, b):
    if b.is_zero():
        return
    assert exact_div(a * b, b) == a


def test_exact_div_newton_path():
    rng = np.random.default_rng(7)
    a = IntPoly(rng.integers(-3, 4, 600))
    b = IntPoly([1, *rng.integers(-3, 4, 199), 1])
    assert exact_div(a * b, b) == a


def test_exact_div_rejects_remainder():
    with pytest.raises(NotDivisible):
        exact_div(IntPoly([1, 0, 1]), IntPoly([-1, 1]))
    with pytest.raises(ZeroDivisionError):
        exact_div(IntPoly([1]), IntPoly())


@given(small)
def test_height_at_most_length(f):
    assert height(f) <= length(f)


@given(small, small)
def test_length_submultiplicative(a, b):
    assert length(a * b) <= length(a) * length(b)


@given(small, st.integers(1, 7))
def test_inflate(f, m):
    g = inflate(f, m)
    assert height(g) == height(f)
    assert length(g) == length(f)
    assert g.degree == m * f.degree or f.is_zero()
    assert g(2) == f(2**m)


@given(small)
def test_sign_alternate_is_involution(f):
    assert sign_alternate(sign_alternate(f)) == f
    assert sign_alternate(f)(3) == f(-3)


@given(wide, wide)
def test_bigint_products(a, b):
    assert a * b == schoolbook(a, b)


@given(small, small)
def test_bigint_agrees_with_word(a, b):
    assert a.to_bigint() * b.to_bigint() == a * b


def test_escalates_instead_of_overflowing():
    big = IntPoly([INT64_MAX // 2, INT64_MAX // 2])
    prod = big * big
    assert prod.escalated
    assert prod.coeffs[1] == 2 * (INT64_MAX // 2) ** 2


@given(small, st.integers(1, 9))
def test_binomial_kernels_invert(f, e):
    w = -(-(len(f) + e) // e) * e
    c = np.zeros(w, dtype=np.int64)
    c[: len(f)] = f.array
    m = binomial_mul(c, e)
    assert IntPoly(m) == f * IntPoly.binomial(e)
    assert np.array_equal(binomial_div(m, e), c)


def test_binomial_helpers():
    assert IntPoly.binomial(3).coeffs == (-1, 0, 0, 1)
    assert IntPoly.ones(4).coeffs == (1, 1, 1, 1)
    assert IntPoly([0, 0]).is_zero()
    assert IntPoly([1, 2, 0]).degree == 1


@given(small, st.integers(1, 70))
def test_exact_div_by_binomial(f, e):
    b = IntPoly.binomial(e)
    assert exact_div(f * b, b) == f
    assert exact_div(f * b, -b) == -f
    if not f.is_zero():
        with pytest.raises(NotDivisible):
            exact_div(f * b + IntPoly([1]), b)
