import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ecmoments.series import TruncatedSeries, exp_taylor, reciprocal_taylor

small = st.integers(-5, 5)


def _from_sympy(expr, zs, order):
    poly = sympy.Poly(sympy.expand(expr), *zs)
    coeffs = {m: c for m, c in zip(poly.monoms(), poly.coeffs()) if sum(m) <= order}
    return TruncatedSeries(len(zs), order, coeffs)


def _to_sympy(s, zs):
    return sum(c * sympy.prod([z**e for z, e in zip(zs, m)]) for m, c in s.coeffs.items())


def _truncate(expr, zs, order):
    poly = sympy.Poly(sympy.expand(expr), *zs)
    return sum(c * sympy.prod([z**e for z, e in zip(zs, m)]) for m, c in zip(poly.monoms(), poly.coeffs()) if sum(m) <= order)


@given(st.lists(small, min_size=6, max_size=6), st.lists(small, min_size=6, max_size=6))
@settings(max_examples=50, deadline=None)
def test_ring_operations_match_sympy(u, v):
    zs = sympy.symbols("x y")
    x, y = zs
    order = 3
    f = u[0] + u[1] * x + u[2] * y + u[3] * x * y + u[4] * x**2 + u[5] * y**3
    g = v[0] + v[1] * x + v[2] * y + v[3] * x * y + v[4] * x**2 + v[5] * y**3
    F, G = _from_sympy(f, zs, order), _from_sympy(g, zs, order)
    assert sympy.expand(_to_sympy(F * G, zs) - _truncate(f * g, zs, order)) == 0
    assert sympy.expand(_to_sympy(F + G, zs) - _truncate(f + g, zs, order)) == 0
    assert sympy.expand(_to_sympy(F - G, zs) - _truncate(f - g, zs, order)) == 0
    assert sympy.expand(_to_sympy(F**3, zs) - _truncate(f**3, zs, order)) == 0


def test_constructors_and_coefficients():
    s = TruncatedSeries.linear(3, 2, [1, 0, 2]) + 5
    assert s.coefficient((0, 0, 0)) == 5
    assert s.coefficient((0, 0, 1)) == 2
    assert TruncatedSeries.monomial(2, 2, (2, 1)).coeffs == {}
    assert (s * 2 - s).coeffs == s.coeffs


def test_compose_with_exp():
    x = sympy.Symbol("x")
    order = 5
    lin = TruncatedSeries.linear(1, order, [1])
    out = lin.compose([sympy.Rational(1, math.factorial(n)) for n in range(order + 1)])
    ref = sympy.series(sympy.exp(x), x, 0, order + 1).removeO()
    assert sympy.expand(_to_sympy(out, [x]) - ref) == 0
    with pytest.raises(ValueError):
        (lin + 1).compose([1, 1])


def test_exp_and_reciprocal_taylor():
    x = sympy.Symbol("x")
    g = [0, sympy.Rational(1, 2), sympy.Rational(-1, 3), 2]
    ref = sympy.series(sympy.exp(sum(c * x**n for n, c in enumerate(g))), x, 0, 6).removeO()
    got = exp_taylor(g, 5)
    assert all(sympy.simplify(got[n] - ref.coeff(x, n)) == 0 for n in range(6))
    f = [2, 1, 0, sympy.Rational(1, 7)]
    ref = sympy.series(1 / sum(c * x**n for n, c in enumerate(f)), x, 0, 6).removeO()
    got = reciprocal_taylor(f, 5)
    assert all(sympy.simplify(got[n] - ref.coeff(x, n)) == 0 for n in range(6))
    with pytest.raises(ValueError):
        exp_taylor([1, 1], 3)
