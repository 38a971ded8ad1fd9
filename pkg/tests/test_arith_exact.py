import math
from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from ecmoments.arith import (
    crt_pair,
    euler_phi,
    factorize,
    iroot_floor,
    is_prime,
    is_squarefree,
    jacobi,
    legendre,
    mobius,
    primes_upto,
)
from ecmoments.exact import Surd


def test_primes_match_sympy():
    assert primes_upto(2000) == list(sympy.primerange(2, 2001))


@given(st.integers(min_value=1, max_value=10**12))
@settings(max_examples=200, deadline=None)
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(n)


@given(st.integers(min_value=1, max_value=10**6))
def test_mobius_and_phi_match_sympy(n):
    assert mobius(n) == int(sympy.mobius(n))
    assert euler_phi(n) == int(sympy.totient(n))
    assert is_squarefree(n) == (mobius(n) != 0)


@given(st.integers(min_value=2, max_value=10**9))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(), st.integers(min_value=1, max_value=10**6).map(lambda m: 2 * m + 1))
def test_jacobi_matches_sympy(a, n):
    assert jacobi(a, n) == sympy.jacobi_symbol(a, n)


@given(st.integers(min_value=0, max_value=10**30), st.integers(min_value=2, max_value=6))
def test_iroot_floor_brackets(x, k):
    r = iroot_floor(x, k)
    assert r**k <= x < (r + 1) ** k


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_crt_pair(r1, r2):
    x = crt_pair(r1, 7, r2, 11)
    assert x % 7 == r1 % 7 and x % 11 == r2 % 11


def test_legendre_euler_criterion():
    for p in (5, 7, 11, 101):
        for a in range(p):
            want = 0 if a == 0 else (1 if pow(a, (p - 1) // 2, p) == 1 else -1)
            assert legendre(a, p) == want


surds = st.builds(
    lambda c1, c2, c3: Surd({1: c1, 2: c2, 15: c3}),
    st.fractions(max_denominator=50),
    st.fractions(max_denominator=50),
    st.fractions(max_denominator=50),
)


@given(surds, surds, surds)
def test_surd_ring_laws(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x - x) == Surd()


@given(surds, surds)
def test_surd_float_is_a_homomorphism(x, y):
    assert math.isclose(float(x * y), float(x) * float(y), rel_tol=1e-9, abs_tol=1e-9)


def test_surd_sqrt_and_powers():
    assert Surd.sqrt(12) == Surd({3: 2})
    assert Surd.sqrt(6) * Surd.sqrt(10) == Surd({15: 2})
    assert Surd.prime_power(5, 3) == Surd({5: 5})
    assert Surd.prime_power(5, -3) * Surd.prime_power(5, 3) == Surd.rational(1)
    assert (Surd.sqrt(2) ** 4).to_fraction() == Fraction(4)
