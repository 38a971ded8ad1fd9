import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ecmoments.curves import (
    CurvePair,
    NotSquarefree,
    SingularCurve,
    UndefinedSymbol,
    ap_legendre,
    ap_table,
    count_points,
    dirichlet_coefficients,
    hecke_powers,
    is_isomorphic,
    lambda_exact,
    lambda_n,
    root_number_formula,
    twist,
)
from ecmoments.orthogonality import ap_table_fft

# a_p = p + 1 - #E(F_p) by a pure-Python double loop over (x, y), frozen
AP_1_1 = {3: 0, 5: -3, 7: 3, 11: -2, 13: -4, 17: 0, 19: -1, 23: -4, 29: -6, 31: -1, 37: -10, 41: 7, 43: 10, 47: -12}
AP_2_1 = {3: -3, 5: -1, 7: 3, 11: -4, 13: 6, 17: -6, 19: -7, 23: -6, 29: -3, 31: 8, 37: 2, 41: 3, 43: -12, 47: -2}


@pytest.mark.parametrize("ab, table", [((1, 1), AP_1_1), ((2, 1), AP_2_1)])
def test_traces_against_point_count_oracle(ab, table):
    for p, ap in table.items():
        assert ap_legendre(*ab, p).ap == ap
        assert count_points(*ab, p) == p + 1 - ap


def test_singular_curve_rejected():
    with pytest.raises(SingularCurve):
        CurvePair(-3, 2)


@given(st.integers(-200, 200), st.integers(-200, 200), st.sampled_from([5, 7, 11, 13, 101, 211]))
@settings(max_examples=200, deadline=None)
def test_hasse_bound_and_point_count(a, b, p):
    tr = ap_legendre(a, b, p)
    assert tr.ap**2 <= 4 * p
    assert count_points(a, b, p) == p + 1 - tr.ap


@pytest.mark.parametrize("p", [5, 11, 23])
def test_table_matches_pointwise(p):
    tab = ap_table(p)
    for a in range(p):
        for b in range(p):
            assert tab[a, b] == ap_legendre(a, b, p).ap


@pytest.mark.parametrize("p", [151, 199, 257])
def test_fft_table_matches_direct_table(p):
    assert np.array_equal(ap_table_fft(p), ap_table(p))


@given(st.integers(-12, 12), st.integers(1, 20))
def test_hecke_recurrence_gives_chebyshev(ap, j):
    p = 13
    if ap * ap > 4 * p:
        return
    g = hecke_powers(ap, p, j, True)
    theta = math.acos(ap / (2 * math.sqrt(p)))
    want = p ** (j / 2) * (math.sin((j + 1) * theta) / math.sin(theta) if math.sin(theta) > 1e-12 else j + 1)
    assert math.isclose(g[j], want, rel_tol=1e-9, abs_tol=1e-9 * p ** (j / 2))


def test_bad_prime_powers_are_powers():
    assert hecke_powers(-1, 31, 4, False) == [1, -1, 1, -1, 1]


@given(st.integers(1, 60), st.integers(1, 60))
@settings(max_examples=100, deadline=None)
def test_lambda_multiplicative(m, n):
    if math.gcd(m, n) != 1:
        return
    assert lambda_exact(1, 1, m * n) == lambda_exact(1, 1, m) * lambda_exact(1, 1, n)


def test_dirichlet_coefficients_match_lambda():
    an = dirichlet_coefficients(1, 1, 300)
    for n in range(1, 301):
        assert math.isclose(an[n] / math.sqrt(n), lambda_n(CurvePair(1, 1), n), abs_tol=1e-12)
    assert np.all(an[2::2] == 0)


def test_twist_isomorphism():
    c = CurvePair(1, 1)
    assert is_isomorphic(c, CurvePair(*twist(1, 1, 2)))
    assert not is_isomorphic(c, CurvePair(2, 1))


# eps2 implied by the numeric root number and the local factors at p > 3,
# tabulated on (a mod 8, b mod 8) from 2082 curves with |a| <= 30, |b| <= 61
EPS2_MOD8 = {
    (0, 1): -1, (0, 3): -1, (0, 5): -1, (0, 7): -1, (1, 1): 1, (1, 3): 1, (1, 5): 1, (1, 7): -1,
    (2, 1): 1, (2, 3): 1, (2, 5): -1, (2, 7): 1, (3, 1): -1, (3, 3): -1, (3, 5): -1, (3, 7): -1,
    (4, 1): -1, (4, 3): -1, (4, 5): -1, (4, 7): -1, (5, 1): 1, (5, 3): -1, (5, 5): 1, (5, 7): 1,
    (6, 1): 1, (6, 3): 1, (6, 5): -1, (6, 7): 1, (7, 1): -1, (7, 3): -1, (7, 5): -1, (7, 7): -1,
}


def test_root_number_formula_known_curves():
    # (1, 1): 4 + 27 = 31 prime, root number -1 (rank one, generator (0, 1))
    assert root_number_formula(1, 1, EPS2_MOD8[(1, 1)]) == -1
    # (-1, 1): 23 prime, root number -1
    assert root_number_formula(-1, 1, EPS2_MOD8[(7, 1)]) == -1


def test_root_number_formula_errors():
    with pytest.raises(NotSquarefree):
        root_number_formula(2, 2, 1)  # 32 + 108 = 140
    with pytest.raises(UndefinedSymbol):
        root_number_formula(1, 0, 1)
    with pytest.raises(ValueError):
        root_number_formula(1, 1, 0)
