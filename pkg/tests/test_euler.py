import math

import pytest
from hypothesis import given, settings, strategies as st

from ecmoments.arith import primes_upto
from ecmoments.euler import (
    OutsideRegion,
    TruncationWarning,
    a1prime,
    ak,
    ak_local,
    ak_shifted,
    aprime_local,
    aprime_local_alpha,
    aprime_product,
    hk_local,
    hk_local_series,
    phi_ratio,
)
from ecmoments.families import FamilySpec


def test_a0_is_one():
    res = ak(0, pmax=10_000)
    assert abs(res.value - 1) < 1e-6
    assert res.tail_estimate < 1e-6


@pytest.mark.parametrize("p", [5, 7, 11, 13, 97, 1009])
def test_zeroth_local_factor_is_one(p):
    assert abs(ak_local(p, 0) - 1) < 1e-12


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101])
@pytest.mark.parametrize("zs", [(0.0,), (0.1,), (0.0, 0.0), (0.05, -0.1), (0.2, 0.3)])
def test_local_factor_two_paths(p, zs):
    assert hk_local(p, zs) == pytest.approx(hk_local_series(p, zs), abs=1e-10)


@pytest.mark.parametrize("k", [1, 2, 3, -0.25, 0.5])
def test_local_factors_decay_like_inverse_square(k):
    scaled = [abs(ak_local(p, k) - 1) * p * p for p in primes_upto(2000) if p > 100]
    assert max(scaled) < 10 * (1 + abs(k)) ** 2


def test_a1_stable_to_four_digits():
    a, b = ak(1, pmax=1000).value, ak(1, pmax=10_000).value
    assert round(a, 4) == round(b, 4)


@pytest.mark.parametrize("k", [1, 2, -0.25, 0.5])
def test_truncation_bound_is_honest(k):
    small, big = ak(k, pmax=1000), ak(k, pmax=10_000)
    assert abs(math.log(big.value / small.value)) <= small.tail_estimate


def test_a_quarter_below_zero_is_finite():
    v = ak(-0.25, pmax=1000).value
    assert math.isfinite(v) and 0.5 < v < 1.5


def test_region_and_pmax_checks():
    with pytest.raises(OutsideRegion):
        ak(-0.5)
    with pytest.raises(ValueError):
        ak(1, pmax=7)
    with pytest.raises(OutsideRegion):
        a1prime(-0.2)


def test_shifted_product_at_origin_matches_ak():
    assert ak_shifted((0.0, 0.0), pmax=500).value == pytest.approx(ak(2, pmax=500).value, rel=1e-12)


def test_congruence_class_factors():
    spec = FamilySpec(q=5)
    assert phi_ratio(spec) == pytest.approx(8 / 30)
    assert math.isfinite(ak(1, spec, pmax=500).value)
    # p = 5 carries the residue-class value of lambda instead of the average
    assert ak_local(5, 1, spec) != ak_local(5, 1)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 53])
def test_positive_rank_local_paths(p):
    series = aprime_local(p, 1, emax=45)
    assert aprime_local_alpha(p, 0.0) == pytest.approx(series, abs=1e-13)
    assert abs(series - 1) * p * p < 4


def test_positive_rank_frozen_local_values():
    # frozen from the brute-force Q' sums at emax = 45
    assert aprime_local(5, 1, 45) == pytest.approx(1.0893828647355892, abs=1e-13)
    assert aprime_local(11, 1, 45) == pytest.approx(1.001085429097788, abs=1e-13)


def test_positive_rank_truncation_warning():
    with pytest.warns(TruncationWarning):
        aprime_local(5, 2, 14)
    with pytest.raises(ValueError):
        aprime_local(3, 1)


def test_a1prime_at_origin():
    res = a1prime(0.0, pmax=1000)
    assert aprime_product(1, pmax=1000).value == res.value
    big = a1prime(0.0, pmax=10_000)
    assert abs(math.log(big.value / res.value)) <= res.tail_estimate


def test_a1prime_shift_stability():
    small, big = a1prime(0.3, pmax=1000), a1prime(0.3, pmax=10_000)
    assert abs(math.log(big.value / small.value)) <= small.tail_estimate
    assert round(small.value, 4) == round(big.value, 4)


def test_a1prime_continuity():
    v0 = a1prime(0.0).value
    assert a1prime(1e-7).value == pytest.approx(v0, abs=1e-5)
    assert a1prime(-1e-7).value == pytest.approx(v0, abs=1e-5)
    c = a1prime(0.05 + 1e-7j).value
    assert c.real == pytest.approx(a1prime(0.05).value, abs=1e-9)


def test_aprime_product_k2():
    a, b = aprime_product(2, pmax=200), aprime_product(2, pmax=400)
    assert abs(math.log(b.value / a.value)) <= a.tail_estimate
    assert aprime_product(0, pmax=50).value == 1.0


@given(st.floats(-0.4, 2.0))
@settings(max_examples=15, deadline=None)
def test_self_consistency_under_doubling(k):
    a, b = ak(k, pmax=300), ak(k, pmax=600)
    assert abs(math.log(b.value / a.value)) <= a.tail_estimate


def test_negative_k_is_flagged():
    assert ak(-0.25, pmax=100).experimental
    assert not ak(1, pmax=100).experimental
