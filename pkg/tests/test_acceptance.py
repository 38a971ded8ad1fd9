"""The eleven acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import itertools
import math
import random
import time
from fractions import Fraction


from conftest import VERDICTS
from ecmoments.arith import primes_upto
from ecmoments.euler import ak
from ecmoments.exact import Surd
from ecmoments.families import ALL, POSITIVE_RANK, FamilySpec, count_asymptotic, enumerate_family, family_size
from ecmoments.hecke import eigenform_coefficient, oracle_weights, trace_eichler_selberg
from ecmoments.lvalues import closure_defect, conductor, odd_conductor_part, sign_gap, smoothing_defect
from ecmoments.orthogonality import (
    q_sum,
    qsquare_brute,
    qsquare_linear,
    qstar_brute,
    qstar_closed,
    qstar_direct,
    qstar_multiplicative,
)
from ecmoments.predict import (
    mobius_averages,
    positive_rank_contour,
    qk_structure_check,
    ratio_rq,
    ratio_squared_by_points,
    ratio_squared_by_traces,
)
from ecmoments.special import g_k, g_k_factorial


def verdict(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def _tuples(kmax, fmax):
    for k in range(1, kmax + 1):
        for t in itertools.combinations_with_replacement(range(fmax + 1), k):
            if sum(t) <= fmax:
                yield t


def test_01_trace_identity():
    start = time.perf_counter()
    bad = []
    for p in (5, 7, 11, 13):
        for j in range(2, 19, 2):
            q = q_sum(p, j)
            es = trace_eichler_selberg(j + 2, p).trace
            if q % (p - 1) or -q // (p - 1) != es:
                bad.append((p, j, "class numbers"))
            if j + 2 in oracle_weights() and j + 2 <= 20 and eigenform_coefficient(j + 2, p) != es:
                bad.append((p, j, "q-expansion"))
    elapsed = time.perf_counter() - start
    verdict(1, not bad and elapsed < 30, f"exact trace identity, {len(bad)} mismatches, {elapsed:.1f} s")


def test_02_closed_form():
    start = time.perf_counter()
    bad = 0
    checked = 0
    for p in (5, 7, 11, 13):
        for exps in _tuples(3, 12):
            f = sum(exps)
            if f % 2 == 0:
                checked += 1
                bad += qstar_closed(p, exps).value != qstar_brute(p, exps).value
            elif f <= 9:
                checked += 1
                bad += bool(qstar_closed(p, exps).value) or bool(qstar_brute(p, exps).value)
    elapsed = time.perf_counter() - start
    verdict(2, bad == 0 and elapsed < 120, f"{checked} exact comparisons, {bad} failures, {elapsed:.1f} s")


def test_03_corollary_values():
    bad = []
    for p in primes_upto(97):
        if p < 5:
            continue
        for k in range(1, 5):
            if qstar_brute(p, (1,) + (0,) * (k - 1)).value:
                bad.append((p, k, "single"))
            if k >= 2 and qstar_brute(p, (1, 1) + (0,) * (k - 2)).value != Surd.rational(Fraction(p - 1, p)):
                bad.append((p, k, "pair"))
    verdict(3, not bad, f"p = 5..97, k <= 4, {len(bad)} failures")


def test_04_positive_rank_sums():
    bad = 0
    for p in (5, 7, 11, 13):
        bad += qsquare_brute(p, (1,)).value != qsquare_linear(p)
        for exps in _tuples(3, 12):
            if sum(exps) % 2 == 0:
                bad += qsquare_brute(p, exps).value != qstar_brute(p, exps).value
    verdict(4, bad == 0, f"square-family sums exact, {bad} failures")


def test_05_multiplicativity():
    bad = 0
    checked = 0
    for p, q in ((3, 5), (3, 7), (5, 7)):
        entries = [1, p, q, p * q, p * p, q * q]
        for k in (1, 2):
            for ns in itertools.combinations_with_replacement(entries, k):
                if math.prod(ns) % (p * q):
                    continue
                checked += 1
                bad += qstar_direct(ns) != qstar_multiplicative(ns)
    verdict(5, bad == 0, f"{checked} tuples mod 15, 21, 35, {bad} failures")


def test_06_constants():
    expected = {0: 1.0, 1: 2.0, 2: 2.0, 3: 1 / 3}
    worst = max(max(abs(g_k(k).value - v), abs(g_k_factorial(k) - v)) for k, v in expected.items())
    a0 = ak(0, pmax=10_000)
    ok = worst <= 1e-9 and abs(a0.value - 1) <= 1e-6
    verdict(6, ok, f"g_k error {worst:.1e}, a_0 - 1 = {a0.value - 1:.1e} (tail bound {a0.tail_estimate:.1e})")


def test_07_family_counts():
    start = time.perf_counter()
    ratios = []
    for variant, lo, hi in ((ALL, 0.98, 1.02), (POSITIVE_RANK, 0.95, 1.05)):
        spec = FamilySpec(variant, X=1e6)
        r = family_size(spec) / count_asymptotic(spec)
        ratios.append((r, lo <= r <= hi))
    elapsed = time.perf_counter() - start
    ok = all(v for _, v in ratios) and elapsed < 60
    verdict(7, ok, f"ratios {ratios[0][0]:.4f} and {ratios[1][0]:.4f}, {elapsed:.1f} s")


def _small_conductor_sample(count, bound, seed):
    members = list(enumerate_family(FamilySpec(X=1e6)))
    random.Random(seed).shuffle(members)
    chosen = []
    for c in members:
        # the 2-part of N is at least 4 on this family
        if 4 * math.prod(p**e for p, e in odd_conductor_part(c).items()) > bound:
            continue
        if conductor(c).N <= bound:
            chosen.append(c)
            if len(chosen) == count:
                break
    return chosen


def test_08_l_value_engine():
    start = time.perf_counter()
    curves = _small_conductor_sample(100, 10**6, seed=8)
    closure = max(closure_defect(c, a) for c in curves for a in (0.05, 0.1, 0.2))
    smoothing = max(max(smoothing_defect(c), smoothing_defect(c, 0.1)) for c in curves)
    gaps = sum(sign_gap(c) >= 10 for c in curves)
    elapsed = time.perf_counter() - start
    ok = len(curves) == 100 and closure <= 1e-7 and smoothing <= 1e-8 and gaps >= 99 and elapsed < 600
    verdict(8, ok, f"closure {closure:.1e}, smoothing {smoothing:.1e}, sign gap on {gaps}/100, {elapsed:.0f} s")


def test_09_ratio_dual_path():
    rng = random.Random(9)
    bad = 0
    for _ in range(20):
        q = rng.choice([5, 7, 11, 35, 55])
        pairs = []
        while len(pairs) < 2:
            r, t = rng.randrange(6 * q), rng.randrange(6 * q)
            if math.gcd(4 * r**3 + 27 * t * t, 6 * q) == 1:
                pairs.append((r, t))
        (r, t), (r2, t2) = pairs
        bad += ratio_squared_by_points(q, r, t, r2, t2) != ratio_squared_by_traces(q, r, t, r2, t2)
    worked = abs(ratio_rq(5, 1, 1, 2, 1).value - math.sqrt(9 / 7))
    verdict(9, bad == 0 and worked <= 1e-12, f"20 exact dual paths, {bad} failures, worked value error {worked:.1e}")


def test_10_mobius_heuristic():
    ns = (2, 3, 5, 6, 7, 10)
    out = mobius_averages(ns, X=1e5)
    errors = {n: abs(avg - target) for n, (avg, target) in out.items()}
    worst = max(errors, key=errors.get)
    detail = ", ".join(f"n={n}: {out[n][0]:+.3f} vs {out[n][1]:+.3f}" for n in ns)
    verdict(10, all(e <= 0.05 for e in errors.values()), f"{detail}; worst n={worst}")


def test_11_structure():
    degrees = all(qk_structure_check(k).degrees_match for k in (1, 2))
    vanishing = abs(positive_rank_contour(0.0).integral)
    verdict(11, degrees and vanishing <= 1e-10, f"degrees match: {degrees}, first moment at 0: {vanishing:.1e}")
