"""Arithmetical factors as truncated Euler products.

Local factor of H at a prime p not dividing 6q, for shifts z_1..z_k:

    1 + (1 - 1/p)(1 - p^-10)^-1 [ T1 - T2 - T3 + T4 ]

    T1 = -1 + int W
    T2 = p^{-1/2} sum_l Tr*_{l+2}(p) int U_l W
    T3 = (1/p) int ((1 + 1/p) K - 1) W
    T4 = (1/p) (-1 + (prod (1 - p^{-1-z_i})^-1 + prod (1 + p^{-1-z_i})^-1) / 2)

with W = prod_j (1 - 2 cos(theta) p^{-1/2-z_j} + p^{-1-2z_j})^{-1} and
K = (1 - 2 cos(2 theta)/p + 1/p^2)^{-1}; every integral is against the
Sato-Tate measure.  T3 is written in the form that sums the even-index
Chebyshev series exactly; it is what makes the k = 0 factor equal 1.
A_k is H with the local zeta factors prod_{i<j} (1 - p^{-1-z_i-z_j}) removed.
"""

from __future__ import annotations

import cmath
import itertools
import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .arith import euler_phi, primes_upto
from .chebyshev import ToleranceNotMet, st_nodes, u_table
from .curves import ap_legendre
from .families import FamilySpec
from .hecke import dim_cusp, scaled_trace
from .orthogonality import qsquare_brute, qstar_brute, trace_histogram
from .curves import hecke_powers


class OutsideRegion(ValueError):
    pass


class TruncationWarning(UserWarning):
    pass


TRACE_CUTOFF = 1e-15
QUAD_TOL = 1e-13  # relative; Gauss rounding noise is about 1e-14


@dataclass(frozen=True)
class EulerProductResult:
    k: float
    pmax: int
    value: float
    tail_estimate: float
    per_prime_log: tuple[tuple[int, float], ...] = field(default=(), repr=False)
    experimental: bool = False  # k < 0: the product is taken literally, no theory behind it


def _trace_lmax(p: int) -> int:
    """Largest l kept in the trace sum: stop once p^{-l/2} * 2 dim S_{l+2} < cutoff."""
    l = 10
    while True:
        nxt = l + 2
        if p ** (-nxt / 2) * 2 * max(dim_cusp(nxt + 2), 1) < TRACE_CUTOFF:
            return l
        l = nxt


def _st_integrals(p: int, weight_fn: Callable[[np.ndarray], np.ndarray], lmax: int) -> np.ndarray:
    """[int W, int U_10 W, int U_12 W, ..., int U_lmax W, int ((1+1/p)K - 1) W]."""

    def evaluate(n: int) -> np.ndarray:
        theta, w = st_nodes(n)
        c = np.cos(theta)
        W = weight_fn(theta)
        kern = (1.0 + 1.0 / p) / (1.0 - 2.0 * np.cos(2.0 * theta) / p + 1.0 / p**2) - 1.0
        rows = [W]
        if lmax >= 10:
            U = u_table(lmax, c)
            rows.extend(U[l] * W for l in range(10, lmax + 1, 2))
        rows.append(kern * W)
        return np.array(rows) @ w

    n = 64
    prev = evaluate(n)
    while n < 8192:
        n *= 2
        cur = evaluate(n)
        if np.max(np.abs(cur - prev)) <= QUAD_TOL * max(1.0, float(np.max(np.abs(cur)))):
            return cur
        prev = cur
    raise ToleranceNotMet(f"Sato-Tate integrals at p = {p} did not settle")


def _brace(p: int, weight_fn, t4: complex | float) -> float:
    lmax = _trace_lmax(p)
    ints = _st_integrals(p, weight_fn, lmax)
    t1 = ints[0] - 1.0
    t2 = 0.0
    for i, l in enumerate(range(10, lmax + 1, 2)):
        tr = scaled_trace(l + 2, p)
        if tr:
            t2 += tr * ints[1 + i]
    t2 /= math.sqrt(p)
    t3 = ints[-1] / p
    return t1 - t2 - t3 + t4


def _delta10(p: int) -> float:
    return 1.0 / (1.0 - float(p) ** -10)


def _lambda_rt(spec: FamilySpec, p: int) -> float:
    tr = ap_legendre(spec.r, spec.model_b_residue, p)
    return tr.ap / math.sqrt(p)


def _divides_3q(spec: FamilySpec, p: int) -> bool:
    return p != 2 and (3 * spec.q) % p == 0


def hk_local(p: int, zs: Sequence[float], spec: FamilySpec = FamilySpec()) -> float:
    """Local factor of H(z_1, ..., z_k) at p (real shifts)."""
    zs = [float(z) for z in zs]
    if p == 2:
        return 1.0
    if _divides_3q(spec, p):
        lam = _lambda_rt(spec, p)
        return math.prod(1.0 / (1.0 - lam * p ** (-0.5 - z) + p ** (-1.0 - 2 * z)) for z in zs)
    amps = [p ** (-0.5 - z) for z in zs]

    def weight(theta):
        c = np.cos(theta)
        out = np.ones_like(c)
        for a in amps:
            out = out / (1.0 - 2.0 * a * c + a * a)
        return out

    plus = math.prod(1.0 / (1.0 - p ** (-1.0 - z)) for z in zs)
    minus = math.prod(1.0 / (1.0 + p ** (-1.0 - z)) for z in zs)
    t4 = (-1.0 + 0.5 * (plus + minus)) / p
    return 1.0 + (1.0 - 1.0 / p) * _delta10(p) * _brace(p, weight, t4)


def ak_shifted_local(p: int, zs: Sequence[float], spec: FamilySpec = FamilySpec()) -> float:
    """Local factor of A_k(z) = H(z) / prod_{i<j} zeta(1 + z_i + z_j)."""
    out = hk_local(p, zs, spec)
    for zi, zj in itertools.combinations(zs, 2):
        out *= 1.0 - p ** (-1.0 - zi - zj)
    return out


def ak_local(p: int, k: float, spec: FamilySpec = FamilySpec()) -> float:
    """Local factor of a_k at p, real k > -1/2.

    p = 2 and p | 3q carry their share of the (phi(6q)/6q)^{k(k-1)/2} prefactor,
    so that the product over all p <= P is the truncated a_k.
    """
    if k <= -0.5:
        raise OutsideRegion("a_k needs k > -1/2")
    zeta_part = (1.0 - 1.0 / p) ** (k * (k - 1) / 2)
    if p == 2:
        return zeta_part
    if _divides_3q(spec, p):
        lam = _lambda_rt(spec, p)
        return zeta_part * (1.0 - lam / math.sqrt(p) + 1.0 / p) ** (-k)
    if spec.q % p == 0:
        raise AssertionError("unreachable")
    s = math.sqrt(p)

    def weight(theta):
        return (1.0 - 2.0 * np.cos(theta) / s + 1.0 / p) ** (-k)

    t4 = (-1.0 + 0.5 * ((1.0 - 1.0 / p) ** (-k) + (1.0 + 1.0 / p) ** (-k))) / p
    return zeta_part * (1.0 + (1.0 - 1.0 / p) * _delta10(p) * _brace(p, weight, t4))


def _product(k: float, pmax: int, local: Callable[[int], float]) -> EulerProductResult:
    primes = primes_upto(pmax)
    logs = [(p, math.log(local(p))) for p in primes]
    value = math.exp(math.fsum(v for _, v in logs))
    return EulerProductResult(k, pmax, value, _tail(logs, pmax), tuple(logs))


def _tail(logs: list[tuple[int, float]], pmax: int) -> float:
    """sum_{p > P} C / p^2 ~ C / (P log P), C fitted on the last decade of primes."""
    last = [abs(v) * p * p for p, v in logs if p > pmax / 10]
    if not last:
        return float("inf")
    return max(last) / (pmax * math.log(pmax))


def ak(k: float, spec: FamilySpec = FamilySpec(), pmax: int = 1000) -> EulerProductResult:
    """Truncated Euler product for a_k over p <= pmax."""
    if k <= -0.5:
        raise OutsideRegion("a_k needs k > -1/2")
    if pmax < 11:
        raise ValueError("pmax must be at least 11")
    res = _product(k, pmax, lambda p: ak_local(p, k, spec))
    return replace(res, experimental=k < 0)


def ak_shifted(zs: Sequence[float], spec: FamilySpec = FamilySpec(), pmax: int = 1000) -> EulerProductResult:
    """Truncated A_k(z_1, ..., z_k)."""
    res = _product(len(zs), pmax, lambda p: ak_shifted_local(p, zs, spec))
    return res


def phi_ratio(spec: FamilySpec) -> float:
    m = spec.modulus
    return euler_phi(m) / m


# -- raw Dirichlet-series path ----------------------------------------------


def _series_fmax(p: int, k: int, tol: float = 1e-15) -> int:
    f = 2
    while p ** (-f / 2) * (f + 1) ** k > tol:
        f += 1
    return f


def hk_local_series(p: int, zs: Sequence[float], fmax: int | None = None) -> float:
    """The same local factor of H from the exact averages Q*, summed over e_1 + ... + e_k <= fmax."""
    k = len(zs)
    fmax = fmax or _series_fmax(p, k)
    total = []
    for es in itertools.product(range(fmax + 1), repeat=k):
        f = sum(es)
        if f == 0 or f > fmax or f % 2:
            continue
        q = float(qstar_brute(p, es).value)
        total.append(q * math.prod(p ** (-e * (0.5 + z)) for e, z in zip(es, zs)))
    return 1.0 + _delta10(p) * math.fsum(total)


# -- positive-rank family -----------------------------------------------------


@lru_cache(maxsize=4096)
def _qsquare_series(p: int, emax: int) -> tuple[float, ...]:
    """Q*_square(p^e) * p^{e/2} for e = 0..emax, i.e. the unscaled averages."""
    totals = [0] * (emax + 1)
    for ap, good, mult in trace_histogram(p, True):
        for e, g in enumerate(hecke_powers(ap, p, emax, good)):
            totals[e] += mult * g
    return tuple(float(Fraction(t, p * p)) for t in totals)


def _emax_for(p: int, alpha_real: float) -> int:
    e = 1
    while p ** (-e * (0.5 + alpha_real)) * (e + 1) > 1e-17:
        e += 1
    return e


def _aprime_shells(p: int, k: int, emax: int) -> list[float]:
    """Shell sums of the H' series: shell f collects all tuples with e_1 + ... + e_k = f."""
    shells = [0.0] * (emax + 1)
    delta = 1.0 / (1.0 - float(p) ** -7)
    for es in itertools.product(range(emax + 1), repeat=k):
        f = sum(es)
        if f > emax:
            continue
        val = float(qsquare_brute(p, es).value) * p ** (-f / 2)
        shells[f] += val if f == 0 else delta * val
    return shells


def _zeta_structure(p: int, k: int) -> float:
    """(1 - 1/p)^{k(k-1)/2} (1 - 1/p)^{-k}: removes prod zeta(1+z_i+z_j) / prod zeta(1+z_i)."""
    return (1.0 - 1.0 / p) ** (k * (k - 1) / 2) / (1.0 - 1.0 / p) ** k


def aprime_local(p: int, k: int, emax: int = 12) -> float:
    """Local factor of A'_k at the origin from brute-force Q' sums with sum(e) <= emax."""
    if k == 0:
        return 1.0
    if emax < 6:
        raise ValueError("emax must be at least 6")
    if p <= 3:
        raise ValueError("aprime_local needs p > 3")
    shells = _aprime_shells(p, k, emax)
    if abs(shells[emax]) > 1e-12:
        warnings.warn(f"last shell at p = {p} contributes {shells[emax]:.2e}", TruncationWarning)
    return math.fsum(shells) * _zeta_structure(p, k)


def _aprime_emax(p: int, k: int, tol: float = 1e-14) -> int:
    return max(6, _series_fmax(p, k, tol))


def aprime_product(k: int, pmax: int = 1000) -> EulerProductResult:
    """Truncated A'_k(0, ..., 0), emax chosen per prime so the last shell is negligible.

    p = 2 has H' = 1; p = 3 uses the brute-force averages literally.
    """
    if k == 1:
        return a1prime(0.0, pmax, brute_cutoff=pmax)
    logs = []
    for p in primes_upto(pmax):
        if k == 0:
            local = 1.0
        elif p == 2:
            local = _zeta_structure(2, k)
        else:
            local = math.fsum(_aprime_shells(p, k, _aprime_emax(p, k))) * _zeta_structure(p, k)
        logs.append((p, math.log(local)))
    value = math.exp(math.fsum(v for _, v in logs))
    return EulerProductResult(k, pmax, value, _tail_power(logs, pmax, 1.5), tuple(logs))


def _tail_power(logs, pmax: int, expo: float) -> float:
    """sum_{p > P} C p^{-expo} ~ C P^{1-expo} / ((expo - 1) log P), C from the last decade."""
    last = [abs(v) * p**expo for p, v in logs if p > pmax / 10]
    if not last:
        return float("inf")
    return max(last) * pmax ** (1 - expo) / ((expo - 1) * math.log(pmax))


def aprime_local_alpha(p: int, alpha, brute: bool = True):
    """Local factor of A'_1 at shift alpha (real or complex)."""
    delta = 1.0 / (1.0 - float(p) ** -7)
    if p == 2:
        h = 1.0
    elif brute:
        emax = _emax_for(p, float(np.real(alpha)))
        q = _qsquare_series(p, emax)
        h = 1.0 + delta * sum(q[e] * p ** (-e * (1.0 + alpha)) for e in range(1, emax + 1))
    else:
        # Q*_square(p) exactly; even e < 10 vanish; odd e >= 3 left to the tail
        h = 1.0 + delta * (-1.0 + 1.0 / p) * p ** (-1.0 - alpha)
    return h / (1.0 - p ** (-1.0 - alpha))


def a1prime(alpha, pmax: int = 1000, brute_cutoff: int = 1000) -> EulerProductResult:
    """Truncated Euler product for A'_1(alpha); brute force up to brute_cutoff."""
    re = float(np.real(alpha))
    if re <= -1.0 / 6.0:
        raise OutsideRegion("A'_1 converges only for Re(alpha) > -1/6")
    logs = []
    for p in primes_upto(pmax):
        local = aprime_local_alpha(p, alpha, brute=p <= brute_cutoff)
        logs.append((p, cmath.log(local) if isinstance(local, complex) else math.log(local)))
    total = sum(v for _, v in logs) if isinstance(alpha, complex) else math.fsum(v for _, v in logs)
    value = cmath.exp(total) if isinstance(alpha, complex) else math.exp(total)
    # local factors are 1 + O(p^{-2-alpha}) + O(p^{-3(1/2+alpha)}); the first
    # comes from (1 - 1/p) p^{-1-alpha} against the zeta factor
    expo = min(2 + re, 3 * (0.5 + re))
    tail = _tail_power(logs, pmax, expo)
    return EulerProductResult(1, pmax, value, tail, tuple((p, float(np.real(v))) for p, v in logs))
