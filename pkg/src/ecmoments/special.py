"""Special constants: partial zeta values, Laurent data of zeta at 1, and g_k.

log G is evaluated from its Stirling-type expansion at a shifted argument and
walked back down with G(s+1) = Gamma(s) G(s).  Zeta at real s > 1 uses
Euler-Maclaurin summation.  The Stieltjes constants come from mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import mpmath
from scipy.special import bernoulli, gammaln

ZETA_PRIME_MINUS_ONE = -0.16542114370045092921
_LOG_2PI = math.log(2.0 * math.pi)
_BERNOULLI = [float(x) for x in bernoulli(40)]


class PoleRegion(ValueError):
    """g_k requested at k <= -1/2."""


@dataclass(frozen=True)
class GkValue:
    k: float
    value: float


def log_barnes_g(s: float) -> float:
    """log G(s) for real s > 0."""
    if s <= 0:
        raise ValueError("log_barnes_g needs s > 0")
    shift = 0.0
    # log G(s) = log G(s + m) - sum_{j<m} log Gamma(s + j)
    while s + shift < 20.0:
        shift += 1.0
    z = s + shift - 1.0  # G(1 + z) with z >= 19
    out = (
        0.5 * z * z * math.log(z)
        - 0.75 * z * z
        + 0.5 * z * _LOG_2PI
        - math.log(z) / 12.0
        + ZETA_PRIME_MINUS_ONE
    )
    for k in range(1, 12):
        out += _BERNOULLI[2 * k + 2] / (4.0 * k * (k + 1) * z ** (2 * k))
    for j in range(int(shift)):
        out -= float(gammaln(s + j))
    return out


def g_k(k: float) -> GkValue:
    """2^{k/2} G(1+k) sqrt(Gamma(1+2k)) / sqrt(G(1+2k) Gamma(1+k))."""
    if k <= -0.5:
        raise PoleRegion(f"g_k is undefined for k = {k} <= -1/2")
    log_val = (
        0.5 * k * math.log(2.0)
        + log_barnes_g(1.0 + k)
        + 0.5 * float(gammaln(1.0 + 2.0 * k))
        - 0.5 * log_barnes_g(1.0 + 2.0 * k)
        - 0.5 * float(gammaln(1.0 + k))
    )
    return GkValue(float(k), math.exp(log_val))


def g_k_factorial(k: int) -> float:
    """2^k prod_{j=1}^{k-1} j!/(2j)!, the integer-k closed form of g_k."""
    if k < 0:
        raise ValueError("factorial form needs k >= 0")
    out = 2.0**k
    for j in range(1, k):
        out *= math.factorial(j) / math.factorial(2 * j)
    return out


def zeta(s: float, terms: int = 12, cutoff: int = 20) -> float:
    """Riemann zeta at real s > 0, s != 1, by Euler-Maclaurin summation."""
    if s == 1 or s <= 0:
        raise ValueError("zeta needs real s > 0 with s != 1")
    n = cutoff
    head = math.fsum(j**-s for j in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n**-s
    rising = s  # s (s+1) ... (s + 2k - 2)
    for k in range(1, terms + 1):
        tail += _BERNOULLI[2 * k] / math.factorial(2 * k) * rising * n ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + tail


def zeta_partial(s: float, excluded: Iterable[int] = ()) -> float:
    """zeta(s) with the Euler factors at the given primes removed."""
    out = zeta(s)
    for p in set(excluded):
        out *= 1.0 - float(p) ** -s
    return out


@lru_cache(maxsize=None)
def stieltjes_constants(order: int) -> tuple[float, ...]:
    """(gamma_0, ..., gamma_order)."""
    if not 0 <= order <= 6:
        raise ValueError("order must lie in 0..6")
    with mpmath.workdps(30):
        return tuple(float(mpmath.stieltjes(n)) for n in range(order + 1))


def zeta_laurent(order: int) -> tuple[float, ...]:
    """Coefficients g_n with zeta(1+z) = 1/z + sum_n (-1)^n g_n z^n / n!."""
    return stieltjes_constants(order)


def zeta_one_plus_regular(order: int) -> list[float]:
    """Taylor coefficients of z * zeta(1 + z) up to z^order."""
    gam = zeta_laurent(max(order - 1, 0))
    out = [1.0]
    for n in range(order):
        out.append((-1) ** n * gam[n] / math.factorial(n))
    return out


def zeta_complex(s: complex) -> complex:
    return complex(mpmath.zeta(s))
