"""Hurwitz class numbers and traces of Hecke operators on level-one cusp forms.

Normalisation: for a prime p and even weight k,

    Tr_k(p) = -1 - 1/2 * sum_{t^2 < 4p} G_{k-2}(t, p) * H(4p - t^2),

where G_j(t, p) = p^{j/2} U_j(t / (2 sqrt p)) is the integer produced by the
Hecke recurrence and H is the Hurwitz class number (all forms, with the
classes of x^2 + y^2 and x^2 + xy + y^2 weighted 1/2 and 1/3).  The same sum
equals -Q(p^{k-2}) / (p - 1); both are checked against q-expansions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import is_prime
from .curves import gegenbauer_int


class BadDiscriminant(ValueError):
    pass


class Unsupported(ValueError):
    pass


class OutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class ClassNumberValue:
    D: int
    value: Fraction


@dataclass(frozen=True)
class TraceValue:
    weight: int
    p: int
    trace: int

    @property
    def scaled(self) -> float:
        return self.trace / self.p ** ((self.weight - 1) / 2)


_H6_TABLE = np.zeros(1, dtype=np.int64)


def _hurwitz6_table(nmax: int) -> np.ndarray:
    """6 H(n) for 0 <= n <= nmax, by enumerating reduced forms (a, b, c)."""
    global _H6_TABLE
    if nmax < len(_H6_TABLE):
        return _H6_TABLE
    size = max(nmax + 1, 2 * len(_H6_TABLE))
    table = np.zeros(size, dtype=np.int64)
    top = size - 1
    a = 1
    while 3 * a * a <= top:
        for b in range(-a + 1, a + 1):
            # reduced: |b| <= a <= c, with b >= 0 when a == c
            c0 = a if b >= 0 else a + 1
            c1 = (top + b * b) // (4 * a)
            if c1 < c0:
                continue
            n = 4 * a * np.arange(c0, c1 + 1, dtype=np.int64) - b * b
            table[n] += 6
            if c0 == a:
                if b == 0:
                    table[4 * a * a] -= 3
                elif b == a:
                    table[3 * a * a] -= 4
        a += 1
    _H6_TABLE = table
    table.flags.writeable = False
    return table


def hurwitz_class_number(n: int) -> Fraction:
    """H(n) for n > 0; zero unless n is 0 or 3 mod 4."""
    if n <= 0:
        raise BadDiscriminant("H(n) needs n > 0")
    return Fraction(int(_hurwitz6_table(n)[n]), 6)


def class_number_vw(D: int) -> ClassNumberValue:
    """Weighted count of all classes of forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise BadDiscriminant(f"{D} is not a negative discriminant")
    return ClassNumberValue(D, hurwitz_class_number(-D))


def class_number_direct(D: int) -> Fraction:
    """Slow reference: loop over reduced forms of discriminant D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise BadDiscriminant(f"{D} is not a negative discriminant")
    n = -D
    total = Fraction(0)
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if b == 0 and a == c:
                total += Fraction(1, 2)
            elif b == a == c:
                total += Fraction(1, 3)
            else:
                total += 1
        a += 1
    return total


def dim_cusp(weight: int) -> int:
    """dim S_k(SL_2(Z)) for even k >= 0."""
    if weight < 0 or weight % 2:
        return 0
    if weight < 4:
        return 0
    return weight // 12 - (1 if weight % 12 == 2 else 0)


@lru_cache(maxsize=None)
def trace_eichler_selberg(weight: int, p: int) -> TraceValue:
    """Tr_weight(T_p) on level-one cusp forms, as an exact integer."""
    if weight < 4 or weight % 2:
        raise Unsupported(f"weight must be even and >= 4, got {weight}")
    if not is_prime(p) or p <= 3:
        raise Unsupported(f"only primes p > 3 are supported, got {p}")
    if dim_cusp(weight) == 0:
        return TraceValue(weight, p, 0)
    j = weight - 2
    table = _hurwitz6_table(4 * p)
    total6 = 0
    tmax = math.isqrt(4 * p - 1)
    for t in range(-tmax, tmax + 1):
        h6 = int(table[4 * p - t * t])
        if h6:
            total6 += gegenbauer_int(t, p, j) * h6
    # Tr = -1 - (1/2) * total6 / 6
    if total6 % 12:
        raise ArithmeticError("class-number sum is not an even integer")
    return TraceValue(weight, p, -1 - total6 // 12)


def scaled_trace(weight: int, p: int) -> float:
    """Tr*_weight(p) = Tr_weight(p) / p^{(weight - 1)/2}; zero for odd weight."""
    if weight % 2 or dim_cusp(weight) == 0:
        return 0.0
    return trace_eichler_selberg(weight, p).scaled


# -- q-expansion oracle ------------------------------------------------------

ORACLE_BOUND = 10_000


def _series_mul(f: list[int], g: list[int], n: int) -> list[int]:
    """Product of two integer power series mod q^n via Kronecker substitution."""
    f, g = f[:n], g[:n]
    bound = max(map(abs, f), default=0) * max(map(abs, g), default=0) * n
    width = bound.bit_length() + 2
    big_f = sum(c << (width * i) if c >= 0 else -((-c) << (width * i)) for i, c in enumerate(f))
    big_g = sum(c << (width * i) if c >= 0 else -((-c) << (width * i)) for i, c in enumerate(g))
    prod = big_f * big_g
    out = []
    mask = (1 << width) - 1
    half = 1 << (width - 1)
    for _ in range(n):
        digit = prod & mask
        if digit >= half:
            digit -= 1 << width
        out.append(digit)
        prod = (prod - digit) >> width
    return out


@lru_cache(maxsize=8)
def _delta_series(n: int) -> tuple[int, ...]:
    """Coefficients of q prod (1 - q^m)^24 for indices 0..n-1."""
    eta3 = [0] * n  # prod (1 - q^m)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}
    k = 0
    while k * (k + 1) // 2 < n:
        eta3[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    e6 = _series_mul(eta3, eta3, n)
    e12 = _series_mul(e6, e6, n)
    e24 = _series_mul(e12, e12, n)
    return tuple([0] + e24[: n - 1])


def _sigma_series(power: int, n: int) -> list[int]:
    out = [0] * n
    for d in range(1, n):
        dp = d**power
        for m in range(d, n, d):
            out[m] += dp
    return out


@lru_cache(maxsize=8)
def _eisenstein(weight: int, n: int) -> tuple[int, ...]:
    if weight == 4:
        return tuple([1] + [240 * s for s in _sigma_series(3, n)[1:]])
    if weight == 6:
        return tuple([1] + [-504 * s for s in _sigma_series(5, n)[1:]])
    raise ValueError(weight)


# weight -> factors multiplying Delta; each space is one-dimensional
_ORACLE_FORMS = {12: (), 16: (4,), 18: (6,), 20: (4, 4), 22: (4, 6), 26: (4, 4, 6)}


@lru_cache(maxsize=16)
def _eigenform(weight: int, n: int) -> tuple[int, ...]:
    series = list(_delta_series(n))
    for w in _ORACLE_FORMS[weight]:
        series = _series_mul(series, list(_eisenstein(w, n)), n)
    return tuple(series)


def tau_oracle(n: int) -> int:
    """Ramanujan tau(n) from the product expansion of Delta."""
    return eigenform_coefficient(12, n)


def eigenform_coefficient(weight: int, n: int) -> int:
    """n-th coefficient of the normalised eigenform of a one-dimensional S_weight."""
    if weight not in _ORACLE_FORMS:
        raise Unsupported(f"no oracle for weight {weight}")
    if not 1 <= n <= ORACLE_BOUND:
        raise OutOfRange(f"n = {n} outside 1..{ORACLE_BOUND}")
    size = 64
    while size <= n:
        size *= 2
    return _eigenform(weight, min(size, ORACLE_BOUND + 1))[n]


def oracle_weights() -> tuple[int, ...]:
    return tuple(_ORACLE_FORMS)
