"""Boxed families of Weierstrass models with congruence and power conditions.

``ALL``: pairs (a, b) with a = r, b = t mod 6q, |a| <= X^{1/3}, |b| <= X^{1/2}
and no prime p with p^4 | a and p^6 | b.

``POSITIVE_RANK``: models (a, b^2) with a = r, b = t mod 6, |a| <= X^{1/3},
|b| <= X^{1/4} and no prime p with p^4 | a and p^3 | b.  The generator b is
kept on the curve, which carries the point (0, b).

Box edges are computed with exact integer roots, never with float powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .arith import factorize, iroot_floor, is_squarefree, mobius, primes_upto
from .curves import CurvePair
from .special import zeta_partial

ALL = "all"
POSITIVE_RANK = "positive-rank"


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    variant: str = ALL
    r: int = 1
    t: int = 1
    q: int = 1
    X: float = 1e6

    def __post_init__(self):
        if self.variant not in (ALL, POSITIVE_RANK):
            raise InvalidSpec(f"unknown variant {self.variant!r}")
        if self.q < 1 or not (self.q == 1 or is_squarefree(self.q)) or math.gcd(self.q, 6) != 1:
            raise InvalidSpec(f"q = {self.q} must be squarefree and coprime to 6")
        if self.variant == POSITIVE_RANK and self.q != 1:
            raise InvalidSpec("the positive-rank family is defined with q = 1")
        if self.X <= 0:
            raise InvalidSpec("X must be positive")
        core = 4 * self.r**3 + 27 * self.model_b_residue**2
        if math.gcd(core, 6 * self.q) != 1:
            raise InvalidSpec(f"4r^3 + 27t^2 = {core} is not coprime to 6q = {6 * self.q}")

    @property
    def is_positive_rank(self) -> bool:
        return self.variant == POSITIVE_RANK

    @property
    def modulus(self) -> int:
        return 6 * self.q

    @property
    def model_b_residue(self) -> int:
        """Residue of the model coefficient b (t^2 for the positive-rank family)."""
        return self.t * self.t if self.variant == POSITIVE_RANK else self.t

    @property
    def power_pair(self) -> tuple[int, int]:
        """(4, 6) or (4, 3): the excluded divisibility p^i | a, p^j | b."""
        return (4, 3) if self.is_positive_rank else (4, 6)

    def box(self) -> tuple[int, int]:
        """(A, B) with |a| <= A and |b| <= B (b is the generator for positive rank)."""
        X = Fraction(self.X).limit_denominator(10**9) if not float(self.X).is_integer() else int(self.X)
        A = _root_bound(X, 3)
        B = _root_bound(X, 4 if self.is_positive_rank else 2)
        return A, B


def _root_bound(X, k: int) -> int:
    if isinstance(X, Fraction):
        return iroot_floor(X.numerator // X.denominator, k) if X >= 1 else 0
    return iroot_floor(X, k)


def _progression(lo: int, hi: int, residue: int, m: int) -> np.ndarray:
    first = lo + ((residue - lo) % m)
    return np.arange(first, hi + 1, m, dtype=np.int64)


def _sieve_primes(spec: FamilySpec) -> list[int]:
    A, B = spec.box()
    i, j = spec.power_pair
    # a != 0 on the family, so p^4 | a forces p <= A^{1/4}
    top = min(iroot_floor(max(A, 1), i), iroot_floor(max(B, 1), j))
    return [p for p in primes_upto(top) if spec.modulus % p]


def enumerate_family(spec: FamilySpec, a_range: tuple[int, int] | None = None) -> Iterator[CurvePair]:
    """Yield the members in order of increasing a, then increasing b.

    ``a_range`` restricts a to a closed interval, for splitting work.
    """
    A, B = spec.box()
    lo, hi = (-A, A) if a_range is None else (max(-A, a_range[0]), min(A, a_range[1]))
    m = spec.modulus
    i, j = spec.power_pair
    bs = _progression(-B, B, spec.t, m)
    primes = _sieve_primes(spec)
    for a in _progression(lo, hi, spec.r, m).tolist():
        keep = np.ones(len(bs), dtype=bool)
        for p in primes:
            if a % p**i == 0:
                keep &= bs % p**j != 0
        for b in bs[keep].tolist():
            if spec.is_positive_rank:
                yield CurvePair(a, b * b, point_y=b)
            else:
                yield CurvePair(a, b)


def family_size(spec: FamilySpec) -> int:
    return sum(1 for _ in enumerate_family(spec))


def _count_in_class(bound: int, residue: int, m: int) -> int:
    """#{x : |x| <= bound, x = residue mod m}."""
    if bound < 0:
        return 0
    return len(range(-bound + ((residue + bound) % m), bound + 1, m))


def count_mobius(spec: FamilySpec) -> int:
    """Exact family size by Mobius inversion over d with d^4 | a, d^j | b."""
    A, B = spec.box()
    i, j = spec.power_pair
    m = spec.modulus
    total = 0
    d = 1
    while d**i <= A and d**j <= B:
        if math.gcd(d, m) == 1:
            mu = mobius(d)
            if mu:
                inv = pow(d, -1, m)
                na = _count_in_class(A // d**i, spec.r * inv**i, m)
                nb = _count_in_class(B // d**j, spec.t * inv**j, m)
                total += mu * na * nb
        d += 1
    return total


def count_asymptotic(spec: FamilySpec) -> float:
    """X^{5/6} / (9 q^2 zeta_{6q}(10)), or X^{7/12} / (9 zeta_6(7))."""
    if spec.is_positive_rank:
        return spec.X ** (7 / 12) / (9.0 * zeta_partial(7.0, (2, 3)))
    excluded = {2, 3} | set(factorize(spec.q)) if spec.q > 1 else {2, 3}
    return spec.X ** (5 / 6) / (9.0 * spec.q**2 * zeta_partial(10.0, excluded))
