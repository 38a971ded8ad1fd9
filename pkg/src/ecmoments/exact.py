"""Exact arithmetic in multiquadratic fields.

A :class:`Surd` is a finite sum ``sum_s c_s * sqrt(s)`` with rational ``c_s``
and distinct squarefree positive radicands ``s``.  Normalised Dirichlet
coefficients lambda(n) = (integer) / sqrt(n) live here, so orthogonality sums
and their closed forms can be compared with ``==`` instead of a tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .arith import squarefree_part

Rational = Union[int, Fraction]


def _radical_product(s: int, t: int) -> tuple[int, int]:
    """sqrt(s)*sqrt(t) = m*sqrt(u) for squarefree s, t; returns (m, u)."""
    g = math.gcd(s, t)
    return g, (s // g) * (t // g)


class Surd:
    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        for s, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[s] = clean.get(s, Fraction(0)) + c
        self._terms = {s: c for s, c in clean.items() if c}

    @classmethod
    def rational(cls, q: Rational) -> "Surd":
        return cls({1: Fraction(q)})

    @classmethod
    def sqrt(cls, n: int) -> "Surd":
        """Exact sqrt(n) for a nonnegative integer n."""
        if n < 0:
            raise ValueError("sqrt of a negative integer is not real")
        if n == 0:
            return cls()
        s, m = squarefree_part(n)
        return cls({s: Fraction(m)})

    @classmethod
    def prime_power(cls, p: int, twice_exponent: int) -> "Surd":
        """p ** (twice_exponent / 2) for a prime p."""
        h, odd = divmod(twice_exponent, 2)
        coeff = Fraction(p) ** h
        return cls({p: coeff} if odd else {1: coeff})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coeff(self, radicand: int = 1) -> Fraction:
        return self._terms.get(radicand, Fraction(0))

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self.coeff(1)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __float__(self) -> float:
        return math.fsum(float(c) * math.sqrt(s) for s, c in self._terms.items())

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)):
            return Surd.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, Fraction(0)) + c
        return Surd(out)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd({s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for s, c in self._terms.items():
            for t, d in other._terms.items():
                m, u = _radical_product(s, t)
                out[u] = out.get(u, Fraction(0)) + c * d * m
        return Surd(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({s: c / other for s, c in self._terms.items()})
        if isinstance(other, Surd) and len(other._terms) == 1:
            (t, d), = other._terms.items()
            # 1/(d sqrt t) = sqrt(t) / (d t)
            return self * Surd({t: 1 / (d * t)})
        return NotImplemented

    def __pow__(self, n: int) -> "Surd":
        if n < 0:
            return Surd.rational(1) / (self ** (-n))
        out = Surd.rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "Surd(0)"
        parts = []
        for s, c in sorted(self._terms.items()):
            parts.append(f"{c}" if s == 1 else f"{c}*sqrt({s})")
        return "Surd(" + " + ".join(parts) + ")"
