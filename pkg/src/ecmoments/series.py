"""Multivariate power series truncated at a total degree.

Coefficients may be floats or sympy expressions; only +, - and * are used on
them, so both work unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence


@dataclass
class TruncatedSeries:
    nvars: int
    order: int
    coeffs: dict[tuple[int, ...], Any] = field(default_factory=dict)

    @classmethod
    def constant(cls, nvars: int, order: int, value) -> "TruncatedSeries":
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def linear(cls, nvars: int, order: int, weights: Sequence) -> "TruncatedSeries":
        """sum_i weights[i] z_i."""
        out = {}
        for i, w in enumerate(weights):
            if w != 0:
                e = [0] * nvars
                e[i] = 1
                out[tuple(e)] = w
        return cls(nvars, order, out)

    @classmethod
    def monomial(cls, nvars: int, order: int, exps: Sequence[int], value=1) -> "TruncatedSeries":
        exps = tuple(exps)
        return cls(nvars, order, {exps: value} if sum(exps) <= order else {})

    def _like(self, coeffs) -> "TruncatedSeries":
        return TruncatedSeries(self.nvars, self.order, coeffs)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.nvars, self.order, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self._like({k: v * other for k, v in self.coeffs.items()})
        out: dict[tuple[int, ...], Any] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.coeffs.items(), other.coeffs.items()):
            e = tuple(a + b for a, b in zip(e1, e2))
            if sum(e) <= self.order:
                out[e] = out.get(e, 0) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = TruncatedSeries.constant(self.nvars, self.order, 1)
        for _ in range(n):
            out = out * self
        return out

    def coefficient(self, exps: Sequence[int]):
        return self.coeffs.get(tuple(exps), 0)

    def compose(self, taylor: Sequence) -> "TruncatedSeries":
        """f(self) for f = sum taylor[n] x^n; self must have no constant term."""
        if self.coeffs.get((0,) * self.nvars, 0) != 0:
            raise ValueError("compose needs a series without constant term")
        out = TruncatedSeries.constant(self.nvars, self.order, 0)
        power = TruncatedSeries.constant(self.nvars, self.order, 1)
        for n, c in enumerate(taylor[: self.order + 1]):
            if n:
                power = power * self
            out = out + power * c
        return out


def exp_taylor(log_taylor: Sequence, order: int) -> list:
    """Taylor coefficients of exp(g) from those of g (g(0) must be 0)."""
    if log_taylor and log_taylor[0] != 0:
        raise ValueError("g(0) must vanish")
    g = list(log_taylor) + [0] * (order + 1 - len(log_taylor))
    out = [1] + [0] * order
    # n f_n = sum_{j=1}^n j g_j f_{n-j}
    for n in range(1, order + 1):
        out[n] = sum(j * g[j] * out[n - j] for j in range(1, n + 1)) / n
    return out


def reciprocal_taylor(taylor: Sequence, order: int) -> list:
    """Taylor coefficients of 1/f; f(0) must be nonzero."""
    f = list(taylor) + [0] * (order + 1 - len(taylor))
    out = [1 / f[0]] + [0] * order
    for n in range(1, order + 1):
        out[n] = -sum(f[j] * out[n - j] for j in range(1, n + 1)) / f[0]
    return out
