"""Chebyshev polynomials of the second kind and the Sato-Tate measure.

The linearisation coefficients are computed in exact integer arithmetic from
``U_a U_b = sum_{j=0}^{min(a,b)} U_{a+b-2j}``; quadrature is only ever used
to cross-check them.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


class ToleranceNotMet(RuntimeError):
    pass


class DivergentRegion(ValueError):
    pass


def u_eval(n: int, x):
    """U_n(x) by the three-term recurrence; works elementwise on arrays."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else float(x)
    prev, cur = 0.0 * x + 1.0, 2.0 * x
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def u_table(lmax: int, x: np.ndarray) -> np.ndarray:
    """Rows U_0(x), ..., U_lmax(x)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((lmax + 1,) + x.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = 2.0 * x
    for n in range(2, lmax + 1):
        out[n] = 2.0 * x * out[n - 1] - out[n - 2]
    return out


@dataclass(frozen=True)
class LinearizationTable:
    exps: tuple[int, ...]
    coeffs: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.exps)

    def __getitem__(self, l: int) -> int:
        return self.coeffs.get(l, 0)


def _mul_u_by(coeffs: Counter, e: int) -> Counter:
    out: Counter = Counter()
    for a, c in coeffs.items():
        for j in range(min(a, e) + 1):
            out[a + e - 2 * j] += c
    return out


@lru_cache(maxsize=None)
def _linearize_sorted(exps: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    if not exps:
        return ((0, 1),)
    coeffs = Counter(dict(_linearize_sorted(exps[:-1])))
    coeffs = _mul_u_by(coeffs, exps[-1])
    return tuple(sorted((l, c) for l, c in coeffs.items() if c))


def linearize(exps: Sequence[int]) -> LinearizationTable:
    """Integer c_l with U_{e_1} ... U_{e_k} = sum_l c_l U_l."""
    exps = tuple(int(e) for e in exps)
    if not exps:
        raise ValueError("need at least one factor")
    if any(e < 0 for e in exps):
        raise ValueError("exponents must be nonnegative")
    key = tuple(sorted(e for e in exps if e))
    return LinearizationTable(exps, dict(_linearize_sorted(key)))


@lru_cache(maxsize=64)
def _gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, pi] with the Sato-Tate density folded in."""
    x, w = np.polynomial.legendre.leggauss(n)
    theta = 0.5 * math.pi * (x + 1.0)
    weights = 0.5 * math.pi * w * (2.0 / math.pi) * np.sin(theta) ** 2
    theta.flags.writeable = False
    weights.flags.writeable = False
    return theta, weights


def st_nodes(n: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes theta_i and Sato-Tate weights w_i on [0, pi]."""
    return _gauss_nodes(n)


def sato_tate_integral(
    f: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-12,
    min_nodes: int = 64,
    max_nodes: int = 8192,
) -> float:
    """(2/pi) int_0^pi f(theta) sin^2(theta) d theta with order doubling.

    ``f`` receives an array of angles.  Raises ToleranceNotMet when two
    successive orders still disagree by more than ``tol`` at ``max_nodes``.
    """
    n = min_nodes
    theta, w = _gauss_nodes(n)
    prev = float(np.dot(w, f(theta)))
    while n < max_nodes:
        n *= 2
        theta, w = _gauss_nodes(n)
        cur = float(np.dot(w, f(theta)))
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise ToleranceNotMet(f"quadrature did not settle below {tol} with {max_nodes} nodes")


def linearize_by_quadrature(exps: Sequence[int], l: int) -> float:
    """c_l as the integral of U_l * prod U_{e_j} against the Sato-Tate measure."""

    def f(theta):
        c = np.cos(theta)
        out = u_eval(l, c)
        for e in exps:
            out = out * u_eval(e, c)
        return out

    return sato_tate_integral(f, min_nodes=max(64, 2 * (sum(exps) + l)))


def even_index_sum(x: float, t: float) -> float:
    """sum_n U_{2n}(x) t^{2n} in closed form."""
    if abs(t) >= 1:
        raise DivergentRegion(f"|t| = {abs(t)} >= 1")
    t2 = t * t
    return (1.0 + t2) / (1.0 + 2.0 * t2 * (1.0 - 2.0 * x * x) + t2 * t2)


def generating_sum(x: float, t: float) -> float:
    """sum_n U_n(x) t^n = 1 / (1 - 2xt + t^2)."""
    if abs(t) >= 1:
        raise DivergentRegion(f"|t| = {abs(t)} >= 1")
    return 1.0 / (1.0 - 2.0 * x * t + t * t)
