"""Predicted moments, ratios of rank-two counts and the first-moment identity.

The k-th shifted moment is read off as a residue: with

    G(z) = A_k(z) prod_i Y(z_i) prod_{i<j} S(z_i + z_j),

Y(z) = X_E(1/2 + z)^{-1/2} and S(s) = s zeta(1 + s), the polynomial P_k(N) is

    (-1)^{k(k-1)/2} 2^k / k!  times the coefficient of prod z_i^{2k-2}
    in G(z) prod_{i<j} (z_j - z_i)^2 (z_i + z_j).

log Y(z) = z log(sqrt(N)/2 pi) - gamma z - sum_{odd n >= 3} zeta(n) z^n / n.
For the derivative family the extra prod z_i^{-1} cancels against the zero of
prod zeta(1 + z_i)^{-1}, which leaves an extra prod S(z_i)^{-1} in G.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .arith import is_squarefree, mobius
from .curves import ap_legendre, count_points, lambda_n
from .euler import (
    OutsideRegion,
    a1prime,
    ak,
    ak_shifted,
    aprime_product,
)
from .families import FamilySpec, enumerate_family
from .series import TruncatedSeries, exp_taylor, reciprocal_taylor
from .special import g_k, zeta, zeta_complex, zeta_one_plus_regular

VALUE = "value"
DERIVATIVE = "derivative"

LEADING_ORDER = "leading-order"
FULL_POLYNOMIAL_K1 = "full-polynomial-k1"
FULL_POLYNOMIAL_K2 = "full-polynomial-k2"

FD_STEP = 1e-3


class UnsupportedK(ValueError):
    pass


class BadClass(ValueError):
    pass


@dataclass(frozen=True)
class MomentPrediction:
    """Coefficients of a polynomial in log N, constant term first."""

    k: float
    family: FamilySpec
    form: str
    coefficients: tuple[float, ...]
    half_factor_applied: bool

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, log_n: float) -> float:
        return float(sum(c * log_n**i for i, c in enumerate(self.coefficients)))


@dataclass(frozen=True)
class RatioPrediction:
    q: int
    classes: tuple[tuple[int, int], tuple[int, int]]
    value: float


@dataclass(frozen=True)
class StructureReport:
    k: int
    degree_p: int
    degree_q: int
    leading_p: sympy.Expr
    leading_q: sympy.Expr

    @property
    def degrees_match(self) -> bool:
        return self.degree_p == self.degree_q == self.k * (self.k - 1) // 2


@dataclass(frozen=True)
class ContourCheck:
    alpha: complex
    integral: complex
    residue: complex


# -- residue engine ---------------------------------------------------------------


def residue_prefactor(k: int) -> Fraction:
    return Fraction((-1) ** (k * (k - 1) // 2) * 2**k, math.factorial(k))


def _vandermonde_part(k: int, order: int) -> TruncatedSeries:
    out = TruncatedSeries.constant(k, order, 1)
    for i in range(k):
        for j in range(i + 1, k):
            w = [0] * k
            w[i], w[j] = -1, 1
            diff = TruncatedSeries.linear(k, order, w)
            w[i] = 1
            out = out * diff * diff * TruncatedSeries.linear(k, order, w)
    return out


def residue(k: int, g: TruncatedSeries):
    """The residue functional applied to G (a TruncatedSeries in k variables)."""
    order = k * (2 * k - 2)
    if g.order < order:
        raise ValueError("G is truncated too early")
    g = TruncatedSeries(k, order, dict(g.coeffs))
    product = g * _vandermonde_part(k, order)
    c = residue_prefactor(k)
    return product.coefficient((2 * k - 2,) * k) * (c.numerator / c.denominator if not _symbolic(g) else sympy.Rational(c.numerator, c.denominator))


def _symbolic(g: TruncatedSeries) -> bool:
    return any(isinstance(v, sympy.Basic) for v in g.coeffs.values())


def y_log_taylor(log_a, order: int, euler_gamma=np.euler_gamma, odd_zetas=None) -> list:
    """Taylor coefficients of log Y(z); log_a = log(sqrt(N)/2 pi)."""
    out = [0] * (order + 1)
    if order >= 1:
        out[1] = log_a - euler_gamma
    for n in range(3, order + 1, 2):
        zn = odd_zetas[n] if odd_zetas is not None else zeta(float(n))
        out[n] = -zn / n
    return out


def moment_integrand(
    k: int,
    a_series: TruncatedSeries,
    y_taylor: Sequence,
    s_taylor: Sequence,
    derivative: bool = False,
) -> TruncatedSeries:
    """G(z) for the value family, or for the derivative family when ``derivative``."""
    order = a_series.order
    g = a_series
    for i in range(k):
        zi = TruncatedSeries.linear(k, order, [1 if m == i else 0 for m in range(k)])
        g = g * zi.compose(y_taylor)
        if derivative:
            g = g * zi.compose(reciprocal_taylor(s_taylor, order))
    for i in range(k):
        for j in range(i + 1, k):
            w = [0] * k
            w[i] = w[j] = 1
            g = g * TruncatedSeries.linear(k, order, w).compose(s_taylor)
    return g


# -- numerical moment polynomials --------------------------------------------------


def _a_taylor(k: int, spec: FamilySpec, pmax: int) -> tuple[float, float]:
    """A_k(0) and, for k = 2, d/de A_2(e, e) at 0 by Richardson-extrapolated differences."""
    a0 = ak_shifted([0.0] * k, spec, pmax).value
    if k == 1:
        return a0, 0.0

    def diag(e: float) -> float:
        return ak_shifted([e, e], spec, pmax).value

    h = FD_STEP
    d1 = (diag(h) - diag(-h)) / (2 * h)
    d2 = (diag(h / 2) - diag(-h / 2)) / h
    return a0, (4 * d2 - d1) / 3


def pk_coefficients(k: int, spec: FamilySpec = FamilySpec(), pmax: int = 1000) -> MomentPrediction:
    """P_k(N) as a polynomial in log N for k = 1, 2 (closed residues)."""
    if k not in (1, 2):
        raise UnsupportedK("the full polynomial is available for k = 1 and 2 only")
    a0, da = _a_taylor(k, spec, pmax)
    if k == 1:
        return MomentPrediction(1, spec, FULL_POLYNOMIAL_K1, (2.0 * a0,), False)
    # 2 A log N - 4 A log 2 pi + 2 (d1 A + d2 A), and d1 A + d2 A = d/de A(e, e)
    coeffs = (-4.0 * a0 * math.log(2 * math.pi) + 2.0 * da, 2.0 * a0)
    return MomentPrediction(2, spec, FULL_POLYNOMIAL_K2, coeffs, False)


def pk_eval(k: int, N: int, spec: FamilySpec = FamilySpec(), pmax: int = 1000) -> float:
    return pk_coefficients(k, spec, pmax)(math.log(N))


def pk_by_series(k: int, N: int, a0: float, da: float = 0.0) -> float:
    """P_k(N) from the generic residue engine, given A_k(0) and d/de A_k(e, ..., e)."""
    order = k * (2 * k - 2)
    a_series = TruncatedSeries.constant(k, order, a0)
    if k > 1:
        a_series = a_series + TruncatedSeries.linear(k, order, [da / k] * k)
    log_a = 0.5 * math.log(N) - math.log(2 * math.pi)
    g = moment_integrand(k, a_series, y_log_and_exp(log_a, order), zeta_one_plus_regular(order))
    return float(residue(k, g))


def y_log_and_exp(log_a, order: int) -> list:
    return exp_taylor(y_log_taylor(log_a, order), order)


def leading_term(
    k: float, log_n: float, spec: FamilySpec = FamilySpec(), variant: str = VALUE, pmax: int = 1000
) -> float:
    """(1/2) a_k g_k (log N)^{k(k-1)/2}, with a'_k for the derivative family."""
    if k == 0:
        return 0.5
    if variant == VALUE:
        arith = ak(k, spec, pmax).value
    elif variant == DERIVATIVE:
        if k != int(k) or k < 0:
            raise UnsupportedK("a'_k is computed for nonnegative integer k only")
        arith = aprime_product(int(k), min(pmax, 200)).value
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return 0.5 * arith * g_k(k).value * log_n ** (k * (k - 1) / 2)


def qk_structure_check(k: int) -> StructureReport:
    """Symbolic check that P_k and Q_k have the same degree k(k-1)/2 in log N."""
    if k not in (1, 2):
        raise UnsupportedK("structure check is implemented for k = 1, 2")
    order = k * (2 * k - 2)
    L, gam = sympy.symbols("L gamma")
    odd = {n: sympy.Symbol(f"zeta{n}") for n in range(3, order + 1, 2)}
    stj = [sympy.Symbol(f"s{n}") for n in range(order + 1)]
    s_taylor = [sympy.Integer(1)] + stj[1:]
    # generic Taylor data for the arithmetic factor
    a_series = TruncatedSeries(k, order, {})
    for exps in _monomials(k, order):
        name = "a" + "_".join(map(str, exps))
        a_series.coeffs[exps] = sympy.Symbol(name)
    y_taylor = exp_taylor(y_log_taylor(L, order, gam, odd), order)
    out = []
    for derivative in (False, True):
        g = moment_integrand(k, a_series, y_taylor, s_taylor, derivative)
        poly = sympy.Poly(sympy.expand(residue(k, g)), L)
        out.append((poly.degree(), sympy.factor(poly.LC())))
    return StructureReport(k, out[0][0], out[1][0], out[0][1], out[1][1])


def _monomials(k: int, order: int):
    if k == 1:
        for e in range(order + 1):
            yield (e,)
        return
    for first in range(order + 1):
        for rest in _monomials(k - 1, order - first):
            yield (first,) + rest


# -- ratios of rank-two counts --------------------------------------------------


def _check_class(q: int, r: int, t: int) -> None:
    if math.gcd(4 * r**3 + 27 * t**2, 6 * q) != 1:
        raise BadClass(f"(4r^3 + 27t^2, 6q) != 1 for r = {r}, t = {t}, q = {q}")


def _q_primes(q: int) -> list[int]:
    if q < 1 or not (q == 1 or is_squarefree(q)) or math.gcd(q, 6) != 1:
        raise BadClass(f"q = {q} must be squarefree and prime to 6")
    return [p for p in range(5, q + 1) if q % p == 0 and all(p % d for d in range(2, math.isqrt(p) + 1))]


def ratio_rq(q: int, r: int, t: int, r2: int, t2: int, k: float = -0.5) -> RatioPrediction:
    """prod_{p | q} [(1 - lambda_{r,t}(p)/sqrt p + 1/p) / (same for r2, t2)]^{-k}."""
    _check_class(q, r, t)
    _check_class(q, r2, t2)
    value = 1.0
    for p in _q_primes(q):
        num = 1.0 - ap_legendre(r, t, p).ap / p + 1.0 / p
        den = 1.0 - ap_legendre(r2, t2, p).ap / p + 1.0 / p
        value *= (num / den) ** (-k)
    return RatioPrediction(q, ((r, t), (r2, t2)), value)


def ratio_squared_by_points(q: int, r: int, t: int, r2: int, t2: int) -> Fraction:
    """prod_{p | q} N_p(r, t) / N_p(r2, t2) from point counts; R_{q,-1/2}^2 exactly."""
    _check_class(q, r, t)
    _check_class(q, r2, t2)
    out = Fraction(1)
    for p in _q_primes(q):
        out *= Fraction(count_points(r, t, p), count_points(r2, t2, p))
    return out


def ratio_squared_by_traces(q: int, r: int, t: int, r2: int, t2: int) -> Fraction:
    """The same square from 1 - a_p/p + 1/p with a_p from character sums."""
    _check_class(q, r, t)
    _check_class(q, r2, t2)
    out = Fraction(1)
    for p in _q_primes(q):
        num = 1 - Fraction(ap_legendre(r, t, p).ap, p) + Fraction(1, p)
        den = 1 - Fraction(ap_legendre(r2, t2, p).ap, p) + Fraction(1, p)
        out *= num / den
    return out


# -- positive-rank first moment ------------------------------------------------


def rh_first_moment(alpha: float, pmax: int = 1000) -> float:
    """A'_1(alpha) / zeta(1 + alpha), the curve-independent part of the first moment."""
    if abs(alpha) >= 1.0 / 6.0 - 0.01:
        raise OutsideRegion("|alpha| must stay below 1/6 - 0.01")
    if alpha == 0:
        return 0.0
    return a1prime(alpha, pmax).value / zeta(1.0 + alpha)


def _y_value(z: complex, log_a: float) -> complex:
    from scipy.special import loggamma

    return cmath.exp(z * log_a + 0.5 * (loggamma(1 + z) - loggamma(1 - z)))


def positive_rank_contour(
    alpha: complex, log_n: float = math.log(496), radius: float = 0.1, nodes: int = 64, pmax: int = 300
) -> ContourCheck:
    """(1/2 pi i) times the circle integral of A'_1(z) Y(z) / ((z - alpha) zeta(1 + z)).

    1/zeta(1 + z) vanishes at 0, so the integral vanishes at alpha = 0 and
    equals A'_1(alpha) Y(alpha) / zeta(1 + alpha) otherwise.
    """
    log_a = 0.5 * log_n - math.log(2 * math.pi)
    total = 0j
    for m in range(nodes):
        z = radius * cmath.exp(2j * math.pi * (m + 0.5) / nodes)
        f = a1prime(complex(z), pmax).value * _y_value(z, log_a) / zeta_complex(1 + z)
        # dz / (2 pi i) = z dtheta / (2 pi)
        total += f * z / (z - alpha)
    integral = total / nodes
    if alpha == 0:
        res = 0j
    else:
        res = a1prime(complex(alpha), pmax).value * _y_value(alpha, log_a) / zeta_complex(1 + alpha)
    return ContourCheck(complex(alpha), integral, res)


def all_family_first_moment(alpha: float, spec: FamilySpec = FamilySpec(), pmax: int = 1000) -> float:
    """A_1(alpha); the root-number average removes the dual term, so this is not even in alpha."""
    return ak_shifted([alpha], spec, pmax).value


def mobius_averages(
    ns: Sequence[int] = (2, 3, 5, 6, 7, 10), X: float = 1e5
) -> dict[int, tuple[float, float]]:
    """n -> (average of lambda_E(n) over the positive-rank family, mu(n)/sqrt(n))."""
    spec = FamilySpec(variant="positive-rank", X=X)
    curves = list(enumerate_family(spec))
    out = {}
    for n in ns:
        vals = [lambda_n(c, n) for c in curves]
        out[n] = (math.fsum(vals) / len(vals), mobius(n) / math.sqrt(n))
    return out
