"""Complete averages of products of lambda over all Weierstrass pairs mod p.

Every local sum is exact.  Brute force groups the p^2 residue pairs by their
Frobenius trace, then evaluates the integer Hecke polynomials G_e on each
distinct trace, so the cost is independent of the exponents once the trace
table is known.  Values are :class:`~ecmoments.exact.Surd` instances, i.e.
rationals times a half-integer power of p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .arith import factorize, is_prime, legendre_table
from .chebyshev import linearize
from .curves import ap_legendre, ap_table, bad_pair_mask, hecke_powers
from .exact import Surd
from .families import FamilySpec
from .hecke import Unsupported, trace_eichler_selberg

BRUTE_FORCE = "brute-force"
CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class LocalSum:
    """A local average at a prime, with where it came from."""

    p: int
    exps: tuple[int, ...]
    value: Surd
    source: str

    @property
    def total(self) -> int:
        return sum(self.exps)

    def __float__(self) -> float:
        return float(self.value)


FFT_THRESHOLD = 150


def ap_table_fft(p: int) -> np.ndarray:
    """a_p(a, c) for all residues via one cross-correlation per row.

    With h_a(v) = #{x : x^3 + a x = v}, a_p(a, c) = -sum_v h_a(v) chi(v + c).
    """
    chi = legendre_table(p).astype(np.float64)
    x = np.arange(p, dtype=np.int64)
    cube = x * x % p * x % p
    chi_hat = np.fft.rfft(chi)
    out = np.empty((p, p), dtype=np.int64)
    rows = max(1, 2_000_000 // p)
    for start in range(0, p, rows):
        a = np.arange(start, min(p, start + rows), dtype=np.int64)
        vals = (cube[None, :] + a[:, None] * x[None, :]) % p
        flat = (np.arange(len(a), dtype=np.int64)[:, None] * p + vals).ravel()
        h = np.bincount(flat, minlength=len(a) * p).reshape(len(a), p).astype(np.float64)
        corr = np.fft.irfft(np.conj(np.fft.rfft(h, axis=1)) * chi_hat[None, :], n=p, axis=1)
        out[start : start + len(a)] = -np.rint(corr).astype(np.int64)
    return out


@lru_cache(maxsize=512)
def trace_histogram(p: int, square_b: bool = False) -> tuple[tuple[int, bool, int], ...]:
    """(a_p, good, multiplicity) over all (a, b) mod p, or over the models (a, b^2)."""
    if p == 2:
        return ((0, False, 4),)
    table = ap_table(p) if p < FFT_THRESHOLD else ap_table_fft(p)
    good = ~bad_pair_mask(p)
    if square_b:
        # b -> b^2 hits c = 0 once and each nonzero square twice
        weights = 1 + legendre_table(p).astype(np.int64)
    else:
        weights = np.ones(p, dtype=np.int64)
    w = np.broadcast_to(weights[None, :], (p, p)).ravel()
    off = 2 * math.isqrt(p) + 2
    idx = (table.ravel() + off) + (2 * off + 1) * (~good).ravel()
    counts = np.bincount(idx, weights=w, minlength=2 * (2 * off + 1))
    out = []
    for i in np.flatnonzero(counts):
        flag, v = divmod(int(i), 2 * off + 1)
        out.append((v - off, flag == 0, int(round(counts[i]))))
    return tuple(sorted(out))


def _power_sum(p: int, exps: Sequence[int], square_b: bool) -> int:
    """sum over residue pairs of prod_i G_{e_i}; an exact integer."""
    if p == 2:
        return 4 if sum(exps) == 0 else 0
    emax = max(exps, default=0)
    total = 0
    for ap, good, mult in trace_histogram(p, square_b):
        g = hecke_powers(ap, p, emax, good)
        term = mult
        for e in exps:
            term *= g[e]
            if not term:
                break
        total += term
    return total


def _scaled(p: int, integer: int, f: int) -> Surd:
    """integer * p^{-2} * p^{-f/2}."""
    return Surd.rational(integer) * Surd.prime_power(p, -4 - f)


def qstar_brute(p: int, exps: Sequence[int]) -> LocalSum:
    """Q*(p^{e_1}, ..., p^{e_k}) = p^{-2} sum_{a,b mod p} prod lambda_{a,b}(p^{e_i})."""
    exps = _check(p, exps)
    value = _scaled(p, _power_sum(p, exps, False), sum(exps))
    return LocalSum(p, exps, value, BRUTE_FORCE)


def qsquare_brute(p: int, exps: Sequence[int]) -> LocalSum:
    """Q*_square: the same average over the models (a, b^2)."""
    exps = _check(p, exps)
    value = _scaled(p, _power_sum(p, exps, True), sum(exps))
    return LocalSum(p, exps, value, BRUTE_FORCE)


def qprime(p: int, exps: Sequence[int]) -> Surd:
    """Q' = Q*_square times (1 - p^{-7})^{-1} when some exponent is positive."""
    val = qsquare_brute(p, exps).value
    if sum(exps) == 0:
        return val
    return val * Fraction(p**7, p**7 - 1)


def q_sum(p: int, j: int) -> int:
    """Q(p^j) = sum_{a,b mod p} p^{j/2} lambda_{a,b}(p^j), an integer."""
    if j < 1:
        raise ValueError("j must be positive")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _power_sum(p, (j,), False)


def qstar_closed(p: int, exps: Sequence[int]) -> LocalSum:
    """The Chebyshev/trace closed form for Q*, valid for p > 3.

    Odd total exponent gives 0.  For f = 0 this returns the average itself,
    which is 1; see :func:`qstar_closed_rhs` for the raw right-hand side.
    """
    exps = _check(p, exps)
    if p <= 3:
        raise Unsupported("the closed form needs p > 3")
    f = sum(exps)
    if f % 2:
        return LocalSum(p, exps, Surd(), CLOSED_FORM)
    if f == 0:
        return LocalSum(p, exps, Surd.rational(1), CLOSED_FORM)
    return LocalSum(p, exps, qstar_closed_rhs(p, exps), CLOSED_FORM)


def qstar_closed_rhs(p: int, exps: Sequence[int]) -> Surd:
    """Right-hand side of the closed form, evaluated literally (1 - p^-2 at f = 0)."""
    f = sum(exps)
    table = linearize(exps) if exps else None
    c = table.coeffs if table else {0: 1}
    pm1 = Fraction(p - 1)
    out = Surd.rational(c.get(0, 0) * pm1 / p)
    for l, cl in c.items():
        if l == 0 or cl == 0:
            continue
        tr = trace_eichler_selberg(l + 2, p).trace if l % 2 == 0 else 0
        # (p-1)/p^{3/2} * Tr / p^{(l+1)/2} = (p-1) Tr p^{-(l+4)/2}
        term = Surd.rational(pm1 * tr) * Surd.prime_power(p, -(l + 4))
        term = term + Surd.rational(pm1) * Surd.prime_power(p, -(4 + l))
        out = out - cl * term
    out = out + Surd.rational(pm1) * Surd.prime_power(p, -(4 + f))
    return out


def qsquare_linear(p: int) -> Surd:
    """-p^{-1/2} + p^{-3/2}, the value of Q*_square(p)."""
    return Surd.prime_power(p, -3) - Surd.prime_power(p, -1)


def _check(p: int, exps: Sequence[int]) -> tuple[int, ...]:
    exps = tuple(int(e) for e in exps)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not exps or any(e < 0 for e in exps):
        raise ValueError("exponents must be a nonempty sequence of nonnegative integers")
    return exps


def singular_pairs(p: int) -> set[tuple[int, int]]:
    """Residue pairs (a, b) with p | 4a^3 + 27b^2."""
    return {(int(a), int(b)) for a, b in zip(*np.nonzero(bad_pair_mask(p)))}


# -- composite moduli --------------------------------------------------------


def _prime_exponents(ns: Sequence[int]) -> dict[int, tuple[int, ...]]:
    primes: set[int] = set()
    for n in ns:
        if n > 1:
            primes.update(factorize(n))
    out = {}
    for p in sorted(primes):
        es = []
        for n in ns:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            es.append(e)
        out[p] = tuple(es)
    return out


def qstar_multiplicative(ns: Sequence[int], square_b: bool = False) -> Surd:
    """Q*(n_1, ..., n_k) assembled as a product of prime-local brute-force values."""
    out = Surd.rational(1)
    for p, es in _prime_exponents(ns).items():
        out = out * (qsquare_brute(p, es) if square_b else qstar_brute(p, es)).value
    return out


def qstar_direct(ns: Sequence[int]) -> Surd:
    """Q*(n_1, ..., n_k) by summing over all (a, b) modulo n* directly."""
    support = _prime_exponents(ns)
    nstar = math.prod(support) if support else 1
    denom = 1
    for n in ns:
        denom *= n
    total = 0
    cache: dict[tuple[int, int, int], tuple[int, bool]] = {}
    for a, b in itertools.product(range(nstar), repeat=2):
        num = 1
        for n in ns:
            m = n
            for p in support:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                if not e:
                    continue
                key = (a % p, b % p, p)
                if key not in cache:
                    tr = ap_legendre(a % p, b % p, p)
                    cache[key] = (tr.ap, tr.good)
                ap, good = cache[key]
                num *= hecke_powers(ap, p, e, good)[e]
            if not num:
                break
        total += num
    return Surd.rational(Fraction(total, nstar * nstar)) / Surd.sqrt(denom)


def lambda_rt(r: int, t: int, n: int) -> Surd:
    """lambda_{r,t}(n) with the convention lambda(2^e) = 0 for e >= 1."""
    out = Surd.rational(1)
    for p, e in factorize(n).items() if n > 1 else []:
        tr = ap_legendre(r, t, p)
        g = hecke_powers(tr.ap, p, e, tr.good)[e]
        out = out * Surd.rational(g) * Surd.prime_power(p, -e)
    return out


def assemble_qstar_rt(ns: Sequence[int], spec: FamilySpec) -> Surd:
    """Q*_{r,t}(n_1, ..., n_k): local averages off 6q, lambda_{r,t} on 6q."""
    ns = tuple(int(n) for n in ns)
    if any(n < 1 for n in ns):
        raise ValueError("entries must be positive")
    r, t = spec.r, spec.model_b_residue
    six_q = 6 * spec.q
    out = Surd.rational(1)
    for p, es in _prime_exponents(ns).items():
        if six_q % p == 0:
            for e in es:
                if e:
                    out = out * lambda_rt(r, t, p**e)
        else:
            local = qsquare_brute(p, es) if spec.is_positive_rank else qstar_brute(p, es)
            power = 7 if spec.is_positive_rank else 10
            out = out * local.value * Fraction(p**power, p**power - 1)
    return out
