"""Per-curve arithmetic for short Weierstrass models y^2 = x^3 + a x + b.

Coefficient conventions
-----------------------
``a_p`` is the classical trace ``p + 1 - #E(F_p)``; ``lambda(n)`` is the
analytically normalised coefficient, ``lambda(p) = a_p / sqrt(p)``.  The
integer ``G_j = p^{j/2} lambda(p^j)`` is produced by the recurrence
``G_{j+1} = a_p G_j - p G_{j-1}`` at good primes and equals ``a_p^j`` at bad
ones.  "Good" means ``p`` does not divide ``16 (4a^3 + 27b^2)``; this is the
extension used for averaging over all residue pairs, including models that
are not globally minimal.  At ``p = 2`` every coefficient vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import (
    chi4,
    factorize,
    iroot_floor,
    is_squarefree,
    jacobi,
    legendre_table,
    mobius,
    primes_upto,
)
from .exact import Surd


class SingularCurve(ValueError):
    """The pair (a, b) has 4a^3 + 27b^2 = 0."""


class NotSquarefree(ValueError):
    pass


class UndefinedSymbol(ValueError):
    pass


@dataclass(frozen=True)
class CurvePair:
    """An integral model y^2 = x^3 + a x + b.

    ``point_y`` is set for members of the positive-rank family, where the
    model is E_{a, b0^2} and (0, b0) is the rational point carried along.
    """

    a: int
    b: int
    point_y: int | None = None
    disc: int = field(init=False, repr=False)
    c4: int = field(init=False, repr=False)
    c6: int = field(init=False, repr=False)

    def __post_init__(self):
        disc = -16 * (4 * self.a**3 + 27 * self.b**2)
        if disc == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.a}x + {self.b} is singular")
        object.__setattr__(self, "disc", disc)
        object.__setattr__(self, "c4", -48 * self.a)
        object.__setattr__(self, "c6", -864 * self.b)

    @property
    def core(self) -> int:
        """4a^3 + 27b^2, so that disc = -16 * core."""
        return 4 * self.a**3 + 27 * self.b**2

    def is_good(self, p: int) -> bool:
        return is_good_prime(self.a, self.b, p)

    def bad_primes(self) -> list[int]:
        return sorted(factorize(self.disc))

    def torsion_flag(self) -> bool:
        """True when (0, point_y) may be torsion by the Lutz-Nagell test."""
        if self.point_y is None:
            return False
        return is_torsion_candidate(self.a, self.point_y)


@dataclass(frozen=True)
class FrobeniusTrace:
    p: int
    ap: int
    good: bool

    @property
    def normalized(self) -> float:
        return self.ap / math.sqrt(self.p)


def is_good_prime(a: int, b: int, p: int) -> bool:
    return (16 * (4 * a**3 + 27 * b**2)) % p != 0


def ap_legendre(a: int, b: int, p: int) -> FrobeniusTrace:
    """a_p as minus the character sum over x mod p; zero at p = 2."""
    if p == 2:
        return FrobeniusTrace(2, 0, False)
    chi = legendre_table(p)
    x = np.arange(p, dtype=np.int64)
    vals = ((x * x % p) * x + (a % p) * x + (b % p)) % p
    ap = -int(chi[vals].sum(dtype=np.int64))
    return FrobeniusTrace(p, ap, is_good_prime(a, b, p))


def count_points(a: int, b: int, p: int) -> int:
    """#E(F_p) by enumerating all (x, y) mod p, plus the point at infinity."""
    if p <= 2:
        raise ValueError("count_points needs an odd prime")
    ys = np.arange(p, dtype=np.int64)
    sq_count = np.bincount(ys * ys % p, minlength=p)
    x = np.arange(p, dtype=np.int64)
    rhs = ((x * x % p) * x + (a % p) * x + (b % p)) % p
    return 1 + int(sq_count[rhs].sum())


@lru_cache(maxsize=256)
def ap_table(p: int) -> np.ndarray:
    """a_p(a, b) for all residues a, b mod p as an int64 (p, p) array."""
    if p == 2:
        return np.zeros((2, 2), dtype=np.int64)
    chi = legendre_table(p).astype(np.int64)
    x = np.arange(p, dtype=np.int64)
    cube = x * x % p * x % p
    out = np.empty((p, p), dtype=np.int64)
    bvals = np.arange(p, dtype=np.int64)
    for a in range(p):
        base = (cube + a * x) % p  # indexed by x
        vals = (base[None, :] + bvals[:, None]) % p
        out[a] = -chi[vals].sum(axis=1)
    out.flags.writeable = False
    return out


def bad_pair_mask(p: int) -> np.ndarray:
    """Boolean (p, p) mask of residue pairs with p | 16(4a^3 + 27b^2)."""
    a = np.arange(p, dtype=np.int64)
    core = (4 * (a * a % p * a % p)[:, None] + 27 * (a * a % p)[None, :]) % p
    if p == 2:
        return np.ones((2, 2), dtype=bool)
    return core == 0


def hecke_powers(ap: int, p: int, jmax: int, good: bool) -> list[int]:
    """[G_0, ..., G_jmax] with G_j = p^{j/2} lambda(p^j), exact integers."""
    if p == 2:
        return [1] + [0] * jmax
    out = [1]
    if jmax >= 1:
        out.append(ap)
    for _ in range(2, jmax + 1):
        if good:
            out.append(ap * out[-1] - p * out[-2])
        else:
            out.append(ap * out[-1])
    return out


def gegenbauer_int(t: int, p: int, j: int) -> int:
    """p^{j/2} U_j(t / (2 sqrt p)) by the integer three-term recurrence."""
    return hecke_powers(t, p, j, True)[j] if j else 1


def lambda_exact(a: int, b: int, n: int) -> Surd:
    """lambda_{a,b}(n) as an exact surd (integer over sqrt(n))."""
    if n <= 0:
        raise ValueError("n must be a positive integer")
    num = 1
    for p, e in factorize(n).items() if n > 1 else []:
        tr = ap_legendre(a, b, p)
        num *= hecke_powers(tr.ap, p, e, tr.good)[e]
        if num == 0:
            return Surd()
    return Surd.rational(num) / Surd.sqrt(n)


def lambda_n(c: CurvePair, n: int) -> float:
    """lambda(n) in floating point; multiplicative across primes."""
    if n <= 0:
        raise ValueError("n must be a positive integer")
    return float(lambda_exact(c.a, c.b, n))


def dirichlet_coefficients(a: int, b: int, nmax: int) -> np.ndarray:
    """Integer a_n = sqrt(n) lambda(n) for 0 <= n <= nmax (index 0 unused)."""
    an = np.ones(nmax + 1, dtype=np.int64)
    an[0] = 0
    core16 = 16 * (4 * a**3 + 27 * b**2)
    top = max(nmax, 2) + 1
    x_all = np.arange(top, dtype=np.int64)
    # x^3 + a x + b must fit in int64 so that each prime needs one reduction
    if top**3 + abs(a) * top + abs(b) >= 2**63:
        raise ValueError("nmax or the coefficients are too large for int64 character sums")
    poly_all = x_all**3 + a * x_all + b
    square_all = x_all * x_all
    chi = np.empty(top, dtype=np.int8)
    for p in primes_upto(nmax):
        if p == 2:
            an[2::2] = 0
            continue
        chi[:p] = -1
        chi[square_all[1 : (p + 1) // 2] % p] = 1
        chi[0] = 0
        ap = -int(chi[poly_all[:p] % p].sum(dtype=np.int64))
        good = core16 % p != 0
        if p * p > nmax:
            an[p::p] *= ap
            continue
        powers = hecke_powers(ap, p, int(math.log(nmax, p)) + 1, good)
        pk, k = p, 1
        while pk <= nmax:
            idx = np.arange(pk, nmax + 1, pk)
            idx = idx[(idx // pk) % p != 0]
            an[idx] *= powers[k]
            pk *= p
            k += 1
    return an


def twist(a: int, b: int, d: int) -> tuple[int, int]:
    """The model (d^4 a, d^6 b), isomorphic to (a, b) over Q."""
    return d**4 * a, d**6 * b


def is_isomorphic(c1: CurvePair, c2: CurvePair) -> bool:
    """Whether a2 = d^4 a1, b2 = d^6 b1 for some rational d != 0."""
    a1, b1, a2, b2 = c1.a, c1.b, c2.a, c2.b
    if (a1 == 0) != (a2 == 0) or (b1 == 0) != (b2 == 0):
        return False
    if a1 == 0:
        return _is_rational_power(Fraction(b2, b1), 6)
    if b1 == 0:
        return _is_rational_power(Fraction(a2, a1), 4)
    u = Fraction(a1 * b2, b1 * a2)  # u = d^2
    if u * u != Fraction(a2, a1) or u**3 != Fraction(b2, b1):
        return False
    return _is_rational_power(u, 2)


def _is_rational_power(q: Fraction, k: int) -> bool:
    if q <= 0:
        return False
    return all(iroot_floor(part, k) ** k == part for part in (q.numerator, q.denominator))


def is_minimal_at(c: CurvePair, p: int) -> bool:
    """Sufficient minimality test: p^12 !| disc or p^4 !| c4 or p^6 !| c6."""
    return c.disc % p**12 != 0 or c.c4 % p**4 != 0 or c.c6 % p**6 != 0


def root_number_formula(a: int, b: int, eps2: int) -> int:
    """w = mu(4a^3+27b^2) (a/3b) chi_4(b) (-1)^{a+1} eps2, for squarefree 4a^3+27b^2.

    (a/3b) is the Jacobi symbol modulo |3b|, times -1 when both b and
    4a^3 + 27b^2 are negative.  With that reading eps2 depends only on
    (a, b) mod 8, as a local factor at 2 must; with the plain symbol it does
    not.  eps2 must be supplied by the caller.
    """
    if eps2 not in (1, -1):
        raise ValueError("eps2 must be +1 or -1")
    if b == 0:
        raise UndefinedSymbol("b = 0 leaves (a/3b) undefined")
    core = 4 * a**3 + 27 * b**2
    if core == 0 or not is_squarefree(core):
        raise NotSquarefree(f"4a^3 + 27b^2 = {core} is not squarefree")
    if b % 2 == 0 or math.gcd(a, 3 * b) != 1:
        raise UndefinedSymbol(f"(a/3b) undefined or zero for a={a}, b={b}")
    symbol = jacobi(a, abs(3 * b)) * (-1 if b < 0 and core < 0 else 1)
    sign = mobius(abs(core)) * symbol * chi4(b) * (-1) ** ((a + 1) % 2)
    return sign * eps2


def is_torsion_candidate(a: int, b: int) -> bool:
    """Lutz-Nagell necessary condition for (0, b) on y^2 = x^3 + a x + b^2: b^2 | 4a^3."""
    if b == 0:
        return True
    return (4 * a**3) % (b * b) == 0

