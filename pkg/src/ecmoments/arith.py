"""Elementary integer arithmetic shared by the rest of the package.

Everything here is exact and works on Python ints.  Prime tables are cached
and grow on demand.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

_SIEVE_LIMIT = 0
_SIEVE: np.ndarray = np.zeros(0, dtype=bool)


def _ensure_sieve(n: int) -> None:
    global _SIEVE, _SIEVE_LIMIT
    if n <= _SIEVE_LIMIT:
        return
    limit = max(n, 2 * _SIEVE_LIMIT, 1024)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    _SIEVE, _SIEVE_LIMIT = sieve, limit


def primes_upto(n: int) -> list[int]:
    """All primes p <= n in increasing order."""
    if n < 2:
        return []
    _ensure_sieve(n)
    return np.flatnonzero(_SIEVE[: n + 1]).tolist()


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [p for p in primes_upto(hi) if p >= lo]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 1 << 22:
        _ensure_sieve(n)
        return bool(_SIEVE[n])
    return _miller_rabin(n)


def _miller_rabin(n: int) -> bool:
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        f = lambda v: (v * v + c) % n  # noqa: E731
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of |n| as {p: exponent}.  factorize(0) raises."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 17
    while n > 1 and p * p <= n and p < 10_000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


def mobius(n: int) -> int:
    if n == 0:
        return 0
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def is_squarefree(n: int) -> bool:
    return n != 0 and mobius(n) != 0


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s * m**2 with s squarefree (sign kept in s).  Returns (s, m)."""
    if n == 0:
        return 0, 0
    s, m = (-1 if n < 0 else 1), 1
    for p, e in factorize(n).items():
        m *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, m


def num_divisors(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def chi4(n: int) -> int:
    """The primitive character of conductor 4."""
    if n % 2 == 0:
        return 0
    return 1 if n % 4 == 1 else -1


@lru_cache(maxsize=4096)
def legendre_table(p: int) -> np.ndarray:
    """int8 array whose entry v is (v/p); for p = 2 the quadratic character is trivial."""
    if p == 2:
        return np.array([0, 1], dtype=np.int8)
    table = -np.ones(p, dtype=np.int8)
    squares = (np.arange(1, (p + 1) // 2, dtype=np.int64) ** 2) % p
    table[squares] = 1
    table[0] = 0
    return table


def iroot_floor(x: float | int, k: int) -> int:
    """Largest integer m >= 0 with m**k <= x (exact for integer x)."""
    if x < 0:
        raise ValueError("negative radicand")
    if isinstance(x, float) and x.is_integer():
        x = int(x)
    m = int(round(float(x) ** (1.0 / k)))
    while m > 0 and m**k > x:
        m -= 1
    while (m + 1) ** k <= x:
        m += 1
    return m


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The residue modulo m1*m2 congruent to r1 mod m1 and r2 mod m2 (coprime moduli)."""
    inv = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)
