"""Integer arithmetic: primality, factorization and the classical
multiplicative functions, plus a sieved table of them for bulk use."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import Unfactorable

TRIAL_LIMIT = 10**6
RHO_LIMIT = 1 << 64

# Deterministic for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


_TRIAL_PRIMES: list[int] | None = None


def _trial_primes() -> list[int]:
    global _TRIAL_PRIMES
    if _TRIAL_PRIMES is None:
        _TRIAL_PRIMES = small_primes(TRIAL_LIMIT).tolist()
    return _TRIAL_PRIMES


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def _brent(n: int, rng: random.Random) -> int:
    # Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent(n, rng)
    _split(d, out, rng)
    _split(n // d, out, rng)


def factorint(n: int) -> dict[int, int]:
    """Factor a positive integer.

    Trial division up to 10**6, then Pollard-Brent rho on the cofactor as
    long as it fits in 64 bits.  Larger composite cofactors raise
    :class:`Unfactorable` instead of returning a wrong answer.
    """
    if n < 1:
        raise ValueError(f"factorint needs a positive integer, got {n}")
    out: dict[int, int] = {}
    for p in _trial_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n == 1:
        return out
    if n < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(n):
        out[n] = out.get(n, 0) + 1
        return out
    if n >= RHO_LIMIT:
        raise Unfactorable(f"composite cofactor {n} exceeds 64 bits")
    _split(n, out, random.Random(n))
    return dict(sorted(out.items()))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n))


def euler_phi(n: int) -> int:
    result = n
    for p in factorint(n):
        result -= result // p
    return result


def jordan_totient(t: int, k: int) -> int:
    """J_t(k) = k^t * prod over primes l | k of (1 - l^-t)."""
    result = k**t
    for p in factorint(k):
        result = result // p**t * (p**t - 1)
    return result


def radical(n: int) -> int:
    return reduce(lambda a, b: a * b, factorint(n), 1)


def omega(n: int) -> int:
    return len(factorint(n))


def moebius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisor_sigma(t: int, n: int) -> int:
    result = 1
    for p, e in factorint(n).items():
        result *= sum(p ** (t * j) for j in range(e + 1))
    return result


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def squarefree_divisors(primes: list[int]) -> list[int]:
    """All products of subsets of ``primes``, starting with 1."""
    divs = [1]
    for p in primes:
        divs += [d * p for d in divs]
    return divs


@dataclass(frozen=True)
class ArithmeticTable:
    """Sieved smallest prime factor, mu, phi, omega and rad for n <= size.

    Index 0 is a placeholder; all arrays are int64.
    """

    size: int
    spf: np.ndarray
    mu: np.ndarray
    phi: np.ndarray
    omega: np.ndarray
    rad: np.ndarray

    @classmethod
    def build(cls, size: int) -> ArithmeticTable:
        n = size + 1
        spf = np.zeros(n, dtype=np.int64)
        for p in small_primes(math.isqrt(size)).tolist():
            block = spf[p * p :: p]
            block[block == 0] = p
        idx = np.arange(n, dtype=np.int64)
        unset = spf == 0
        spf[unset] = idx[unset]

        mu = np.ones(n, dtype=np.int64)
        phi = idx.copy()
        om = np.zeros(n, dtype=np.int64)
        rad = np.ones(n, dtype=np.int64)
        for p in small_primes(size).tolist():
            mult = slice(p, n, p)
            mu[mult] *= -1
            phi[mult] -= phi[mult] // p
            om[mult] += 1
            rad[mult] *= p
            if p * p < n:
                mu[p * p :: p * p] = 0
        mu[0] = phi[0] = rad[0] = 0
        return cls(size, spf, mu, phi, om, rad)

    def factor(self, n: int) -> dict[int, int]:
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out
