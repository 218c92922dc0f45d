"""High-precision evaluation of the universal Euler products C_{r,t}.

    C_{r,t} = prod_p (1 - h(1/p)),
    h(x) = x^(r+1) (1 - x^t) / ((1 - x) (1 - x^(r+t+1)))

which at t = 1 is prod_p (1 - p / (p^(r+2) - 1)).  A direct product converges
like P^-r, so only primes p <= P are multiplied out; the logarithm of the
tail is expanded as sum_k a_k * sum_{p > P} p^-k with exact rational a_k, and
the prime sums come from the prime zeta function

    P(s) = sum_m mu(m)/m * log zeta(m s).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from .arith import moebius, small_primes
from .errors import DomainError, PrecisionUnreachable

DIRECT_LIMIT = 1000
MAX_DIGITS = 60
GUARD_DIGITS = 15


def _h_coefficients(r: int, t: int, order: int) -> list[int]:
    """Power-series coefficients of h(x) up to x^order (inclusive)."""
    period = r + t + 1
    coeffs = [0] * (order + 1)
    # (1 - x^t)/(1 - x) = 1 + x + ... + x^(t-1)
    for j in range(0, order + 1, period):
        for i in range(t):
            k = r + 1 + j + i
            if k <= order:
                coeffs[k] += 1
    return coeffs


@lru_cache(maxsize=64)
def log_series(r: int, t: int, order: int) -> tuple[Fraction, ...]:
    """Exact coefficients a_k of log(1 - h(x)) = sum_k a_k x^k, k <= order."""
    g = [-c for c in _h_coefficients(r, t, order)]
    g[0] = 1
    logc = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        acc = Fraction(k * g[k])
        for j in range(1, k):
            if g[k - j]:
                acc -= j * logc[j] * g[k - j]
        logc[k] = acc / k
    return tuple(logc)


def local_factor(p, r: int, t: int):
    """1 - (p^t - 1) p / ((p - 1)(p^(r+t+1) - 1)) as an exact Fraction."""
    return 1 - Fraction((p**t - 1) * p, (p - 1) * (p ** (r + t + 1) - 1))


def prime_zeta(s: int, dps: int):
    """sum over all primes of p^-s, s >= 2, at ``dps`` digits."""
    with mpmath.workdps(dps + 5):
        total = mpmath.mpf(0)
        eps = mpmath.mpf(10) ** (-dps - 5)
        m = 1
        while True:
            term = mpmath.log(mpmath.zeta(m * s))
            if term < eps:
                break
            mu = moebius(m)
            if mu:
                total += mu * term / m
            m += 1
        return +total


def universal_constant(r: int, t: int = 1, digits: int = 38):
    """C_{r,t} with absolute error below 10**-digits (returned as mpf)."""
    if r < 1 or t < 1:
        raise ValueError("r and t must be positive integers")
    if digits > MAX_DIGITS:
        raise PrecisionUnreachable(f"{digits} digits requested; at most {MAX_DIGITS} supported")
    dps = digits + GUARD_DIGITS
    primes = small_primes(DIRECT_LIMIT).tolist()
    target = Fraction(1, 10 ** (digits + 5))

    # order N: the omitted terms a_k P^(1-k)/(k-1) must be negligible.  The
    # series is sparse, so look at a full period of coefficients, not one.
    period = r + t + 1
    order = 2 * period + r
    while True:
        a = log_series(r, t, order)
        if all(abs(a[k]) * Fraction(DIRECT_LIMIT) ** (1 - k) / (k - 1) < target for k in range(order - period, order + 1)):
            break
        order += period
    coeffs = log_series(r, t, order)

    with mpmath.workdps(dps):
        factors = (local_factor(p, r, t) for p in primes)
        log_c = mpmath.fsum(mpmath.log(mpmath.mpf(f.numerator) / f.denominator) for f in factors)
        tail_terms = []
        for k in range(r + 1, len(coeffs)):
            if coeffs[k] == 0:
                continue
            head = mpmath.fsum(mpmath.mpf(p) ** (-k) for p in primes)
            tail = prime_zeta(k, dps) - head
            ak = mpmath.mpf(coeffs[k].numerator) / coeffs[k].denominator
            tail_terms.append(ak * tail)
        log_c += mpmath.fsum(tail_terms)
        return +mpmath.exp(log_c)


def log_integral(x):
    """li(x) = integral from 2 to x of dt / log t."""
    x = mpmath.mpf(x)
    if x < 2:
        raise DomainError(f"li is only used for x >= 2, got {x}")
    if x == 2:
        return mpmath.mpf(0)
    return mpmath.li(x, offset=True)


def format_fixed(x, places: int) -> str:
    """Round ``x`` to ``places`` decimals and render without exponent."""
    with mpmath.workdps(places + 20):
        scaled = int(mpmath.nint(mpmath.mpf(x) * mpmath.mpf(10) ** places))
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"
