from fractions import Fraction

import mpmath
import pytest

from avgorder import constants
from avgorder.constants import format_fixed, log_integral, log_series, prime_zeta, universal_constant
from avgorder.errors import DomainError, PrecisionUnreachable

# first rows of the published table of C_r
TABLE = {
    1: "0.57595996889294543964316337549249669251",
    5: "0.98282912014687261524345691713313004185",
    10: "0.99950593624928276115384423618416539651",
}


@pytest.mark.parametrize("r", sorted(TABLE))
def test_universal_constant_table(r):
    with mpmath.workdps(50):
        value = universal_constant(r, 1, 38)
        assert abs(value - mpmath.mpf(TABLE[r])) < mpmath.mpf(10) ** -30


def test_universal_constant_independent_route():
    # direct product over p <= 50 plus mpmath's own prime zeta for the tail
    with mpmath.workdps(60):
        for r, t in [(1, 1), (2, 1), (3, 2)]:
            primes = [p for p in range(2, 51) if all(p % q for q in range(2, p))]
            log_c = sum(mpmath.log(mpmath.mpf(constants.local_factor(p, r, t).numerator) / constants.local_factor(p, r, t).denominator) for p in primes)
            for k, a in enumerate(log_series(r, t, 140)):
                if k >= 2 and a:
                    tail = mpmath.primezeta(k) - sum(mpmath.mpf(p) ** -k for p in primes)
                    log_c += mpmath.mpf(a.numerator) / a.denominator * tail
            assert abs(mpmath.exp(log_c) - universal_constant(r, t, 45)) < mpmath.mpf(10) ** -44


def test_log_series_matches_function():
    r, t = 2, 3
    a = log_series(r, t, 80)
    with mpmath.workdps(50):
        x = mpmath.mpf("0.05")
        h = x ** (r + 1) * (1 - x**t) / ((1 - x) * (1 - x ** (r + t + 1)))
        series = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * x**k for k, c in enumerate(a))
        assert abs(series - mpmath.log(1 - h)) < mpmath.mpf(10) ** -45


def test_local_factor_generic_t1():
    assert constants.local_factor(5, 2, 1) == 1 - Fraction(5, 624)


def test_prime_zeta_against_mpmath():
    with mpmath.workdps(40):
        for s in (2, 3, 7):
            assert abs(prime_zeta(s, 40) - mpmath.primezeta(s)) < mpmath.mpf(10) ** -38


def test_increasing_in_rank():
    values = [universal_constant(r, 1, 30) for r in range(1, 11)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(0 < v < 1 for v in values)


def test_higher_t_against_direct_product():
    # direct product to 2e5 with the rest bounded by sum_{p > P} p^-(r+1)
    r, t = 2, 2
    primes = [int(p) for p in __import__("avgorder.arith", fromlist=["x"]).small_primes(200000)]
    with mpmath.workdps(30):
        direct = mpmath.fsum(mpmath.log(1 - mpmath.mpf((p**t - 1) * p) / ((p - 1) * (p ** (r + t + 1) - 1))) for p in primes)
        assert abs(mpmath.exp(direct) - universal_constant(r, t, 30)) < 1e-9


def test_precision_cap():
    with pytest.raises(PrecisionUnreachable):
        universal_constant(1, 1, 61)


def test_log_integral():
    assert log_integral(2) == 0
    with mpmath.workdps(30):
        quad = mpmath.quad(lambda u: 1 / mpmath.log(u), [2, 10, 1000, 10**6])
    assert abs(log_integral(10**6) - quad) < 1e-9 * quad
    assert abs(log_integral(10**6) - mpmath.mpf("78626.503996")) < 1e-5
    gaps = [log_integral(x) - x / mpmath.log(x) for x in (10, 100, 10**3, 10**5, 10**8)]
    assert all(g > 0 for g in gaps) and gaps == sorted(gaps)
    with pytest.raises(DomainError):
        log_integral(1.5)


def test_format_fixed():
    assert format_fixed(mpmath.mpf("0.575959968892945"), 5) == "0.57596"
    assert format_fixed(mpmath.mpf("0.0001234"), 3) == "0.000"
    assert format_fixed(mpmath.mpf("1.5"), 0) == "2"
