"""The density constants C_{Gamma,t} for Gamma inside Q+.

Three routes are offered:

* ``density_euler``: exact rational multiplier q times the universal
  product C_{r,t}; this is the authoritative value.
* ``density_series``: the defining series truncated at k <= K, with Kummer
  degrees computed arithmetically.  Used as a cross-check.
* ``density_prime_generators``: the closed form for groups generated by
  distinct primes at t = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .arith import ArithmeticTable, factorint, valuation
from .constants import universal_constant
from .errors import AvgOrderError, NotPrimeGenerators
from .kummer import KummerDegree
from .subgroup import SubgroupPresentation
from .twoadic import INF, EtaDescriptor, TwoAdicStructure


@dataclass(frozen=True)
class LocalSum:
    """P_p = sum_{a >= 1} (p^t - 1) / (p^(a(t+1)-1) |Gamma(p^a)| (p - 1))."""

    p: int
    t: int
    value: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.value < 1:
            raise AvgOrderError(f"local sum at p={self.p} is {self.value}, outside (0, 1)")


@dataclass
class DensityResult:
    value: mpmath.mpf
    method: str
    exact_multiplier: Fraction | None = None
    truncation: dict = field(default_factory=dict)
    error_estimate: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(0))


def generic_local_sum(p: int, r: int, t: int) -> Fraction:
    """P_p when p does not divide Delta_r: (p^t-1) p / ((p-1)(p^(r+t+1)-1))."""
    return Fraction((p**t - 1) * p, (p - 1) * (p ** (r + t + 1) - 1))


class DensityEngine:
    def __init__(self, pres: SubgroupPresentation):
        self.pres = pres
        self.two_adic = TwoAdicStructure(pres)
        self.kummer = KummerDegree(pres, self.two_adic)

    # -- local sums ---------------------------------------------------

    def local_sum_from(self, p: int, t: int, start: int) -> Fraction:
        """sum_{a >= start} (p^t-1) / (p^(a(t+1)-1) |Gamma(p^a)| (p-1)).

        Terms below max(start, k_p) are summed directly; beyond k_p the
        group order is p^(r a - v_p(Delta_r)) and the rest is geometric.
        """
        r = self.pres.rank
        period = r + t + 1
        v = valuation(self.pres.delta_r, p)
        m = max(start, 1, self.pres.stabilization_exponent(p))
        unit = Fraction(p**t - 1, p - 1)
        total = Fraction(0)
        for a in range(max(start, 1), m):
            total += unit / (Fraction(p) ** (a * (t + 1) - 1) * self.pres.local_order(p, a))
        total += unit * Fraction(p) ** (v + 1 + (1 - m) * period) / (p**period - 1)
        return total

    def local_sum(self, p: int, t: int = 1) -> Fraction:
        return LocalSum(p, t, self.local_sum_from(p, t, 1)).value

    # -- Euler product ------------------------------------------------

    def eta_descriptors(self) -> tuple[EtaDescriptor, ...]:
        return self.two_adic.descriptors

    def s_eta(self, eta: EtaDescriptor, t: int = 1) -> Fraction:
        """Share of the 2-adic local sum from alpha >= gamma_eta on."""
        if eta.cutoff == INF:
            return Fraction(0)
        return self.local_sum_from(2, t, int(eta.cutoff)) / self.local_sum_from(2, t, 1)

    def correction_factor(self, p: int, t: int = 1) -> Fraction:
        """(1 - P_p^-1)^-1 = P_p / (P_p - 1); negative."""
        pp = self.local_sum(p, t)
        return pp / (pp - 1)

    def correction_sum(self, t: int = 1) -> Fraction:
        total = Fraction(1)
        for d in self.eta_descriptors():
            if d.eta == 1:
                continue
            s = self.s_eta(d, t)
            if s == 0:
                continue
            term = s
            for ell in factorint(2 * d.eta):
                term *= self.correction_factor(ell, t)
            total += term
        return total

    def rational_multiplier(self, t: int = 1) -> Fraction:
        """q with C_{Gamma,t} = q * C_{r,t}."""
        r = self.pres.rank
        q = self.correction_sum(t)
        for p in factorint(self.pres.delta_r):
            q *= (1 - self.local_sum(p, t)) / (1 - generic_local_sum(p, r, t))
        if q <= 0:
            raise AvgOrderError(f"non-positive multiplier {q}")
        return q

    def density_euler(self, t: int = 1, digits: int = 38) -> DensityResult:
        q = self.rational_multiplier(t)
        c = universal_constant(self.pres.rank, t, digits)
        with mpmath.workdps(digits + 10):
            value = mpmath.mpf(q.numerator) / q.denominator * c
        return DensityResult(
            value=value,
            method="euler",
            exact_multiplier=q,
            truncation={"digits": digits},
            error_estimate=mpmath.mpf(10) ** (-digits),
        )

    def density_prime_generators(self, digits: int = 38) -> DensityResult:
        """Closed form for Gamma = <p_1, ..., p_r>, distinct primes, t = 1."""
        gens = [g.exponents for g in self.pres.generators]
        primes = sorted({next(iter(e)) for e in gens if len(e) == 1 and next(iter(e.values())) == 1})
        if len(gens) != len(primes) or any(len(e) != 1 or next(iter(e.values())) != 1 for e in gens):
            raise NotPrimeGenerators("closed form needs distinct prime generators")
        r = len(primes)
        bracket = Fraction(1)
        for d in self.eta_descriptors():
            if d.eta == 1:
                continue
            shift = max(0, valuation(d.discriminant, 2) - 1)
            term = Fraction(1, 2 ** (shift * (r + 2)))
            for ell in factorint(2 * d.eta):
                term *= Fraction(ell, ell + 1 - ell ** (r + 2))
            bracket += term
        c = universal_constant(r, 1, digits)
        with mpmath.workdps(digits + 10):
            value = mpmath.mpf(bracket.numerator) / bracket.denominator * c
        return DensityResult(value, "cor3", bracket, {"digits": digits}, mpmath.mpf(10) ** (-digits))

    # -- series -------------------------------------------------------

    def series_term(self, k: int, t: int, table: ArithmeticTable | None = None) -> Fraction:
        if table is not None and k <= table.size:
            phi, rad, om = int(table.phi[k]), int(table.rad[k]), int(table.omega[k])
            jt = k**t
            for ell in table.factor(rad):
                jt = jt // ell**t * (ell**t - 1)
        else:
            f = factorint(k)
            phi = math.prod((p - 1) * p ** (e - 1) for p, e in f.items())
            rad, om = math.prod(f), len(f)
            jt = math.prod(p ** (t * (e - 1)) * (p**t - 1) for p, e in f.items())
        deg = self.kummer.degree(k, phi)
        sign = -1 if om % 2 else 1
        return Fraction(sign * jt * rad**t, k ** (2 * t) * deg)

    def series_tail_bound(self, K: int, dps: int = 30) -> mpmath.mpf:
        """Heuristic bound on sum_{k > K} |term_k|.

        |term_k| <= Delta_r 2^r (k/phi(k)) k^-(r+1) and k/phi(k) <=
        6 log(log k + 2); the sum is bounded by the integral from K.
        """
        r = self.pres.rank
        with mpmath.workdps(dps):
            f = lambda x: 6 * mpmath.log(mpmath.log(x) + 2) * x ** (-(r + 1))
            head = f(mpmath.mpf(K))
            integral = mpmath.quad(f, [K, 10 * K, mpmath.inf])
            return self.pres.delta_r * 2**r * (head + integral)

    def density_series(self, t: int = 1, K: int = 10**5, table: ArithmeticTable | None = None) -> DensityResult:
        if K < 1:
            raise ValueError("series limit must be positive")
        if table is None or table.size < K:
            table = ArithmeticTable.build(K)
        with mpmath.workdps(30):
            terms = []
            for k in range(1, K + 1):
                term = self.series_term(k, t, table)
                terms.append(mpmath.mpf(term.numerator) / term.denominator)
            value = mpmath.fsum(terms)
        return DensityResult(
            value=value,
            method="series",
            truncation={"K": K},
            error_estimate=self.series_tail_bound(K),
        )
