"""2-adic entanglement data of a subgroup of Q+.

For a square-free divisor eta of sigma_Gamma we need to know from which
level on eta^(2^(v-1)) becomes a member of Gamma modulo 2^v-th powers.  The
question is a linear congruence on exponent vectors and is answered
exactly from the Smith data of the presentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .arith import squarefree_divisors, valuation
from .errors import DimensionMismatch, NotDivisor, NotSquareFree
from .subgroup import SubgroupPresentation

INF = math.inf


def field_discriminant(eta: int) -> int:
    """Discriminant of Q(sqrt(eta)) for square-free eta > 0."""
    if eta < 1:
        raise NotSquareFree(f"{eta} is not a positive square-free integer")
    d = 2
    while d * d <= eta:
        if eta % (d * d) == 0:
            raise NotSquareFree(f"{eta} is divisible by {d}^2")
        d += 1
    return eta if eta % 4 == 1 else 4 * eta


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class EtaDescriptor:
    eta: int
    valuation_vector: tuple[int, ...]
    discriminant: int
    depth: int | float
    cutoff: int | float


class TwoAdicStructure:
    """Entanglement data of one presentation.  Pure and read-only."""

    def __init__(self, pres: SubgroupPresentation):
        self.pres = pres
        self._u = pres.smith[0]
        self._d2 = [valuation(d, 2) for d in pres.elementary_divisors]

    def eta_vector(self, eta: int) -> tuple[int, ...]:
        if eta < 1 or self.pres.sigma % eta:
            raise NotDivisor(f"{eta} does not divide sigma = {self.pres.sigma}")
        return tuple(int(eta % p == 0) for p in self.pres.support)

    def _transformed(self, eta_vec) -> list[int]:
        s = len(self.pres.support)
        if len(eta_vec) != s:
            raise DimensionMismatch(f"vector of length {len(eta_vec)} for support of size {s}")
        return [sum(self._u[i][j] * eta_vec[j] for j in range(s)) for i in range(s)]

    def coset_member(self, eta_vec, v: int) -> bool:
        """Is eta^(2^(v-1)) in Gamma * Q*^(2^v)?

        Solvability of A c = 2^(v-1) e_eta (mod 2^v); rows past the rank
        must be even after the left Smith transform, and odd rows within
        the rank need v_2(d_i) <= v - 1.
        """
        if v < 1:
            raise ValueError("v must be at least 1")
        f = self._transformed(eta_vec)
        r = self.pres.rank
        if any(x % 2 for x in f[r:]):
            return False
        return all(self._d2[i] <= v - 1 for i in range(r) if f[i] % 2)

    def depth(self, eta: int) -> int | float:
        """t_eta: least t >= 0 with coset_member(e_eta, t + 1), or INF."""
        f = self._transformed(self.eta_vector(eta))
        r = self.pres.rank
        if any(x % 2 for x in f[r:]):
            return INF
        return max((self._d2[i] for i in range(r) if f[i] % 2), default=0)

    def cutoff(self, eta: int) -> int | float:
        """gamma_eta = max(1 + t_eta, v_2(delta(eta)))."""
        t = self.depth(eta)
        if t == INF:
            return INF
        return max(1 + t, _v2(field_discriminant(eta)))

    def descriptor(self, eta: int) -> EtaDescriptor:
        return EtaDescriptor(
            eta=eta,
            valuation_vector=self.eta_vector(eta),
            discriminant=field_discriminant(eta),
            depth=self.depth(eta),
            cutoff=self.cutoff(eta),
        )

    @cached_property
    def descriptors(self) -> tuple[EtaDescriptor, ...]:
        """All square-free divisors of sigma, eta = 1 first."""
        return tuple(self.descriptor(e) for e in squarefree_divisors(list(self.pres.support)))

    def tilde_gamma_set(self, k: int) -> list[int]:
        if k < 1:
            raise ValueError("k must be positive")
        if k % 2:
            return [1]
        v = _v2(k)
        return [d.eta for d in self.descriptors if d.depth <= v - 1 and k % d.discriminant == 0]

    def tilde_gamma_order(self, k: int) -> int:
        return len(self.tilde_gamma_set(k))


def squarefree_product(a: int, b: int) -> int:
    g = math.gcd(a, b)
    return a * b // (g * g)
