"""Degrees of the Kummer extensions Q(zeta_k, Gamma^(1/k)) over Q."""

from __future__ import annotations

from functools import lru_cache

from .arith import euler_phi
from .errors import NonIntegralDegree
from .subgroup import SubgroupPresentation
from .twoadic import TwoAdicStructure


class KummerDegree:
    """[Q(zeta_k, Gamma^(1/k)) : Q] = phi(k) |Gamma(k)| / |Gamma~(k)| for Gamma in Q+.

    The per-k cache is per instance; build one instance per worker.
    """

    def __init__(self, pres: SubgroupPresentation, two_adic: TwoAdicStructure | None = None):
        self.pres = pres
        self.two_adic = two_adic or TwoAdicStructure(pres)
        self.degree = lru_cache(maxsize=4096)(self._degree)

    def relative_degree(self, k: int) -> int:
        """[Q(zeta_k, Gamma^(1/k)) : Q(zeta_k)]."""
        num = self.pres.group_order_mod_kth_powers(k)
        den = self.two_adic.tilde_gamma_order(k)
        if num % den:
            raise NonIntegralDegree(f"|Gamma~({k})| = {den} does not divide |Gamma({k})| = {num}")
        return num // den

    def _degree(self, k: int, phi: int | None = None) -> int:
        if k < 1:
            raise ValueError("k must be positive")
        if phi is None:
            phi = euler_phi(k)
        num = phi * self.pres.group_order_mod_kth_powers(k)
        den = self.two_adic.tilde_gamma_order(k)
        if num % den:
            raise NonIntegralDegree(f"degree for k={k} is not an integer: {num}/{den}")
        return num // den
