"""Oracle-equivalence suites behind ``avgorder selfcheck``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

import mpmath

from . import oracles
from .arith import ArithmeticTable
from .density import DensityEngine
from .kummer import KummerDegree
from .smith import det, matmul
from .subgroup import subgroup
from .sweep import brute_force_group_order, group_order_mod_p
from .twoadic import TwoAdicStructure


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


def check_snf(rng: random.Random, trials: int = 200) -> str | None:
    for _ in range(trials):
        a, r = oracles.random_full_rank_matrix(rng)
        pres = oracles.presentation_from_matrix(a, r)
        if list(pres.deltas) != oracles.deltas_by_minors(pres):
            return f"Delta mismatch for {a}: {pres.deltas}"
        u, d, v = pres.smith
        if matmul(matmul(u, [list(x) for x in pres.basis_matrix]), v) != d or abs(det(u)) != 1 or abs(det(v)) != 1:
            return f"U A V != D for {a}"
    return None


def check_coset(rng: random.Random, trials: int = 100) -> str | None:
    for _ in range(trials):
        pres = oracles.random_presentation(rng, 4, 3, 4)
        two = TwoAdicStructure(pres)
        images = {v: oracles.lattice_image_mod(pres, 2**v) for v in range(1, 6)}
        for d in two.descriptors:
            vec = d.valuation_vector
            for v in range(1, 6):
                if two.coset_member(vec, v) != oracles.coset_member_by_enumeration(pres, vec, v, images[v]):
                    return f"coset mismatch {pres.describe()} eta={d.eta} v={v}"
            if d.depth != oracles.depth_by_scan(two, d.eta):
                return f"depth mismatch {pres.describe()} eta={d.eta}"
    return None


def check_group_order(limit: int = 2000) -> str | None:
    primes = oracles.primes_below(limit)
    for g in oracles.corpus():
        pres = subgroup(g)
        for p in primes:
            if group_order_mod_p(pres, p) != brute_force_group_order(pres, p):
                return f"|Gamma_p| mismatch for <{g}> at p={p}"
    return None


def check_tilde_closure(max_k: int = 512) -> str | None:
    for g in oracles.corpus():
        two = TwoAdicStructure(subgroup(g))
        for k in range(1, max_k + 1):
            etas = two.tilde_gamma_set(k)
            if not oracles.closed_under_product(etas):
                return f"Gamma~({k}) not closed for <{g}>: {etas}"
    return None


def check_degrees(max_k: int = 5000) -> str | None:
    table = ArithmeticTable.build(max_k)
    for g in oracles.corpus():
        pres = subgroup(g)
        kd = KummerDegree(pres)
        r, dr = pres.rank, pres.delta_r
        for k in range(1, max_k + 1):
            phi = int(table.phi[k])
            rel = kd.relative_degree(k)
            if not (k**r <= dr * 2**r * rel and rel <= 2 * k**r):
                return f"degree bound violated for <{g}> at k={k}"
            if (phi * k**r) % kd.degree(k, phi):
                return f"degree does not divide phi(k) k^r for <{g}> at k={k}"
    return None


def check_methods(K: int = 20000) -> str | None:
    table = ArithmeticTable.build(K)
    for g in ("2,3", "4,27", "3/2,5"):
        eng = DensityEngine(subgroup(g))
        ser = eng.density_series(1, K, table)
        eul = eng.density_euler(1, 30)
        if abs(ser.value - eul.value) > ser.error_estimate:
            return f"series/euler gap {mpmath.nstr(ser.value - eul.value, 3)} for <{g}>"
    for g in ("2", "3,5", "5,13,17"):
        eng = DensityEngine(subgroup(g))
        if abs(eng.density_prime_generators(30).value - eng.density_euler(1, 30).value) > mpmath.mpf(10) ** -20:
            return f"closed form disagrees for <{g}>"
    return None


SUITES: dict[str, Callable[[random.Random], str | None]] = {
    "snf-vs-minors": lambda rng: check_snf(rng),
    "coset-oracle": lambda rng: check_coset(rng),
    "group-order-oracle": lambda rng: check_group_order(),
    "method-agreement": lambda rng: check_methods(),
    "tilde-closure": lambda rng: check_tilde_closure(),
    "degree-bounds": lambda rng: check_degrees(),
}


def run_selfcheck(seed: int = 20240501) -> list[SuiteResult]:
    results = []
    for name, suite in SUITES.items():
        problem = suite(random.Random(seed))
        results.append(SuiteResult(name, problem is None, problem or "ok"))
    return results
