"""Brute-force reference computations used by the self-check and the tests.

These deliberately avoid the Smith-form shortcuts of the main code path.
"""

from __future__ import annotations

import itertools
import random

from . import smith
from .arith import is_prime
from .subgroup import FactoredPositiveRational, SubgroupPresentation, build_presentation
from .twoadic import INF, TwoAdicStructure, squarefree_product

FIRST_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def lattice_image_mod(pres: SubgroupPresentation, m: int) -> set[tuple[int, ...]]:
    """Image of the exponent lattice in (Z/m)^s, by enumerating c in (Z/m)^r."""
    a = pres.basis_matrix
    s, r = len(pres.support), pres.rank
    out = set()
    for c in itertools.product(range(m), repeat=r):
        out.add(tuple(sum(a[i][j] * c[j] for j in range(r)) % m for i in range(s)))
    return out


def group_order_by_enumeration(pres: SubgroupPresentation, m: int) -> int:
    return len(lattice_image_mod(pres, m))


def coset_member_by_enumeration(pres: SubgroupPresentation, eta_vec, v: int, image: set | None = None) -> bool:
    m = 2**v
    if image is None:
        image = lattice_image_mod(pres, m)
    target = tuple(2 ** (v - 1) * x % m for x in eta_vec)
    return target in image


def depth_by_scan(two_adic: TwoAdicStructure, eta: int, cap: int = 12):
    vec = two_adic.eta_vector(eta)
    for t in range(cap + 1):
        if two_adic.coset_member(vec, t + 1):
            return t
    return INF


def deltas_by_minors(pres: SubgroupPresentation) -> list[int]:
    a = [list(row) for row in pres.basis_matrix]
    return [1] + [smith.minor_gcd(a, pres.rank, i) for i in range(1, pres.rank + 1)]


def closed_under_product(etas: list[int]) -> bool:
    pool = set(etas)
    return 1 in pool and all(squarefree_product(a, b) in pool for a in pool for b in pool)


def random_presentation(rng: random.Random, max_support: int = 4, max_rank: int = 3, bound: int = 4) -> SubgroupPresentation:
    """A random subgroup of Q+ given by exponent vectors over the first primes."""
    while True:
        s = rng.randint(1, max_support)
        n = rng.randint(1, max_rank)
        gens = []
        for _ in range(n):
            exps = {p: rng.randint(-bound, bound) for p in FIRST_PRIMES[:s]}
            gens.append(FactoredPositiveRational({p: e for p, e in exps.items() if e}))
        if any(g.exponents for g in gens):
            return build_presentation(gens)


def random_full_rank_matrix(rng: random.Random, max_rows: int = 5, max_cols: int = 4, bound: int = 6):
    while True:
        r = rng.randint(1, max_cols)
        s = rng.randint(r, max(r, max_rows))
        a = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(s)]
        if smith.matrix_rank(a, r) == r:
            return a, r


def presentation_from_matrix(a: list[list[int]], r: int) -> SubgroupPresentation:
    s = len(a)
    gens = []
    for j in range(r):
        gens.append(FactoredPositiveRational({FIRST_PRIMES[i]: a[i][j] for i in range(s) if a[i][j]}))
    return build_presentation(gens)


def primes_below(n: int) -> list[int]:
    return [p for p in range(2, n) if is_prime(p)]


def corpus() -> list[str]:
    """Generator lists exercised by the oracle suites."""
    return ["2", "3", "5", "4", "2,3", "3,5", "5,13", "2,3,5", "4,27", "12,18", "3/2,5", "16,81", "4,9,25", "9/4,7"]
