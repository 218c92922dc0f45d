"""Empirical sums of |Gamma_p|^t over primes p <= X.

The sweep walks [2, X] in segments.  Each segment is sieved with numpy, the
numbers p - 1 are factored by trial division against the base primes up to
sqrt(X), and the order of every basis generator modulo every prime of the
segment is found with vectorized modular exponentiation.  |Gamma_p| is the
lcm of these orders since (Z/pZ)* is cyclic.

All accumulators are Python ints; a segment's contribution does not depend
on how the range was cut or how many workers ran, so results are exact and
reproducible.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

import numpy as np

from .arith import factorint, lcm, small_primes
from .errors import LimitTooLarge, SegmentTooLarge, ZeroResidue
from .subgroup import SubgroupPresentation

MAX_LIMIT = 10**10
MAX_SEGMENT = 1 << 24
DEFAULT_SEGMENT = 1 << 20
# products of two residues must fit in int64
VECTOR_MODULUS_LIMIT = 3_000_000_000


@dataclass(frozen=True)
class Checkpoint:
    x: int
    prime_count: int
    sum_orders_t: int
    sum_p_t: int

    def shifted(self, count: int, orders: int, ps: int) -> Checkpoint:
        return Checkpoint(self.x, self.prime_count + count, self.sum_orders_t + orders, self.sum_p_t + ps)


@dataclass
class SweepLedger:
    """Accumulated sums over the primes of [start, limit_reached].

    Checkpoint values are cumulative from ``start``.  Ledgers of adjacent
    ranges merge in either argument order.
    """

    t: int = 1
    start: int = 2
    limit_reached: int = 1
    prime_count: int = 0
    sum_orders_t: int = 0
    sum_p_t: int = 0
    checkpoints: list[Checkpoint] = field(default_factory=list)

    def merge(self, other: SweepLedger) -> SweepLedger:
        if self.t != other.t:
            raise ValueError("cannot merge ledgers with different t")
        if self.empty:
            return other
        if other.empty:
            return self
        lo, hi = sorted((self, other), key=lambda led: led.start)
        if lo.limit_reached + 1 != hi.start:
            raise ValueError(f"ranges [{lo.start}, {lo.limit_reached}] and [{hi.start}, {hi.limit_reached}] are not adjacent")
        shift = (lo.prime_count, lo.sum_orders_t, lo.sum_p_t)
        return SweepLedger(
            t=self.t,
            start=lo.start,
            limit_reached=hi.limit_reached,
            prime_count=lo.prime_count + hi.prime_count,
            sum_orders_t=lo.sum_orders_t + hi.sum_orders_t,
            sum_p_t=lo.sum_p_t + hi.sum_p_t,
            checkpoints=lo.checkpoints + [c.shifted(*shift) for c in hi.checkpoints],
        )

    @property
    def empty(self) -> bool:
        return self.limit_reached < self.start

    @property
    def ratio(self) -> Fraction:
        """A_Gamma = sum |Gamma_p|^t / sum p^t."""
        return Fraction(self.sum_orders_t, self.sum_p_t)


# -- scalar routines -------------------------------------------------------


def primes_in_segment(lo: int, hi: int, base_primes: np.ndarray | None = None, max_segment: int = MAX_SEGMENT) -> np.ndarray:
    """Primes in [lo, hi] as an int64 array."""
    if lo < 2:
        lo = 2
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    if hi - lo > max_segment:
        raise SegmentTooLarge(f"segment [{lo}, {hi}] longer than {max_segment}")
    root = math.isqrt(hi)
    if base_primes is None:
        base_primes = small_primes(root)
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in base_primes.tolist():
        if p > root:
            break
        first = max(p * p, -(-lo // p) * p)
        if first <= hi:
            flags[first - lo :: p] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


def factor_pminus1(p: int, base_primes: Iterable[int] | None = None) -> list[tuple[int, int]]:
    """Factorization of p - 1 by trial division; the leftover cofactor is prime."""
    n = p - 1
    if base_primes is None:
        base_primes = small_primes(math.isqrt(n) + 1).tolist()
    out = []
    for ell in base_primes:
        if ell * ell > n:
            break
        if n % ell == 0:
            e = 0
            while n % ell == 0:
                n //= ell
                e += 1
            out.append((ell, e))
    if n > 1:
        out.append((n, 1))
    return out


def reduce_mod(value: Fraction, p: int) -> int:
    """numerator * denominator^-1 mod p."""
    value = Fraction(value)
    if value.denominator % p == 0:
        raise ZeroResidue(f"{p} divides the denominator of {value}")
    g = value.numerator * pow(value.denominator, -1, p) % p
    if g == 0:
        raise ZeroResidue(f"{value} vanishes mod {p}")
    return g


def element_order(g: int, p: int, pm1_factors: list[tuple[int, int]] | None = None) -> int:
    """Multiplicative order of g modulo the prime p."""
    g %= p
    if g == 0:
        raise ZeroResidue(f"0 has no multiplicative order mod {p}")
    if pm1_factors is None:
        pm1_factors = factor_pminus1(p)
    e = p - 1
    for ell, mult in pm1_factors:
        for _ in range(mult):
            if pow(g, e // ell, p) != 1:
                break
            e //= ell
    return e


def group_order_mod_p(pres: SubgroupPresentation, p: int, pm1_factors=None) -> int:
    """|Gamma_p|; 1 when p is in the support."""
    if p in pres.support or p == 2:
        return 1
    if pm1_factors is None:
        pm1_factors = factor_pminus1(p)
    return lcm(*(element_order(reduce_mod(b, p), p, pm1_factors) for b in pres.basis))


def brute_force_group_order(pres: SubgroupPresentation, p: int) -> int:
    """|Gamma_p| by closing the generator residues under multiplication."""
    if p in pres.support:
        return 1
    gens = [reduce_mod(g.value, p) for g in pres.generators]
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % p
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


# -- vectorized segment kernel ----------------------------------------------


def powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base^exp mod mod for int64 arrays with mod < 3e9."""
    result = np.ones_like(mod)
    base = base % mod
    exp = exp.copy()
    while True:
        odd = (exp & 1).astype(bool)
        if odd.any():
            result[odd] = result[odd] * base[odd] % mod[odd]
        exp >>= 1
        if not exp.any():
            return result
        base = base * base % mod


@dataclass(frozen=True)
class _Context:
    support: tuple[int, ...]
    # per basis element: ((prime, exponent), ...)
    basis_exponents: tuple[tuple[tuple[int, int], ...], ...]
    basis_values: tuple[Fraction, ...]
    base_primes: np.ndarray
    t: int


def _context(pres: SubgroupPresentation, limit: int, t: int) -> _Context:
    cols = []
    for j in range(pres.rank):
        cols.append(tuple((p, pres.basis_matrix[i][j]) for i, p in enumerate(pres.support) if pres.basis_matrix[i][j]))
    return _Context(pres.support, tuple(cols), pres.basis, small_primes(math.isqrt(limit) + 1), t)


def _residues(ctx: _Context, idx: int, mods: np.ndarray) -> np.ndarray:
    num = np.ones_like(mods)
    den = np.ones_like(mods)
    for q, e in ctx.basis_exponents[idx]:
        term = powmod(np.full_like(mods, q), np.full_like(mods, abs(e)), mods)
        if e > 0:
            num = num * term % mods
        else:
            den = den * term % mods
    return num * powmod(den, mods - 2, mods) % mods


def _factor_records(n: np.ndarray, base_primes: np.ndarray):
    """Trial-divide every entry of n; returns (positions, prime(s), multiplicity) records."""
    rem = n.copy()
    records = []
    for ell in base_primes.tolist():
        if ell * ell > int(rem.max(initial=1)):
            break
        sel = np.flatnonzero(rem % ell == 0)
        if sel.size == 0:
            continue
        mult = np.zeros(sel.size, dtype=np.int64)
        sub = rem[sel]
        div = np.ones(sel.size, dtype=bool)
        while div.any():
            sub[div] //= ell
            mult[div] += 1
            div = sub % ell == 0
        rem[sel] = sub
        records.append((sel, np.full(sel.size, ell, dtype=np.int64), mult))
    big = np.flatnonzero(rem > 1)
    if big.size:
        records.append((big, rem[big], np.ones(big.size, dtype=np.int64)))
    return records


def _orders_vector(ctx: _Context, primes: np.ndarray) -> np.ndarray:
    orders = np.ones_like(primes)
    live = np.flatnonzero((primes > 2) & ~np.isin(primes, np.array(ctx.support, dtype=np.int64)))
    if live.size == 0:
        return orders
    mods = primes[live]
    records = _factor_records(mods - 1, ctx.base_primes)
    group = np.ones_like(mods)
    for j in range(len(ctx.basis_exponents)):
        g = _residues(ctx, j, mods)
        e = mods - 1
        for sel, ells, mult in records:
            step = 0
            while sel.size:
                keep = mult > step
                sel, ells, mult = sel[keep], ells[keep], mult[keep]
                if not sel.size:
                    break
                hit = powmod(g[sel], e[sel] // ells, mods[sel]) == 1
                sel, ells, mult = sel[hit], ells[hit], mult[hit]
                e[sel] //= ells
                step += 1
        group = np.lcm(group, e)
    orders[live] = group
    return orders


def _orders_scalar(ctx: _Context, primes: np.ndarray) -> np.ndarray:
    out = []
    for p in primes.tolist():
        if p == 2 or p in ctx.support:
            out.append(1)
            continue
        fac = factor_pminus1(p, ctx.base_primes.tolist())
        out.append(lcm(*(element_order(reduce_mod(b, p), p, fac) for b in ctx.basis_values)))
    return np.array(out, dtype=object)


def _power_sum(values: list[int], t: int) -> int:
    if t == 1:
        return sum(values)
    return sum(v**t for v in values)


def segment_orders(ctx: _Context, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    primes = primes_in_segment(lo, hi, ctx.base_primes)
    if hi < VECTOR_MODULUS_LIMIT:
        return primes, _orders_vector(ctx, primes)
    return primes, _orders_scalar(ctx, primes)


def _sweep_segment(args) -> SweepLedger:
    ctx, lo, hi, marks = args
    primes, orders = segment_orders(ctx, lo, hi)
    plist = primes.tolist()
    olist = orders.tolist()
    ledger = SweepLedger(t=ctx.t, start=lo, limit_reached=hi)
    pos = 0
    orders_acc = ps_acc = 0
    for x in marks:
        cut = int(np.searchsorted(primes, x, side="right"))
        orders_acc += _power_sum(olist[pos:cut], ctx.t)
        ps_acc += _power_sum(plist[pos:cut], ctx.t)
        pos = cut
        ledger.checkpoints.append(Checkpoint(x, cut, orders_acc, ps_acc))
    ledger.prime_count = len(plist)
    ledger.sum_orders_t = orders_acc + _power_sum(olist[pos:], ctx.t)
    ledger.sum_p_t = ps_acc + _power_sum(plist[pos:], ctx.t)
    return ledger


def default_schedule(limit: int) -> list[int]:
    marks = []
    x = 10
    while x < limit:
        marks.append(x)
        x *= 10
    marks.append(limit)
    return marks


def _segments(limit: int, segment: int) -> Iterator[tuple[int, int]]:
    lo = 2
    while lo <= limit:
        hi = min(limit, lo + segment - 1)
        yield lo, hi
        lo = hi + 1


def sweep(
    pres: SubgroupPresentation,
    t: int,
    limit: int,
    checkpoints: list[int] | None = None,
    workers: int = 1,
    segment: int = DEFAULT_SEGMENT,
    on_checkpoint: Callable[[Checkpoint], None] | None = None,
) -> SweepLedger:
    """Sum |Gamma_p|^t and p^t over primes p <= limit."""
    if limit > MAX_LIMIT:
        raise LimitTooLarge(f"limit {limit} exceeds the cap {MAX_LIMIT}")
    if t < 1:
        raise ValueError("t must be a positive integer")
    if limit < 2:
        return SweepLedger(t=t)
    if segment > MAX_SEGMENT:
        raise SegmentTooLarge(f"segment length {segment} exceeds {MAX_SEGMENT}")
    marks = sorted({x for x in (checkpoints or default_schedule(limit)) if 2 <= x <= limit})
    ctx = _context(pres, limit, t)
    tasks = [(ctx, lo, hi, [x for x in marks if lo <= x <= hi]) for lo, hi in _segments(limit, segment)]

    total = SweepLedger(t=t)
    emitted = 0

    def absorb(part: SweepLedger) -> None:
        nonlocal total, emitted
        total = total.merge(part)
        if on_checkpoint:
            for c in total.checkpoints[emitted:]:
                on_checkpoint(c)
        emitted = len(total.checkpoints)

    if workers <= 1 or len(tasks) == 1:
        for task in tasks:
            absorb(_sweep_segment(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_sweep_segment, tasks):
                absorb(part)
    return total
