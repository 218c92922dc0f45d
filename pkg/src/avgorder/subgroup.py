"""Finitely generated subgroups of the positive rationals.

A subgroup is described by the lattice of exponent vectors of its elements
over its support primes.  All quantities the density formulas need (the
invariants Delta_i, |Gamma(m)|, |Gamma(p^a)|) are derived from the Smith
normal form of a lattice basis.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import smith
from .arith import factorint, is_prime, valuation
from .errors import NonPositive, ParseError, SupportTooLarge, TrivialGroup, ZeroGenerator

MAX_SUPPORT = 24

_TOKEN = re.compile(r"^([+-]?\d+)(?:/([+-]?\d+))?$")


@dataclass(frozen=True)
class FactoredPositiveRational:
    """A positive rational stored as {prime: nonzero exponent}; 1 is {}."""

    exponents: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for p, e in self.exponents.items():
            if e == 0 or not is_prime(p):
                raise ValueError(f"bad factorization entry {p}^{e}")

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> FactoredPositiveRational:
        value = Fraction(value)
        if value == 0:
            raise ZeroGenerator("generator 0 is not invertible")
        if value < 0:
            raise NonPositive(f"{value} is not positive; only subgroups of Q+ are supported")
        exps = dict(factorint(value.numerator))
        for p, e in factorint(value.denominator).items():
            exps[p] = -e
        return cls(dict(sorted(exps.items())))

    @property
    def value(self) -> Fraction:
        out = Fraction(1)
        for p, e in self.exponents.items():
            out *= Fraction(p) ** e
        return out

    def valuation(self, p: int) -> int:
        return self.exponents.get(p, 0)

    def __str__(self) -> str:
        return str(self.value)


def parse_generator(text: str) -> FactoredPositiveRational:
    """Parse ``"a"`` or ``"a/b"`` into a factored positive rational."""
    m = _TOKEN.match(text.strip())
    if not m:
        raise ParseError(f"cannot parse generator {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if num == 0 or den == 0:
        raise ZeroGenerator(f"generator {text!r} has a zero numerator or denominator")
    return FactoredPositiveRational.from_fraction(Fraction(num, den))


def parse_generator_list(text: str) -> list[FactoredPositiveRational]:
    tokens = [t for t in text.split(",")]
    if not text.strip() or any(not t.strip() for t in tokens):
        raise ParseError(f"empty token in generator list {text!r}")
    return [parse_generator(t) for t in tokens]


@dataclass(frozen=True)
class SubgroupPresentation:
    """Immutable description of Gamma = <generators> inside Q+.

    ``basis_matrix`` is s x r: column j is the exponent vector of the j-th
    basis element over ``support``.  ``smith`` holds (U, D, V) with
    U * A * V = D.
    """

    generators: tuple[FactoredPositiveRational, ...]
    support: tuple[int, ...]
    basis_matrix: tuple[tuple[int, ...], ...]
    smith: tuple
    deltas: tuple[int, ...]

    @property
    def sigma(self) -> int:
        return math.prod(self.support)

    @property
    def rank(self) -> int:
        return len(self.deltas) - 1

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        d = self.smith[1]
        return tuple(d[i][i] for i in range(self.rank))

    @property
    def delta_r(self) -> int:
        return self.deltas[-1]

    @cached_property
    def basis(self) -> tuple[Fraction, ...]:
        """The basis elements a_1..a_r as rationals."""
        out = []
        for j in range(self.rank):
            v = Fraction(1)
            for i, p in enumerate(self.support):
                v *= Fraction(p) ** self.basis_matrix[i][j]
            out.append(v)
        return tuple(out)

    def group_order_mod_kth_powers(self, m: int) -> int:
        """|Gamma(m)| = m^r / gcd(m^r, m^(r-1) Delta_1, ..., Delta_r)."""
        if m < 1:
            raise ValueError("m must be positive")
        r = self.rank
        g = 0
        for i, delta in enumerate(self.deltas):
            g = math.gcd(g, m ** (r - i) * delta)
        return m**r // g

    def local_order(self, p: int, alpha: int) -> int:
        """|Gamma(p^alpha)| as p ** max(0, i*alpha - v_p(Delta_i))."""
        if alpha == 0:
            return 1
        e = max(0, *(i * alpha - valuation(self.deltas[i], p) for i in range(1, self.rank + 1)))
        return p**e

    def stabilization_exponent(self, p: int) -> int:
        """k_p = v_p(d_r); past it |Gamma(p^a)| = p^(r a - v_p(Delta_r))."""
        return valuation(self.elementary_divisors[-1], p)

    def describe(self) -> str:
        gens = ", ".join(str(b) for b in self.basis)
        return f"<{gens}>"


def build_presentation(gens: list[FactoredPositiveRational]) -> SubgroupPresentation:
    """Build the presentation of the group generated by ``gens``.

    Generators equal to 1 are dropped and dependent lists are reduced to a
    lattice basis, so ``[2, 3, 6]`` and ``[2, 3]`` give the same group.
    """
    if not gens:
        raise TrivialGroup("no generators given")
    gens = [g for g in gens if g.exponents]
    if not gens:
        raise TrivialGroup("all generators are 1; the group has rank 0")
    support = tuple(sorted({p for g in gens for p in g.exponents}))
    if len(support) > MAX_SUPPORT:
        raise SupportTooLarge(f"support has {len(support)} primes (limit {MAX_SUPPORT})")
    full = [[g.valuation(p) for g in gens] for p in support]
    basis = smith.column_echelon_basis(full, len(gens))
    r = len(basis[0])
    u, d, v = smith.smith_normal_form(basis, r)
    deltas = [1]
    for i in range(r):
        deltas.append(deltas[-1] * d[i][i])
    return SubgroupPresentation(
        generators=tuple(gens),
        support=support,
        basis_matrix=tuple(tuple(row) for row in basis),
        smith=(u, d, v),
        deltas=tuple(deltas),
    )


def subgroup(spec: str | list) -> SubgroupPresentation:
    """Convenience constructor from ``"2,3"`` or ``[2, 3]`` or ``["3/2"]``."""
    if isinstance(spec, str):
        return build_presentation(parse_generator_list(spec))
    out = []
    for g in spec:
        if isinstance(g, FactoredPositiveRational):
            out.append(g)
        elif isinstance(g, str):
            out.append(parse_generator(g))
        else:
            out.append(FactoredPositiveRational.from_fraction(Fraction(g)))
    return build_presentation(out)
