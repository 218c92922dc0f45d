import random

import pytest
from hypothesis import given, settings, strategies as st

from avgorder import oracles
from avgorder.errors import DimensionMismatch, NotDivisor, NotSquareFree
from avgorder.twoadic import INF, TwoAdicStructure, field_discriminant, squarefree_product


def two(groups, spec):
    return TwoAdicStructure(groups(spec))


@pytest.mark.parametrize("eta,expected", [(1, 1), (5, 5), (3, 12), (2, 8), (6, 24), (15, 60), (13, 13), (30, 120)])
def test_field_discriminant(eta, expected):
    assert field_discriminant(eta) == expected


def test_field_discriminant_rejects_squares():
    with pytest.raises(NotSquareFree):
        field_discriminant(12)
    with pytest.raises(NotSquareFree):
        field_discriminant(0)


def test_coset_member_examples(groups):
    assert two(groups, "2").coset_member((1,), 1)
    assert not two(groups, "4").coset_member((1,), 1)
    assert two(groups, "4").coset_member((1,), 2)
    # frozen from the enumeration oracle
    pres = groups("4")
    assert not oracles.coset_member_by_enumeration(pres, (1,), 1)
    assert oracles.coset_member_by_enumeration(pres, (1,), 2)


def test_coset_member_dimension(groups):
    with pytest.raises(DimensionMismatch):
        two(groups, "2,3").coset_member((1,), 1)


def test_depth_examples(groups):
    assert two(groups, "2").depth(2) == 0
    assert two(groups, "4").depth(2) == 1
    assert two(groups, "2,3").depth(6) == 0
    # 6^4 = 16 * 81
    assert two(groups, "16,81").depth(6) == 2
    # <4, 12> = <4, 3>
    assert two(groups, "4,12").depth(3) == 0
    assert two(groups, "4,12").depth(2) == 1
    with pytest.raises(NotDivisor):
        two(groups, "2,3").depth(5)


def test_depth_infinite():
    # <4*3> : the vector (1, 0) for eta = 2 is never attained
    from avgorder.subgroup import subgroup

    t = TwoAdicStructure(subgroup("12"))
    assert t.depth(2) == INF and t.cutoff(2) == INF
    assert oracles.depth_by_scan(t, 2) == INF
    assert t.depth(1) == 0


def test_cutoff_examples(groups):
    assert two(groups, "2").cutoff(2) == 3
    assert two(groups, "5").cutoff(5) == 1
    assert two(groups, "3").cutoff(3) == 2
    assert two(groups, "4").cutoff(2) == 3


def test_tilde_gamma_examples(groups):
    t = two(groups, "2")
    assert t.tilde_gamma_order(8) == 2
    assert t.tilde_gamma_order(2) == 1
    for k in (1, 3, 15, 105):
        assert t.tilde_gamma_order(k) == 1
    assert two(groups, "2,3").tilde_gamma_order(4) == 1
    assert two(groups, "2,3").tilde_gamma_order(24) == 4  # eta in {1, 2, 3, 6}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**7))
def test_coset_member_matches_enumeration(seed):
    pres = oracles.random_presentation(random.Random(seed), 4, 3, 4)
    t = TwoAdicStructure(pres)
    images = {v: oracles.lattice_image_mod(pres, 2**v) for v in range(1, 6)}
    for d in t.descriptors:
        seq = []
        for v in range(1, 6):
            member = t.coset_member(d.valuation_vector, v)
            assert member == oracles.coset_member_by_enumeration(pres, d.valuation_vector, v, images[v])
            seq.append(member)
        # once true, stays true
        assert seq == sorted(seq)
        assert d.depth == oracles.depth_by_scan(t, d.eta)
        if d.depth != INF:
            assert d.cutoff == max(1 + d.depth, (d.discriminant & -d.discriminant).bit_length() - 1)
        else:
            assert d.cutoff == INF


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**7))
def test_tilde_gamma_is_group(seed):
    pres = oracles.random_presentation(random.Random(seed), 4, 3, 4)
    t = TwoAdicStructure(pres)
    assert t.depth(1) == 0 and t.cutoff(1) == 1
    for k in range(1, 129):
        etas = t.tilde_gamma_set(k)
        assert oracles.closed_under_product(etas)
        n = len(etas)
        assert n & (n - 1) == 0


def test_squarefree_product():
    assert squarefree_product(6, 10) == 15
    assert squarefree_product(1, 7) == 7
    assert squarefree_product(30, 30) == 1
