"""Bit-packed GF(2) linear algebra."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from edcalc import (
    BitVec,
    DimensionMismatchError,
    EnumerationTooLargeError,
    SubspaceF2,
    annihilator,
    count_bases,
    enumerate_bases,
    enumerate_elements,
    rref,
)


def vecs(m, rows):
    return [BitVec.from_coords(r) for r in rows]


def test_bitvec_construction():
    v = BitVec.from_coords([1, 0, 1, 0])
    assert v.m == 4 and v.bits == 0b0101
    assert v.coords() == (1, 0, 1, 0)
    assert v.support() == (0, 2)
    assert v.weight() == 2
    assert str(v) == "(1,0,1,0)"
    assert BitVec.unit(3, 1).coords() == (0, 1, 0)
    assert BitVec.zero(3).is_zero()


def test_bitvec_validation():
    with pytest.raises(ValueError):
        BitVec(0, 0)
    with pytest.raises(ValueError):
        BitVec(65, 0)
    with pytest.raises(ValueError):
        BitVec(2, 0b100)
    with pytest.raises(ValueError):
        BitVec.from_coords([0, 2])
    with pytest.raises(ValueError):
        BitVec.unit(3, 3)


def test_bitvec_xor_and_dot():
    a = BitVec.from_coords([1, 1, 0])
    b = BitVec.from_coords([0, 1, 1])
    assert (a ^ b).coords() == (1, 0, 1)
    assert a.dot(b) == 1
    assert a.dot(a) == 0
    with pytest.raises(DimensionMismatchError):
        a ^ BitVec.from_coords([1, 0])
    with pytest.raises(DimensionMismatchError):
        a.dot(BitVec.from_coords([1, 0]))


def test_rref_canonical_example():
    space = rref(vecs(4, [[1, 1, 0, 0], [1, 0, 1, 0]]))
    assert [v.coords() for v in space.basis] == [(1, 0, 1, 0), (0, 1, 1, 0)]
    assert space.dim == 2
    assert space.pivots() == (0, 1)


def test_rref_empty_needs_dimension():
    with pytest.raises(ValueError):
        rref([])
    space = rref([], m=5)
    assert space.m == 5 and space.dim == 0


def test_subspace_rejects_non_canonical_basis():
    with pytest.raises(ValueError):
        SubspaceF2(3, (BitVec.from_coords([1, 1, 0]), BitVec.from_coords([1, 0, 1])))


def test_contains():
    space = rref(vecs(4, [[1, 1, 0, 0], [1, 0, 1, 0]]))
    assert BitVec.from_coords([0, 1, 1, 0]) in space
    assert BitVec.from_coords([0, 0, 0, 1]) not in space
    with pytest.raises(DimensionMismatchError):
        space.contains(BitVec.from_coords([1, 0]))


def test_annihilator_example():
    mu = rref(vecs(4, [[1, 1, 0, 0], [1, 0, 1, 0]]))
    dual = annihilator(mu)
    assert [v.coords() for v in dual.basis] == [(1, 1, 1, 0), (0, 0, 0, 1)]


def test_annihilator_of_trivial_and_full():
    trivial = rref([], m=3)
    full = annihilator(trivial)
    assert full.dim == 3
    assert annihilator(full).dim == 0


def test_enumerate_elements():
    space = rref(vecs(4, [[1, 1, 1, 0], [0, 0, 0, 1]]))
    elems = enumerate_elements(space)
    assert len(elems) == 3
    assert len(set(elems)) == 3
    assert all(v in space and not v.is_zero() for v in elems)
    assert set(v.coords() for v in elems) == {(1, 1, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)}


def test_enumerate_elements_cap():
    space = rref([BitVec.unit(10, i) for i in range(10)])
    with pytest.raises(EnumerationTooLargeError):
        enumerate_elements(space, dim_cap=9)
    assert len(enumerate_elements(space, dim_cap=10)) == 1023


def test_count_bases():
    assert count_bases(0) == 1
    assert count_bases(1) == 1
    assert count_bases(2) == 3
    assert count_bases(3) == 28


def test_enumerate_bases_full_plane():
    space = rref([BitVec.unit(2, 0), BitVec.unit(2, 1)])
    bases = list(enumerate_bases(space))
    assert len(bases) == 3
    for basis in bases:
        assert rref(list(basis)) == space
        assert len(set(basis)) == 2


def test_enumerate_bases_counts_and_membership():
    space = rref([BitVec.unit(5, 0), BitVec.unit(5, 2), BitVec.unit(5, 4)])
    bases = list(enumerate_bases(space))
    assert len(bases) == count_bases(3) == 28
    seen = set(frozenset(b) for b in bases)
    assert len(seen) == 28
    for basis in bases:
        assert rref(list(basis)) == space


def test_enumerate_bases_zero_dim():
    assert list(enumerate_bases(rref([], m=4))) == [()]


def test_enumerate_bases_cap():
    space = rref([BitVec.unit(3, i) for i in range(3)])
    with pytest.raises(EnumerationTooLargeError):
        list(enumerate_bases(space, cap=27))


coord_rows = st.integers(min_value=1, max_value=10).flatmap(
    lambda m: st.lists(
        st.lists(st.integers(0, 1), min_size=m, max_size=m), min_size=0, max_size=6
    ).map(lambda rows: (m, rows))
)


@given(coord_rows)
def test_rref_is_spanning_invariant(case):
    m, rows = case
    vectors = [BitVec.from_coords(r) for r in rows]
    space = rref(vectors, m=m)
    assert all(v in space for v in vectors)
    assert rref(list(space.basis), m=m) == space
    # permuting or duplicating the spanning set cannot change the canonical form
    assert rref(list(reversed(vectors)) + vectors, m=m) == space


@given(coord_rows)
def test_double_annihilator(case):
    m, rows = case
    space = rref([BitVec.from_coords(r) for r in rows], m=m)
    dual = annihilator(space)
    assert space.dim + dual.dim == m
    assert annihilator(dual) == space
    assert all(u.dot(v) == 0 for u in space.basis for v in dual.basis)
