from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from polycup.gf2 import (Chain, Cochain, DimensionError, SparseLinearMap, TensorChain, evaluate, iter_bits,
                         tensor, tensor_evaluate, to_bits)

ids = st.sets(st.integers(0, 300), max_size=40)


def test_chain_addition_cancels_mod_two():
    assert Chain(1, [1, 2]) + Chain(1, [2, 3]) == Chain(1, [1, 3])
    assert Chain(0, []) + Chain(0, [1]) == Chain(0, [1])


def test_fig1_cohomologous_cocycles_differ_by_coboundary():
    x, y = Cochain(1, [1, 2]), Cochain(1, [1, 2, 3, 4])
    assert x + y == Cochain(1, [3, 4])


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        Chain(0, [1]) + Chain(1, [1])
    with pytest.raises(DimensionError):
        evaluate(Cochain(1, [1]), Chain(2, [1]))


def test_evaluate():
    assert evaluate(Cochain(1, [1, 4]), Chain(1, [1])) == 1
    assert evaluate(Cochain(1, []), Chain(1, [5, 6])) == 0
    assert evaluate(Cochain(1, [1, 2]), Chain(1, [1, 2])) == 0


def test_tensor_evaluate_basic():
    a, b = Cochain(0, [0]), Cochain(0, [1])
    assert tensor_evaluate(a, b, TensorChain([((0, 0), (1, 0))])) == 1
    assert tensor_evaluate(a, b, TensorChain([((0, 0), (1, 0)), ((0, 0), (1, 0))])) == 0


@given(ids)
def test_iter_bits_roundtrip(s):
    assert iter_bits(to_bits(s)) == sorted(s)


def test_iter_bits_large_sparse_and_dense():
    dense = set(range(0, 9000, 3))
    assert iter_bits(to_bits(dense)) == sorted(dense)
    sparse = {5, 7000, 12000}
    assert iter_bits(to_bits(sparse)) == sorted(sparse)


@given(ids, ids, ids)
def test_chain_group_laws(a, b, c):
    A, B, C = Chain(1, a), Chain(1, b), Chain(1, c)
    assert (A + B) + C == A + (B + C)
    assert A + B == B + A
    assert not (A + A)


@given(ids, ids)
def test_packed_and_sparse_storage_agree(a, b):
    A = Chain.from_bits(2, to_bits(a))
    assert set(A) == a and len(A) == len(a)
    assert all(x in A for x in a) and all(x in A for x in b) == b.issubset(a)


def test_tensor_builds_products():
    t = tensor([1, 2], 1, [3], 0)
    assert len(t) == 2 and t.bidegrees() == {(1, 0)}
    assert t + t == TensorChain()


def test_sparse_linear_map_defaults():
    ident = SparseLinearMap(0, "identity", {3: 0b11})
    assert ident.image(1) == 0b10 and ident.image(3) == 0b11
    assert ident.apply_bits(0b1010) == 0b10 ^ 0b11
    zero = SparseLinearMap(1, "zero")
    assert zero.apply_bits(0b111) == 0
    with pytest.raises(ValueError):
        SparseLinearMap(0, "constant")
