from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from polycup.complex import CellComplex, normalize_cycle
from polycup.cubical import boundary_subcomplex, build_cubical_complex
from polycup.diagonal import (MalformedPolygonError, NotASquareError, aw_diagonal, aw_fan_oracle, aw_fan_terms,
                              coderivation_defect, contained_in_closure, formula_terms, label_boundary,
                              polygon_diagonal, serre_diagonal_square, tensor_boundary_labels)
from polycup.gf2 import Cochain, TensorChain, tensor_evaluate
from polycup.ingest import VoxelImage


def T(*pairs):
    def lab(x):
        x = (x,) if isinstance(x, int) else tuple(x)
        return x, min(len(x) - 1, 2)
    return TensorChain([(lab(a), lab(b)) for a, b in pairs])


def E(a, b):
    return tuple(sorted((a, b)))


def test_square_formula():
    p = (1, 2, 3, 4)
    expect = T((1, p), (p, 4), ((1, 2), (2, 3)), ((1, 2), E(3, 4)), ((2, 3), E(3, 4)))
    assert formula_terms(p) == expect == aw_fan_terms(p)


def test_pentagon_formula():
    p = (1, 3, 5, 4, 2)
    expect = T((1, p), (p, 5), ((1, 3), (3, 5)), (E(4, 2), E(5, 4)), ((1, 2), E(5, 4)), ((1, 2), E(4, 2)))
    assert formula_terms(p) == expect == aw_fan_terms(p)


def test_triangle_is_alexander_whitney():
    assert formula_terms((1, 2, 3)) == aw_diagonal((1, 2, 3))
    assert aw_diagonal((1, 2, 3)) == T((1, (1, 2, 3)), ((1, 2), (2, 3)), ((1, 2, 3), 3))
    assert aw_diagonal((2, 5)) == T((2, (2, 5)), ((2, 5), 5))
    assert aw_diagonal((7,)) == T((7, 7))
    with pytest.raises(ValueError):
        aw_diagonal((3, 1))


@pytest.mark.parametrize("bad", [(1, 2), (1, 2, 2), (0, 1, 1, 3)])
def test_malformed(bad):
    with pytest.raises(MalformedPolygonError):
        formula_terms(bad)


polygons = st.integers(3, 12).flatmap(
    lambda k: st.permutations(range(1, 40)).map(lambda p: normalize_cycle(p[:k])))


@settings(max_examples=300, deadline=None)
@given(polygons)
def test_formula_matches_fan_oracle(p):
    assert formula_terms(p) == aw_fan_terms(p)


@settings(max_examples=200, deadline=None)
@given(polygons)
def test_label_coderivation(p):
    k = len(p)
    edges = [E(p[i], p[(i + 1) % k]) for i in range(k)]
    rhs = TensorChain()
    for a, b in edges:
        rhs = rhs + aw_diagonal((a, b))
    assert tensor_boundary_labels(formula_terms(p)) == rhs
    assert len(label_boundary(p)) == k


def unit_square():
    # vertex ids follow lexicographic coordinate order, as in the cubical build
    return CellComplex.from_polygons([(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)], [(0, 2, 3, 1)])


def test_serre_unit_square():
    X = unit_square()
    q = X.cells(2)[0]
    e = lambda a, b: X.edge_between(a, b)
    # corner (x) q + [x = 0] (x) [y = 1] + [y = 0] (x) [x = 1] + q (x) far corner
    expect = TensorChain([((0, 0), (q, 2)), ((q, 2), (3, 0)),
                          ((e(0, 1), 1), (e(1, 3), 1)), ((e(0, 2), 1), (e(2, 3), 1))])
    assert serre_diagonal_square(X, q) == expect
    assert not coderivation_defect(X, q, serre_diagonal_square)


def test_serre_rejects_non_square():
    X = CellComplex.from_polygons([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])
    with pytest.raises(NotASquareError):
        serre_diagonal_square(X, X.cells(2)[0])


def test_cell_level_square_example_evaluates_to_one():
    # the term <1,2> (x) <2,3> of the square, picked out by the two edge cochains
    X = unit_square()
    q = X.cells(2)[0]
    t = polygon_diagonal(X, q).bidegree(1, 1)
    left, right = Cochain(1, [X.edge_between(0, 2)]), Cochain(1, [X.edge_between(2, 3)])
    assert tensor_evaluate(left, right, t) == 1


def test_cube_surface_diagonals():
    X = boundary_subcomplex(build_cubical_complex(VoxelImage((1, 1, 1), frozenset({(0, 0, 0)}))))
    for q in X.cells(2):
        for diag in (polygon_diagonal, serre_diagonal_square):
            d = diag(X, q)
            assert not coderivation_defect(X, q, diag)
            assert contained_in_closure(X, q, d)
        assert polygon_diagonal(X, q) == aw_fan_oracle(X, q)


def test_random_polygons_in_a_complex():
    rng = random.Random(5)
    for _ in range(50):
        k = rng.randint(3, 12)
        cyc = rng.sample(range(k), k)
        X = CellComplex.from_polygons([(i, i * i, 0) for i in range(k)], [cyc])
        p = X.cells(2)[0]
        assert polygon_diagonal(X, p) == aw_fan_oracle(X, p)
        assert not coderivation_defect(X, p, polygon_diagonal)


def test_edge_cochains_on_square_formula():
    # u2 = <1,2> and e2 = <2,3> pick out exactly one (1, 1) term of the square
    t = formula_terms((1, 2, 3, 4))
    ids = {lab: n for n, lab in enumerate(sorted({x for term in t.terms for x, _ in term}, key=repr))}
    t = t.map_cells(ids.__getitem__)
    assert tensor_evaluate(Cochain(1, [ids[(1, 2)]]), Cochain(1, [ids[(2, 3)]]), t) == 1
    assert tensor_evaluate(Cochain(1, [ids[(2, 3)]]), Cochain(1, [ids[(1, 2)]]), t) == 0
