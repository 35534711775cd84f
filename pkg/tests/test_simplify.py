from __future__ import annotations

import numpy as np
import pytest

from polycup.atmodel import rank_oracle
from polycup.complex import CellComplex, validate
from polycup.contraction import ChainContraction, ComplexMismatchError, check_contraction, compose_contractions
from polycup.cubical import boundary_subcomplex, build_cubical_complex
from polycup.ingest import VoxelImage
from polycup.shapes import random_image, solid_box, voxel_torus
from polycup.simplify import (Coplanar, MergeError, MinEdges, NotRemovable, SimplifyStats, collapse_edge, coplanar,
                              find_critical_vertices, merge_along, remove_vertex, simplify)


def surface(img):
    return boundary_subcomplex(build_cubical_complex(img))


def patch(nx=2, ny=2):
    coords = [(x, y, 0) for y in range(ny + 1) for x in range(nx + 1)]
    at = lambda x, y: y * (nx + 1) + x
    quads = [(at(x, y), at(x + 1, y), at(x + 1, y + 1), at(x, y + 1)) for y in range(ny) for x in range(nx)]
    return CellComplex.from_polygons(coords, quads)


def critical_tags(img):
    dQ = surface(img)
    crit = find_critical_vertices(img, dQ)
    return {dQ.coords[v]: tags for v, tags in crit.tags.items()}


def test_critical_configurations():
    tags = critical_tags(VoxelImage((2, 2, 1), frozenset({(0, 0, 0), (1, 1, 0)})))
    assert tags == {(1, 1, 0): {"i"}, (1, 1, 1): {"i"}}
    tags = critical_tags(VoxelImage((2, 2, 2), frozenset({(0, 0, 0), (1, 1, 1)})))
    assert tags == {(1, 1, 1): {"ii"}}
    block = {(x, y, z) for x in range(2) for y in range(2) for z in range(2)} - {(0, 0, 0), (1, 1, 1)}
    assert critical_tags(VoxelImage((2, 2, 2), frozenset(block)))[(1, 1, 1)] == {"iii"}


def test_no_critical_vertices_on_a_box():
    assert len(critical_tags(solid_box(3, 3, 3))) == 0


def test_merge_two_quads():
    X = patch(2, 1)
    gamma = next(e for e in X.cells(1) if len(X.cofaces[e]) == 2)
    mu, mu2 = sorted(X.cofaces[gamma])
    Y, c = merge_along(X, gamma, mu, mu2)
    assert Y.counts() == (6, 6, 1, 0)
    assert len(Y.verts[Y.cells(2)[0]]) == 6
    assert check_contraction(c) == [] and validate(Y) == []


def test_merge_rejects_boundary_edge():
    X = patch(2, 1)
    gamma = next(e for e in X.cells(1) if len(X.cofaces[e]) == 1)
    mu = next(iter(X.cofaces[gamma]))
    with pytest.raises(MergeError):
        merge_along(X, gamma, mu, mu)


def test_three_merges_give_octagon_then_collapse():
    X = patch(2, 2)
    center = 4
    total = ChainContraction.identity(X)
    cur = X
    for _ in range(3):
        gamma = next(e for e in cur.cofaces[center] if len(cur.cofaces[e]) == 2)
        mu, mu2 = sorted(cur.cofaces[gamma])
        cur, c = merge_along(cur, gamma, mu, mu2)
        total = compose_contractions(total, c)
    (e,) = cur.cofaces[center]
    cur, c = collapse_edge(cur, center, e)
    total = compose_contractions(total, c)
    assert cur.counts() == (8, 8, 1, 0)
    assert check_contraction(total) == [] and rank_oracle(cur) == (1, 0, 0)


def test_remove_interior_vertex_of_patch():
    X = patch(2, 2)
    Y, c = remove_vertex(X, 4)
    assert Y.counts() == (8, 8, 1, 0)
    assert len(Y.verts[Y.cells(2)[0]]) == 8
    assert check_contraction(c) == [] and rank_oracle(Y) == (1, 0, 0)


def test_remove_vertex_needs_three_faces():
    X = patch(2, 1)
    with pytest.raises(NotRemovable):
        remove_vertex(X, 1)


def test_remove_cube_corner():
    dQ = surface(VoxelImage((1, 1, 1), frozenset({(0, 0, 0)})))
    Y, c = remove_vertex(dQ, dQ.cells(0)[0])
    hexagon = [p for p in Y.cells(2) if len(Y.verts[p]) == 6]
    assert len(hexagon) == 1 and Y.counts()[2] == 4
    assert check_contraction(c) == [] and rank_oracle(Y) == (1, 0, 1)


def test_compose_with_identity_and_mismatch():
    X = patch(2, 1)
    gamma = next(e for e in X.cells(1) if len(X.cofaces[e]) == 2)
    Y, c = merge_along(X, gamma, *sorted(X.cofaces[gamma]))
    cc = compose_contractions(ChainContraction.identity(X), c)
    assert all(cc.f.image(x) == c.f.image(x) and cc.phi.image(x) == c.phi.image(x) for x in X.cells())
    with pytest.raises(ComplexMismatchError):
        compose_contractions(c, c)


def test_coplanar_exact():
    assert coplanar([(0, 0, 0), (1, 0, 0), (0, 1, 0), (5, 7, 0)])
    assert not coplanar([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


@pytest.mark.parametrize("term", [Coplanar(), MinEdges(10)])
def test_torus_betti_preserved(term):
    img = voxel_torus()
    dQ = surface(img)
    P, c = simplify(dQ, img, term)
    assert rank_oracle(dQ) == rank_oracle(P) == (1, 2, 1)
    assert check_contraction(c) == [] and validate(P) == []


def test_box_reduces_to_six_faces():
    img = solid_box(5, 5, 5)
    stats = SimplifyStats()
    P, _ = simplify(surface(img), img, Coplanar(), stats=stats)
    assert P.counts()[2] == 6 and rank_oracle(P) == (1, 0, 1)
    assert stats.removed > 0


def test_min_edges_bound():
    img = solid_box(5, 5, 5)
    dQ = surface(img)
    # every quad already has 4 edges, so a bound of 4 asks for nothing
    assert simplify(dQ, img, MinEdges(4))[0].counts() == dQ.counts()
    # the edge bound ignores geometry and merges across the box faces
    P = simplify(dQ, img, MinEdges(6))[0]
    assert P.counts()[2] < 6 and rank_oracle(P) == (1, 0, 1)


@pytest.mark.parametrize("seed", range(10))
def test_random_images(seed):
    img = random_image(np.random.default_rng(seed))
    dQ = surface(img)
    P, c = simplify(dQ, img)
    assert validate(P) == [] and check_contraction(c) == []
    assert rank_oracle(P) == rank_oracle(dQ)


def test_describe():
    assert MinEdges(7).describe() == {"terminate": "min-edges", "min_edges": 7}
    assert Coplanar().describe() == {"terminate": "coplanar"}


def test_check_contraction_detects_corruption():
    img = voxel_torus()
    dQ = surface(img)
    P, c = simplify(dQ, img)
    x = next(e for e in dQ.cells(1) if c.phi.image(e))
    c.phi.set(x, c.phi.image(x) ^ (1 << dQ.cells(2)[0]))
    assert check_contraction(c)
    P, c = simplify(dQ, img)
    y = P.cells(2)[0]
    c.g.set(y, 0)
    assert check_contraction(c)


def test_merge_inside_a_solid_cube_updates_the_cube():
    Q = build_cubical_complex(VoxelImage((1, 1, 1), frozenset({(0, 0, 0)})))
    gamma = Q.cells(1)[0]
    mu, mu2 = sorted(Q.cofaces[gamma])
    Y, c = merge_along(Q, gamma, mu, mu2)
    (cube,) = Y.cells(3)
    assert len(Y.boundary[cube]) == 5
    assert validate(Y) == [] and check_contraction(c) == []
    assert rank_oracle(Y) == (1, 0, 0)
