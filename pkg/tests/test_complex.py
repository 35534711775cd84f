from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polycup.atmodel import rank_oracle
from polycup.complex import CellComplex, DeadCellError, boundary_operator, cycle_from_edges, normalize_cycle, validate
from polycup.cubical import boundary_subcomplex, build_cubical_complex
from polycup.ingest import VoxelImage
from polycup.shapes import random_image, solid_box


def img(*pts, dims=(3, 3, 3)):
    return VoxelImage(dims, frozenset(pts))


def test_single_voxel_counts():
    Q = build_cubical_complex(img((0, 0, 0), dims=(1, 1, 1)))
    assert Q.counts() == (8, 12, 6, 1)
    dQ = boundary_subcomplex(Q)
    assert dQ.counts() == (8, 12, 6, 0)
    assert rank_oracle(dQ) == (1, 0, 1)


def test_two_face_adjacent_voxels():
    Q = build_cubical_complex(img((0, 0, 0), (1, 0, 0)))
    assert Q.counts() == (12, 20, 11, 2)
    assert boundary_subcomplex(Q).counts()[2] == 10


def test_block_surface_and_empty():
    assert boundary_subcomplex(build_cubical_complex(solid_box(2, 2, 2))).counts()[2] == 24
    assert build_cubical_complex(VoxelImage((2, 2, 2))).counts() == (0, 0, 0, 0)


def test_boundary_of_edge_and_quad():
    Q = build_cubical_complex(img((0, 0, 0), dims=(1, 1, 1)))
    e, q = Q.cells(1)[0], Q.cells(2)[0]
    assert len(boundary_operator(Q, Q.chain(1, [e]))) == 2
    assert len(boundary_operator(Q, Q.chain(2, [q]))) == 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_boundary_squared_is_zero(seed):
    rng = random.Random(seed)
    Q = build_cubical_complex(random_image(np.random.default_rng(seed), n=3))
    for q in (2, 3):
        cells = Q.cells(q)
        if cells:
            c = Q.chain(q, rng.sample(cells, rng.randint(1, len(cells))))
            assert not boundary_operator(Q, boundary_operator(Q, c))
    assert validate(Q) == [] and validate(boundary_subcomplex(Q)) == []


def test_dead_cell_rejected():
    X = CellComplex.from_polygons([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2, 3)])
    e = X.cells(1)[0]
    X.kill(X.cells(2)[0])
    X.kill(e)
    with pytest.raises(DeadCellError):
        boundary_operator(X, X.chain(1, [e]))


def test_validate_catches_corruption():
    X = CellComplex.from_polygons([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2, 3)])
    assert validate(X) == []
    p = X.cells(2)[0]
    X.boundary[p] = X.boundary[p][:3]
    assert validate(X)


def test_cycle_helpers():
    assert normalize_cycle((3, 1, 2)) == (1, 2, 3)
    assert normalize_cycle((2, 3, 1)) == (1, 2, 3)
    assert normalize_cycle((1, 3, 2)) == (1, 2, 3)
    assert cycle_from_edges([(0, 1), (1, 2), (2, 0)]) == (0, 1, 2)
    assert cycle_from_edges([(0, 1), (1, 2)]) is None


def test_three_squares_in_grid():
    # 3x3 vertex grid, four unit squares, one left out: 9 vertices, 12 edges, 3 squares
    coords = [(x, y, 0) for y in range(3) for x in range(3)]
    sq = [(0, 1, 4, 3), (1, 2, 5, 4), (3, 4, 7, 6)]
    X = CellComplex.from_polygons(coords, sq)
    for a, b in [(5, 8), (7, 8)]:
        X.add_cell(1, (a, b))
    assert X.counts() == (9, 12, 3, 0)
    # chi = 0 and b2 = 0 force b1 = 1
    assert rank_oracle(X) == (1, 1, 0)
