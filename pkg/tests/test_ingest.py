from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polycup.ingest import (RAW_MAGIC, VoxelBoundsError, VoxelFormatError, VoxelImage, adjacency_6, adjacency_26,
                            load_image, parse_raw_volume, parse_voxel_text, write_raw_volume, write_voxel_text)


def test_text_examples():
    assert len(parse_voxel_text("dims 1 1 1\n0 0 0")) == 1
    img = parse_voxel_text("dims 2 2 2\n0 0 0\n1 1 1")
    assert img.foreground == {(0, 0, 0), (1, 1, 1)}
    with pytest.raises(VoxelBoundsError):
        parse_voxel_text("dims 2 1 1\n0 0 0\n5 0 0")


def test_text_parse_error_has_line_number():
    with pytest.raises(VoxelFormatError, match="line 2"):
        parse_voxel_text("dims 2 2 2\n0 zero 0")


def test_raw_examples():
    header = lambda n: RAW_MAGIC + np.array(n, dtype="<u4").tobytes()
    assert len(parse_raw_volume(header((1, 1, 1)) + b"\x01")) == 1
    assert len(parse_raw_volume(header((2, 2, 2)) + bytes(8))) == 0
    with pytest.raises(VoxelFormatError):
        parse_raw_volume(b"NOPE" + bytes(20))
    with pytest.raises(VoxelFormatError):
        parse_raw_volume(header((2, 2, 2)) + bytes(7))


def test_adjacency():
    assert adjacency_26((0, 0, 0), (1, 1, 1)) and not adjacency_6((0, 0, 0), (1, 1, 1))
    assert adjacency_26((0, 0, 0), (1, 0, 0)) and adjacency_6((0, 0, 0), (1, 0, 0))
    assert not adjacency_26((0, 0, 0), (0, 0, 0)) and not adjacency_6((0, 0, 0), (0, 0, 0))


@settings(max_examples=50)
@given(st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4)), st.data())
def test_roundtrips(dims, data):
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=int(np.prod(dims)), max_size=int(np.prod(dims)))))
    img = VoxelImage.from_mask(mask.reshape(dims))
    assert parse_voxel_text(write_voxel_text(img)) == img
    assert parse_raw_volume(write_raw_volume(img)) == img


def test_load_sniffs_format(tmp_path):
    img = VoxelImage((2, 3, 1), frozenset({(1, 2, 0)}))
    (tmp_path / "a.vox3").write_bytes(write_raw_volume(img))
    (tmp_path / "a.txt").write_bytes(write_voxel_text(img))
    assert load_image(tmp_path / "a.vox3")[0] == img
    assert load_image(tmp_path / "a.txt")[0] == img
