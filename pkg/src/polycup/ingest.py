"""Binary voxel images: the text and VOX3 raw formats, and lattice adjacency.

Voxel ``(x, y, z)`` is the closed unit cube ``[x, x+1] x [y, y+1] x [z, z+1]``.
Foreground points use 26-adjacency, background points 6-adjacency.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

Point = tuple[int, int, int]

RAW_MAGIC = b"VOX3"
_HEADER = struct.Struct("<4sIII")


class VoxelFormatError(ValueError):
    """Malformed voxel input."""


class VoxelBoundsError(VoxelFormatError):
    """A voxel lies outside the declared grid box."""


@dataclass(frozen=True)
class VoxelImage:
    dims: tuple[int, int, int]
    foreground: frozenset[Point] = field(default_factory=frozenset)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or any(d <= 0 for d in dims):
            raise VoxelFormatError(f"grid dimensions must be three positive integers, got {self.dims}")
        object.__setattr__(self, "dims", dims)
        pts = frozenset(tuple(int(c) for c in p) for p in self.foreground)
        for p in pts:
            if not all(0 <= c < d for c, d in zip(p, dims)):
                raise VoxelBoundsError(f"voxel {p} outside grid {dims}")
        object.__setattr__(self, "foreground", pts)

    def __len__(self) -> int:
        return len(self.foreground)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.foreground

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "VoxelImage":
        mask = np.asarray(mask)
        if mask.ndim != 3:
            raise VoxelFormatError("mask must be 3-dimensional")
        pts = frozenset(tuple(int(c) for c in p) for p in np.argwhere(mask))
        return cls(tuple(mask.shape), pts)

    def to_mask(self) -> np.ndarray:
        mask = np.zeros(self.dims, dtype=bool)
        if self.foreground:
            idx = np.array(sorted(self.foreground))
            mask[idx[:, 0], idx[:, 1], idx[:, 2]] = True
        return mask

    def points(self) -> list[Point]:
        return sorted(self.foreground)


def _squared_distance(p, q) -> int:
    return sum((int(a) - int(b)) ** 2 for a, b in zip(p, q))


def adjacency_26(p, q) -> bool:
    return 1 <= _squared_distance(p, q) <= 3


def adjacency_6(p, q) -> bool:
    return _squared_distance(p, q) == 1


def parse_voxel_text(data: bytes | str) -> VoxelImage:
    """Parse ``dims nx ny nz`` followed by one ``x y z`` line per voxel."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    dims = None
    pts: set[Point] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if dims is None:
            if len(parts) != 4 or parts[0] != "dims":
                raise VoxelFormatError(f"line {lineno}: expected 'dims nx ny nz', got {raw!r}")
            try:
                dims = tuple(int(t) for t in parts[1:])
            except ValueError:
                raise VoxelFormatError(f"line {lineno}: non-integer dimension in {raw!r}") from None
            if any(d <= 0 for d in dims):
                raise VoxelFormatError(f"line {lineno}: dimensions must be positive")
            continue
        if len(parts) != 3:
            raise VoxelFormatError(f"line {lineno}: expected 'x y z', got {raw!r}")
        try:
            p = tuple(int(t) for t in parts)
        except ValueError:
            raise VoxelFormatError(f"line {lineno}: non-integer coordinate in {raw!r}") from None
        if not all(0 <= c < d for c, d in zip(p, dims)):
            raise VoxelBoundsError(f"line {lineno}: voxel {p} outside grid {dims}")
        pts.add(p)
    if dims is None:
        raise VoxelFormatError("missing 'dims' header")
    return VoxelImage(dims, frozenset(pts))


def write_voxel_text(img: VoxelImage) -> bytes:
    lines = ["dims %d %d %d" % img.dims]
    lines += ["%d %d %d" % p for p in img.points()]
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_raw_volume(data: bytes) -> VoxelImage:
    """Parse the VOX3 format: 16-byte header then one byte per voxel, x fastest."""
    if len(data) < _HEADER.size:
        raise VoxelFormatError("truncated VOX3 header")
    magic, nx, ny, nz = _HEADER.unpack_from(data)
    if magic != RAW_MAGIC:
        raise VoxelFormatError(f"bad magic {magic!r}")
    n = nx * ny * nz
    payload = data[_HEADER.size:]
    if len(payload) < n:
        raise VoxelFormatError(f"truncated payload: expected {n} bytes, got {len(payload)}")
    if len(payload) > n:
        raise VoxelFormatError(f"trailing data: expected {n} bytes, got {len(payload)}")
    if n == 0:
        raise VoxelFormatError("grid dimensions must be positive")
    # x fastest -> C-order array indexed [z, y, x]
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(nz, ny, nx)
    return VoxelImage.from_mask(arr.transpose(2, 1, 0) != 0)


def write_raw_volume(img: VoxelImage) -> bytes:
    nx, ny, nz = img.dims
    mask = img.to_mask().transpose(2, 1, 0).astype(np.uint8)
    return _HEADER.pack(RAW_MAGIC, nx, ny, nz) + mask.tobytes()


def load_image(path: str | Path, fmt: str | None = None) -> tuple[VoxelImage, bytes]:
    """Read an image file; ``fmt`` is ``"text"``, ``"vox3"`` or None to sniff."""
    data = Path(path).read_bytes()
    if fmt is None:
        fmt = "vox3" if data[:4] == RAW_MAGIC else "text"
    if fmt == "vox3":
        return parse_raw_volume(data), data
    if fmt == "text":
        return parse_voxel_text(data), data
    raise VoxelFormatError(f"unknown format {fmt!r}")
