"""Synthetic voxel images with known topology."""
from __future__ import annotations

import numpy as np

from .ingest import VoxelImage


def solid_box(nx: int, ny: int, nz: int) -> VoxelImage:
    return VoxelImage.from_mask(np.ones((nx, ny, nz), dtype=bool))


def voxel_torus(outer: int = 4, hole: int = 2, height: int = 2) -> VoxelImage:
    """Square ring ``outer x outer x height`` with a centred ``hole x hole`` tunnel.

    Its boundary surface is a torus.
    """
    if outer - hole < 2 or (outer - hole) % 2:
        raise ValueError("need an even wall thickness of at least 1 on each side")
    m = np.ones((outer, outer, height), dtype=bool)
    w = (outer - hole) // 2
    m[w:w + hole, w:w + hole, :] = False
    return VoxelImage.from_mask(m)


def voxel_double_torus(hole: int = 2, wall: int = 1, height: int = 2) -> VoxelImage:
    """A slab with two tunnels side by side; the surface has genus 2."""
    nx = 3 * wall + 2 * hole
    ny = 2 * wall + hole
    m = np.ones((nx, ny, height), dtype=bool)
    m[wall:wall + hole, wall:wall + hole, :] = False
    m[2 * wall + hole:2 * wall + 2 * hole, wall:wall + hole, :] = False
    return VoxelImage.from_mask(m)


def two_tori(outer: int = 4, hole: int = 2, height: int = 2, gap: int = 1) -> VoxelImage:
    a = voxel_torus(outer, hole, height).to_mask()
    m = np.zeros((2 * outer + gap, outer, height), dtype=bool)
    m[:outer] = a
    m[outer + gap:] = a
    return VoxelImage.from_mask(m)


def spherical_shell(n: int = 40, inner: float = 14.0, outer: float | None = None) -> VoxelImage:
    """Voxels whose centres lie between two concentric spheres in an ``n^3`` grid."""
    outer = (n - 1) / 2.0 if outer is None else outer
    c = (n - 1) / 2.0
    x, y, z = np.indices((n, n, n)).astype(float) - c
    r = np.sqrt(x * x + y * y + z * z)
    return VoxelImage.from_mask((r <= outer) & (r >= inner))


def random_image(rng: np.random.Generator, n: int = 6, density: float | None = None) -> VoxelImage:
    density = rng.uniform(0.2, 0.8) if density is None else density
    return VoxelImage.from_mask(rng.random((n, n, n)) < density)


def standard_fixtures() -> dict[str, tuple[VoxelImage, tuple[int, int, int]]]:
    """Named test shapes with their Betti numbers."""
    return {
        "box": (solid_box(5, 5, 5), (1, 0, 1)),
        "torus": (voxel_torus(), (1, 2, 1)),
        "double_torus": (voxel_double_torus(hole=4, wall=2, height=4), (1, 4, 1)),
        "two_tori": (two_tori(), (2, 4, 2)),
    }
