"""Cubical complex of a voxel image and its boundary surface."""
from __future__ import annotations

import numpy as np

from .complex import CellComplex, normalize_cycle
from .ingest import VoxelImage

_UNIT = np.eye(3, dtype=np.int64)
_CORNERS = np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)], dtype=np.int64)


def _encode(pts: np.ndarray, size: int) -> np.ndarray:
    return (pts[:, 0] * size + pts[:, 1]) * size + pts[:, 2]


def _decode(keys: np.ndarray, size: int) -> np.ndarray:
    z = keys % size
    y = (keys // size) % size
    x = keys // (size * size)
    return np.stack([x, y, z], axis=1)


def _other_axes(a: int) -> tuple[int, int]:
    b, c = [i for i in range(3) if i != a]
    return b, c


def build_cubical_complex(img: VoxelImage) -> CellComplex:
    """All voxels of ``img`` with their faces, shared faces deduplicated.

    Ids are dimension-sorted: vertices (lexicographic by coordinate), then
    edges, then quads, then cubes.
    """
    X = CellComplex()
    if not img.foreground:
        return X
    vox = np.array(img.points(), dtype=np.int64)
    size = max(img.dims) + 2

    vkeys = np.unique(_encode((vox[:, None, :] + _CORNERS[None]).reshape(-1, 3), size))
    vcoords = _decode(vkeys, size)

    def vid(pts: np.ndarray) -> np.ndarray:
        return np.searchsorted(vkeys, _encode(pts, size))

    nv = len(vkeys)

    # edges keyed by (anchor, axis)
    ekeys = []
    for a in range(3):
        b, c = _other_axes(a)
        for ob in (0, 1):
            for oc in (0, 1):
                base = vox + ob * _UNIT[b] + oc * _UNIT[c]
                ekeys.append(_encode(base, size) * 3 + a)
    ekeys = np.unique(np.concatenate(ekeys))
    ne = len(ekeys)

    def eid(base: np.ndarray, a: int) -> np.ndarray:
        return nv + np.searchsorted(ekeys, _encode(base, size) * 3 + a)

    qkeys = []
    for a in range(3):
        for o in (0, 1):
            qkeys.append(_encode(vox + o * _UNIT[a], size) * 3 + a)
    qkeys = np.unique(np.concatenate(qkeys))
    nq = len(qkeys)

    def qid(base: np.ndarray, a: int) -> np.ndarray:
        return nv + ne + np.searchsorted(qkeys, _encode(base, size) * 3 + a)

    # vertices
    for p in vcoords.tolist():
        X.add_cell(0, coords=tuple(p))

    ebase = _decode(ekeys // 3, size)
    eaxis = ekeys % 3
    e_lo = vid(ebase)
    e_hi = vid(ebase + _UNIT[eaxis])
    for lo, hi in zip(e_lo.tolist(), e_hi.tolist()):
        X.add_cell(1, (lo, hi))

    qbase = _decode(qkeys // 3, size)
    qaxis = qkeys % 3
    q_edges = np.empty((nq, 4), dtype=np.int64)
    q_verts = np.empty((nq, 4), dtype=np.int64)
    for a in range(3):
        sel = qaxis == a
        if not sel.any():
            continue
        b, c = _other_axes(a)
        base = qbase[sel]
        q_edges[sel, 0] = eid(base, b)
        q_edges[sel, 1] = eid(base + _UNIT[c], b)
        q_edges[sel, 2] = eid(base, c)
        q_edges[sel, 3] = eid(base + _UNIT[b], c)
        q_verts[sel, 0] = vid(base)
        q_verts[sel, 1] = vid(base + _UNIT[b])
        q_verts[sel, 2] = vid(base + _UNIT[b] + _UNIT[c])
        q_verts[sel, 3] = vid(base + _UNIT[c])
    for edges, cyc in zip(q_edges.tolist(), q_verts.tolist()):
        X.add_cell(2, edges, verts=cyc)

    c_quads = np.stack([qid(vox + o * _UNIT[a], a) for a in range(3) for o in (0, 1)], axis=1)
    c_verts = vid((vox[:, None, :] + _CORNERS[None]).reshape(-1, 3)).reshape(-1, 8)
    for quads, corners in zip(c_quads.tolist(), c_verts.tolist()):
        X.add_cell(3, quads, verts=sorted(corners))
    return X


def boundary_subcomplex(Q: CellComplex) -> CellComplex:
    """Quads with exactly one incident cube, closed under faces, renumbered densely."""
    quads = [q for q in Q.cells(2) if len(Q.cofaces[q]) == 1]
    edges = sorted({e for q in quads for e in Q.boundary[q]})
    verts = sorted({v for e in edges for v in Q.boundary[e]})
    remap: dict[int, int] = {}
    S = CellComplex()
    for v in verts:
        remap[v] = S.add_cell(0, coords=Q.coords[v])
    for e in edges:
        remap[e] = S.add_cell(1, [remap[v] for v in Q.boundary[e]])
    for q in quads:
        cyc = normalize_cycle([remap[v] for v in Q.verts[q]])
        remap[q] = S.add_cell(2, [remap[e] for e in Q.boundary[q]], verts=cyc)
    return S

