"""Regular cell complexes of dimension <= 3 with Z/2 cellular boundary."""
from __future__ import annotations

from typing import Iterable, Sequence

from .gf2 import Chain, DimensionError, iter_bits, to_bits


class DeadCellError(KeyError):
    pass


def normalize_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate/reflect a vertex cycle so it starts at its minimum and heads
    toward the smaller of that vertex's two neighbours."""
    k = len(cycle)
    i = min(range(k), key=cycle.__getitem__)
    fwd = tuple(cycle[(i + s) % k] for s in range(k))
    if k > 2 and fwd[-1] < fwd[1]:
        return (fwd[0],) + tuple(reversed(fwd[1:]))
    return fwd


def cycle_from_edges(edges: Iterable[tuple[int, int]]) -> tuple[int, ...] | None:
    """Order a set of edges (vertex pairs) into one simple closed cycle.

    Returns ``None`` when the edges do not form exactly one simple cycle.
    """
    edges = list(edges)
    if len(edges) < 2:
        return None
    nbrs: dict[int, list[int]] = {}
    for a, b in edges:
        if a == b:
            return None
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    if any(len(v) != 2 for v in nbrs.values()):
        return None
    if len(nbrs) != len(edges):
        return None
    start = min(nbrs)
    order = [start]
    prev, cur = start, min(nbrs[start])
    while cur != start:
        order.append(cur)
        a, b = nbrs[cur]
        prev, cur = cur, (b if a == prev else a)
        if len(order) > len(edges):
            return None
    if len(order) != len(edges):
        return None
    return normalize_cycle(order)


class CellComplex:
    """Indexed cells with dimension, boundary facets and vertex geometry.

    Cell ids are dense integers assigned in insertion order and never reused;
    deleted cells stay in the tables with ``alive[i] == False``.  ``verts[i]``
    is ``(i,)`` for a vertex, the sorted endpoint pair for an edge, the
    normalized vertex cycle for a polygon and the sorted vertex ids of a
    3-cell.
    """

    def __init__(self) -> None:
        self.dims: list[int] = []
        self.boundary: list[tuple[int, ...]] = []
        self.verts: list[tuple[int, ...] | None] = []
        self.coords: list[tuple[int, int, int] | None] = []
        self.alive: list[bool] = []
        self.cofaces: list[set[int]] = []
        self._edge_index: dict[tuple[int, int], int] = {}

    # -- construction -------------------------------------------------
    def add_cell(self, dim: int, boundary: Iterable[int] = (), verts: Sequence[int] | None = None,
                 coords: tuple[int, int, int] | None = None) -> int:
        cid = len(self.dims)
        bd = tuple(sorted(boundary))
        for b in bd:
            if not self.alive[b]:
                raise DeadCellError(b)
            if self.dims[b] != dim - 1:
                raise DimensionError(f"facet {b} of a {dim}-cell has dimension {self.dims[b]}")
        if dim == 0:
            verts = (cid,)
        elif dim == 1:
            if verts is None:
                verts = tuple(sorted(bd))
            verts = tuple(sorted(verts))
            self._edge_index[verts] = cid
        elif dim == 2 and verts is not None:
            verts = normalize_cycle(tuple(verts))
        elif verts is not None:
            verts = tuple(verts)
        self.dims.append(dim)
        self.boundary.append(bd)
        self.verts.append(verts)
        self.coords.append(tuple(int(c) for c in coords) if coords is not None else None)
        self.alive.append(True)
        self.cofaces.append(set())
        for b in bd:
            self.cofaces[b].add(cid)
        return cid

    def kill(self, cid: int) -> None:
        if not self.alive[cid]:
            raise DeadCellError(cid)
        self.alive[cid] = False
        for b in self.boundary[cid]:
            self.cofaces[b].discard(cid)
        if self.dims[cid] == 1:
            key = self.verts[cid]
            if self._edge_index.get(key) == cid:
                del self._edge_index[key]

    def set_boundary(self, cid: int, boundary: Iterable[int]) -> None:
        for b in self.boundary[cid]:
            self.cofaces[b].discard(cid)
        self.boundary[cid] = tuple(sorted(boundary))
        for b in self.boundary[cid]:
            self.cofaces[b].add(cid)

    @classmethod
    def from_polygons(cls, coords: Sequence[Sequence[int]], polygons: Iterable[Sequence[int]]) -> "CellComplex":
        """Build a 2-complex from vertex coordinates and polygon vertex cycles.

        Vertex ``i`` of ``coords`` gets cell id ``i``; edges are created in
        first-seen order, then the polygons.
        """
        X = cls()
        for c in coords:
            X.add_cell(0, coords=tuple(c))
        polygons = [tuple(p) for p in polygons]
        for p in polygons:
            for a, b in zip(p, p[1:] + p[:1]):
                if X.edge_between(a, b) is None:
                    X.add_cell(1, (a, b))
        for p in polygons:
            edges = [X.edge_between(a, b) for a, b in zip(p, p[1:] + p[:1])]
            X.add_cell(2, edges, verts=p)
        return X

    def copy(self) -> "CellComplex":
        X = CellComplex()
        X.dims = list(self.dims)
        X.boundary = list(self.boundary)
        X.verts = list(self.verts)
        X.coords = list(self.coords)
        X.alive = list(self.alive)
        X.cofaces = [set(c) for c in self.cofaces]
        X._edge_index = dict(self._edge_index)
        return X

    # -- queries -------------------------------------------------------
    def __len__(self) -> int:
        return sum(self.alive)

    @property
    def capacity(self) -> int:
        return len(self.dims)

    def cells(self, dim: int | None = None) -> list[int]:
        if dim is None:
            return [i for i, a in enumerate(self.alive) if a]
        return [i for i, (a, d) in enumerate(zip(self.alive, self.dims)) if a and d == dim]

    def filtration(self) -> list[int]:
        """Live cells sorted by (dimension, id)."""
        return sorted(self.cells(), key=lambda i: (self.dims[i], i))

    def counts(self) -> tuple[int, int, int, int]:
        out = [0, 0, 0, 0]
        for a, d in zip(self.alive, self.dims):
            if a:
                out[d] += 1
        return tuple(out)

    def euler_characteristic(self) -> int:
        n = self.counts()
        return n[0] - n[1] + n[2] - n[3]

    def edge_between(self, a: int, b: int) -> int | None:
        return self._edge_index.get((a, b) if a < b else (b, a))

    def boundary_bits(self, cid: int) -> int:
        return to_bits(self.boundary[cid])

    def live_cofaces(self, cid: int) -> list[int]:
        return sorted(self.cofaces[cid])

    def polygon_edges(self, cid: int) -> list[int]:
        """Edges of a polygon in the order of its vertex cycle."""
        cyc = self.verts[cid]
        return [self.edge_between(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])]

    def incident_polygons(self, v: int) -> list[int]:
        out = set()
        for e in self.cofaces[v]:
            out.update(self.cofaces[e])
        return sorted(out)

    def chain(self, dim: int, cells: Iterable[int]) -> Chain:
        return Chain(dim, cells)


def boundary_operator(X: CellComplex, c: Chain) -> Chain:
    """Cellular boundary of a chain (sum of facets, mod 2)."""
    if c.dim < 1:
        raise DimensionError("boundary is defined on chains of degree >= 1")
    out = 0
    for cid in c:
        if cid >= X.capacity or not X.alive[cid]:
            raise DeadCellError(cid)
        if X.dims[cid] != c.dim:
            raise DimensionError(f"cell {cid} has dimension {X.dims[cid]}, chain has {c.dim}")
        out ^= X.boundary_bits(cid)
    return Chain.from_bits(c.dim - 1, out)


def validate(X: CellComplex) -> list[str]:
    """Structural checks; returns a list of human-readable violations."""
    problems: list[str] = []
    for cid in X.cells():
        d = X.dims[cid]
        bd = X.boundary[cid]
        for b in bd:
            if b >= X.capacity or not X.alive[b]:
                problems.append(f"cell {cid}: facet {b} is not alive")
            elif X.dims[b] != d - 1:
                problems.append(f"cell {cid}: facet {b} has dimension {X.dims[b]}")
            elif cid not in X.cofaces[b]:
                problems.append(f"cell {cid}: missing coface link from {b}")
        if d >= 2:
            acc = 0
            for b in bd:
                if b < X.capacity:
                    acc ^= X.boundary_bits(b)
            if acc:
                problems.append(f"cell {cid}: boundary of boundary is {sorted(iter_bits(acc))}")
        if d == 0 and bd:
            problems.append(f"vertex {cid} has a nonempty boundary")
        if d == 1:
            if len(bd) != 2:
                problems.append(f"edge {cid} has {len(bd)} vertices")
            elif tuple(bd) != tuple(X.verts[cid] or ()):
                problems.append(f"edge {cid}: vertex pair {X.verts[cid]} disagrees with boundary {bd}")
        if d == 2:
            pairs = []
            for b in bd:
                if b < X.capacity and X.dims[b] == 1 and len(X.boundary[b]) == 2:
                    pairs.append(X.boundary[b])
            cyc = cycle_from_edges(pairs) if len(pairs) == len(bd) else None
            if cyc is None:
                problems.append(f"polygon {cid}: boundary is not one simple cycle")
            elif X.verts[cid] != cyc:
                problems.append(f"polygon {cid}: vertex cycle {X.verts[cid]} disagrees with boundary")
    for key, e in X._edge_index.items():
        if not X.alive[e] or X.verts[e] != key:
            problems.append(f"edge index entry {key} -> {e} is stale")
    return problems
