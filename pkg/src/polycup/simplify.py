"""Surface simplification: critical vertices, cell merging and vertex removal.

Every structural change comes with an explicit chain contraction, so the
homology of the simplified complex P is tied to that of the cubical surface
by maps that can be checked generator by generator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product

from .complex import CellComplex, cycle_from_edges
from .contraction import ChainContraction
from .gf2 import SparseLinearMap, iter_bits, to_bits
from .ingest import VoxelImage

log = logging.getLogger(__name__)


class MergeError(ValueError):
    pass


class RemovalSkipped(Exception):
    """Base for the two ways a vertex removal can decline."""


class NotRemovable(RemovalSkipped):
    pass


class PinchedBoundary(RemovalSkipped):
    pass


# -- terminating conditions ---------------------------------------------------

@dataclass(frozen=True)
class MinEdges:
    """Keep merging around v while some polygon of its star has fewer than ``min_edges`` edges."""

    min_edges: int

    name = "min-edges"

    def wants(self, P: CellComplex, v: int, faces: list[int]) -> bool:
        return any(len(P.boundary[F]) < self.min_edges for F in faces)

    def describe(self) -> dict:
        return {"terminate": self.name, "min_edges": self.min_edges}


@dataclass(frozen=True)
class Coplanar:
    """Merge around v only when all polygons of its star lie in one plane."""

    name = "coplanar"

    def wants(self, P: CellComplex, v: int, faces: list[int]) -> bool:
        pts = {P.coords[u] for F in faces for u in P.verts[F]}
        return coplanar(pts)

    def describe(self) -> dict:
        return {"terminate": self.name}


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def coplanar(points) -> bool:
    """Exact integer test that all points lie in a common plane."""
    pts = sorted(points)
    if len(pts) <= 3:
        return True
    a = pts[0]
    normal = None
    for i in range(1, len(pts)):
        for j in range(i + 1, len(pts)):
            n = _cross(_sub(pts[i], a), _sub(pts[j], a))
            if n != (0, 0, 0):
                normal = n
                break
        if normal is not None:
            break
    if normal is None:
        return True
    return all(_dot(normal, _sub(p, a)) == 0 for p in pts)


# -- critical vertices --------------------------------------------------------

@dataclass
class CriticalitySet:
    tags: dict[int, set[str]] = field(default_factory=dict)

    def __contains__(self, v: int) -> bool:
        return v in self.tags

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self):
        return iter(sorted(self.tags))

    def flag(self, v: int, tag: str) -> None:
        self.tags.setdefault(v, set()).add(tag)


def _diagonal_pair(cells: list[tuple[int, ...]]) -> bool:
    a, b = cells
    return all(x != y for x, y in zip(a, b))


def find_critical_vertices(img: VoxelImage, dQ: CellComplex) -> CriticalitySet:
    """Flag surface vertices in configurations (i), (ii) and (iii)."""
    B = img.foreground
    crit = CriticalitySet()
    offsets = list(product((0, 1), repeat=3))
    for v in dQ.cells(0):
        x, y, z = dQ.coords[v]
        occ = {o: (x - 1 + o[0], y - 1 + o[1], z - 1 + o[2]) in B for o in offsets}
        inside = [o for o in offsets if occ[o]]
        outside = [o for o in offsets if not occ[o]]
        if len(inside) == 2 and _diagonal_pair(inside):
            crit.flag(v, "ii")
        if len(outside) == 2 and _diagonal_pair(outside):
            crit.flag(v, "iii")
        # the four cubes around each of the six edges at v
        for axis in range(3):
            for side in (0, 1):
                ring = [o for o in offsets if o[axis] == side]
                filled = [tuple(c for i, c in enumerate(o) if i != axis) for o in ring if occ[o]]
                if len(filled) == 2 and _diagonal_pair(filled):
                    crit.flag(v, "i")
    return crit


# -- merging ------------------------------------------------------------------

def merge_along(X: CellComplex, gamma: int, mu: int, mu2: int) -> tuple[CellComplex, ChainContraction]:
    """Merge the two cells ``mu`` and ``mu2`` sharing the facet ``gamma``.

    Returns the new complex (``mu``, ``mu2`` and ``gamma`` deleted, one new cell
    appended) and the contraction with f(gamma) = gamma + d(mu), f(mu) = 0,
    f(mu2) = merged, g(merged) = mu + mu2 and phi(gamma) = mu.
    """
    r = X.dims[gamma]
    for c in (gamma, mu, mu2):
        if c >= X.capacity or not X.alive[c]:
            raise MergeError(f"cell {c} is not alive")
    if mu == mu2 or X.dims[mu] != r + 1 or X.dims[mu2] != r + 1:
        raise MergeError("mu and mu2 must be distinct cells one dimension above gamma")
    if set(X.cofaces[gamma]) != {mu, mu2}:
        raise MergeError(f"cell {gamma} lies in {sorted(X.cofaces[gamma])}, not exactly in {{{mu}, {mu2}}}")
    Y = X.copy()
    new_bd = set(X.boundary[mu]) ^ set(X.boundary[mu2])
    upper = sorted(set(X.cofaces[mu]) | set(X.cofaces[mu2]))
    for c in upper:
        # d(d c) = 0 and gamma lies only in mu, mu2, so c contains both of them
        if not {mu, mu2} <= set(X.boundary[c]):
            raise MergeError(f"cell {c} contains only one of {mu}, {mu2}")
    Y.kill(mu)
    Y.kill(mu2)
    Y.kill(gamma)
    if r + 1 == 1:
        verts = tuple(sorted(new_bd))
    elif r + 1 == 2:
        verts = cycle_from_edges(Y.verts[e] for e in new_bd)
    else:
        verts = tuple(sorted(set(X.verts[mu] or ()) | set(X.verts[mu2] or ())))
    merged = Y.add_cell(r + 1, new_bd, verts=verts)
    for c in upper:
        Y.set_boundary(c, [b for b in X.boundary[c] if b not in (mu, mu2)] + [merged])
    f = SparseLinearMap(0, "identity", {
        gamma: (1 << gamma) ^ to_bits(X.boundary[mu]),
        mu: 0,
        mu2: 1 << merged,
    })
    g = SparseLinearMap(0, "identity", {merged: (1 << mu) | (1 << mu2)})
    phi = SparseLinearMap(1, "zero", {gamma: 1 << mu})
    return Y, ChainContraction(X, Y, f, g, phi)


def collapse_edge(X: CellComplex, v: int, e: int) -> tuple[CellComplex, ChainContraction]:
    """Elementary collapse of a free vertex ``v`` through its only edge ``e``."""
    if set(X.cofaces[v]) != {e} or X.cofaces[e]:
        raise MergeError(f"vertex {v} is not a free face of edge {e}")
    (w,) = [u for u in X.boundary[e] if u != v]
    Y = X.copy()
    Y.kill(e)
    Y.kill(v)
    f = SparseLinearMap(0, "identity", {v: 1 << w, e: 0})
    g = SparseLinearMap(0, "identity")
    phi = SparseLinearMap(1, "zero", {v: 1 << e})
    return Y, ChainContraction(X, Y, f, g, phi)


# -- vertex removal -------------------------------------------------------------

@dataclass
class _Removal:
    v: int
    edges: list[int]          # spokes in fan order e_0 .. e_{d-1}
    faces: list[int]          # F_i lies between e_i and e_{i+1}
    outer: list[int]          # non-spoke edges of each F_i as bitsets
    boundary: list[int]       # edges of the merged polygon
    cycle: tuple[int, ...]
    dangling: int             # e_0 and the edges shared by two star polygons, as a bitset
    inner: dict[int, tuple[int, int]]  # interior vertex -> (boundary vertex it collapses to, path)


def _plan_removal(P: CellComplex, v: int) -> _Removal:
    faces = P.incident_polygons(v)
    if len(faces) <= 2:
        raise NotRemovable(f"vertex {v} has {len(faces)} incident polygons")
    spokes = set(P.cofaces[v])
    face_spokes: dict[int, list[int]] = {}
    for F in faces:
        at_v = [e for e in P.boundary[F] if e in spokes]
        if len(at_v) != 2:
            raise PinchedBoundary(f"polygon {F} meets vertex {v} in {len(at_v)} edges")
        face_spokes[F] = at_v
    for e in spokes:
        if len(P.cofaces[e]) != 2:
            raise PinchedBoundary(f"edge {e} at vertex {v} has {len(P.cofaces[e])} polygons")
    e0 = min(spokes)
    edges, order = [e0], []
    F = min(P.cofaces[e0])
    e = e0
    while len(order) <= len(faces):
        order.append(F)
        a, b = face_spokes[F]
        e = b if a == e else a
        if e == e0:
            break
        edges.append(e)
        c1, c2 = P.cofaces[e]
        F = c2 if c1 == F else c1
    if len(order) != len(faces) or len(edges) != len(spokes) or len(set(order)) != len(order):
        raise PinchedBoundary(f"star of vertex {v} is not a single disk")

    outer = [to_bits(b for b in P.boundary[F] if b not in spokes) for F in order]
    seen = 0
    shared = 0
    for bits in outer:
        shared |= seen & bits
        seen ^= bits
    boundary = list(iter_bits(seen))
    cyc = cycle_from_edges(P.verts[b] for b in boundary)
    if cyc is None or v in cyc:
        raise PinchedBoundary(f"merged polygon around vertex {v} would not be a simple cycle")

    # Edges shared by two star polygons dangle once the polygons are merged.
    # Together with e_0 they must form a forest hanging off the new cycle.
    dangling = shared | (1 << e0)
    on_cycle = set(cyc)
    interior = {u for x in iter_bits(dangling | to_bits(spokes)) for u in P.boundary[x]} - on_cycle
    removed_edges = dangling | to_bits(spokes)
    for u in interior:
        if any(not (removed_edges >> x) & 1 for x in P.cofaces[u]):
            raise PinchedBoundary(f"vertex {u} inside the star of {v} has other edges")
    adj: dict[int, list[tuple[int, int]]] = {}
    for x in iter_bits(dangling):
        a, b = P.boundary[x]
        adj.setdefault(a, []).append((b, x))
        adj.setdefault(b, []).append((a, x))
    if bin(dangling).count("1") != len(interior):
        raise PinchedBoundary(f"star of vertex {v} does not collapse to a disk")
    inner: dict[int, tuple[int, int]] = {}
    stack = [(c, c, 0) for c in on_cycle if c in adj]
    used = 0
    while stack:
        u, root, path = stack.pop()
        for x, e in adj.get(u, ()):
            if (used >> e) & 1:
                continue
            used |= 1 << e
            if x in on_cycle or x in inner:
                raise PinchedBoundary(f"star of vertex {v} does not collapse to a disk")
            inner[x] = (root, path | (1 << e))
            stack.append((x, root, path | (1 << e)))
    if len(inner) != len(interior):
        raise PinchedBoundary(f"star of vertex {v} does not collapse to a disk")
    return _Removal(v, edges, order, outer, boundary, cyc, dangling, inner)


def _removal_maps(plan: _Removal, p: int) -> tuple[dict, dict, dict]:
    """Composite of the fan merges along e_1..e_{d-1} and the collapse of the
    dangling edges (e_0 and any edge shared by two polygons of the star)."""
    keep = ~plan.dangling
    f: dict[int, int] = {x: 0 for x in iter_bits(plan.dangling)}
    phi: dict[int, int] = {}
    for u, (root, path) in plan.inner.items():
        f[u] = 1 << root
        phi[u] = path
    acc_outer = 0
    acc_faces = 0
    for i, F in enumerate(plan.faces):
        if i > 0:
            f[plan.edges[i]] = acc_outer & keep
            phi[plan.edges[i]] = acc_faces
        acc_outer ^= plan.outer[i]
        acc_faces |= 1 << F
        f[F] = 0
    f[plan.faces[-1]] = 1 << p
    g = {p: acc_faces}
    return f, g, phi


def _apply_removal(P: CellComplex, plan: _Removal) -> int:
    for F in plan.faces:
        P.kill(F)
    for e in plan.edges:
        if P.alive[e]:
            P.kill(e)
    for e in iter_bits(plan.dangling):
        if P.alive[e]:
            P.kill(e)
    for u in plan.inner:
        P.kill(u)
    return P.add_cell(2, plan.boundary, verts=plan.cycle)


def remove_vertex(P: CellComplex, v: int) -> tuple[CellComplex, ChainContraction]:
    """Replace the star of ``v`` by one polygon.

    Raises :class:`NotRemovable` when v has at most two incident polygons and
    :class:`PinchedBoundary` when the merged polygon would not be a disk with
    a simple boundary cycle.
    """
    if v >= P.capacity or not P.alive[v] or P.dims[v] != 0:
        raise NotRemovable(f"{v} is not a live vertex")
    plan = _plan_removal(P, v)
    Y = P.copy()
    p = _apply_removal(Y, plan)
    f, g, phi = _removal_maps(plan, p)
    return Y, ChainContraction(P, Y, SparseLinearMap(0, "identity", f),
                               SparseLinearMap(0, "identity", g), SparseLinearMap(1, "zero", phi))


class _Accumulator:
    """Running composite of removal contractions from a fixed source complex.

    Keeps a reverse index of f so each step only touches the source cells
    whose image meets the cells being removed.
    """

    def __init__(self, source: CellComplex):
        self.source = source
        self.f: dict[int, int] = {}
        self.g: dict[int, int] = {}
        self.phi: dict[int, int] = {}
        self.rev: dict[int, set[int]] = {}
        self.n_source = source.capacity

    def _preimage(self, k: int) -> set[int]:
        out = set(self.rev.get(k, ()))
        if k < self.n_source and k not in self.f and self.source.alive[k]:
            out.add(k)
        return out

    def _g_image(self, bits: int) -> int:
        out = 0
        for y in iter_bits(bits):
            out ^= self.g.get(y, 1 << y)
        return out

    def push(self, f_loc: dict, g_loc: dict, phi_loc: dict) -> None:
        pre = {k: self._preimage(k) for k in f_loc}
        for k, img in phi_loc.items():
            if not pre[k]:
                continue
            lifted = self._g_image(img)
            for x in pre[k]:
                p = self.phi.get(x, 0) ^ lifted
                if p:
                    self.phi[x] = p
                else:
                    self.phi.pop(x, None)
        for k, img in f_loc.items():
            delta = (1 << k) ^ img
            for x in pre[k]:
                old = self.f.get(x, 1 << x)
                new = old ^ delta
                self.f[x] = new
                for y in iter_bits(delta):
                    if (new >> y) & 1:
                        self.rev.setdefault(y, set()).add(x)
                    else:
                        s = self.rev.get(y)
                        if s is not None:
                            s.discard(x)
            self.rev.pop(k, None)
        for p, img in g_loc.items():
            lifted = 0
            for y in iter_bits(img):
                lifted ^= self.g.pop(y, 1 << y)
            self.g[p] = lifted

    def contraction(self, target: CellComplex) -> ChainContraction:
        f = SparseLinearMap(0, "identity")
        for x, img in self.f.items():
            f.set(x, img)
        g = SparseLinearMap(0, "identity")
        for y, img in self.g.items():
            if target.alive[y]:
                g.set(y, img)
        phi = SparseLinearMap(1, "zero", {x: p for x, p in self.phi.items() if p})
        return ChainContraction(self.source, target, f, g, phi)


def _neighbours(P: CellComplex, v: int) -> list[int]:
    out = []
    for e in P.cofaces[v]:
        a, b = P.boundary[e]
        out.append(b if a == v else a)
    return out


def _sweep_order(P: CellComplex, pending: list[int], termination):
    """Sort key: most incident edges first; among equals, vertices with more
    neighbours that will never be processed come first, then by id.

    A vertex left with two edges, both to such neighbours, can never be
    removed, so those vertices are handled while they still have slack.
    """
    candidates = set(pending)
    wants = {v: termination.wants(P, v, P.incident_polygons(v)) for v in pending}
    key = {}
    for v in pending:
        fixed = sum(1 for u in _neighbours(P, v) if u not in candidates or not wants[u])
        key[v] = (-len(P.cofaces[v]), -fixed, v)
    return key.__getitem__


@dataclass
class SimplifyStats:
    removed: int = 0
    skipped_pinched: int = 0
    sweeps: int = 0


def simplify(dQ: CellComplex, img: VoxelImage, termination=None,
             critical: CriticalitySet | None = None,
             stats: SimplifyStats | None = None) -> tuple[CellComplex, ChainContraction]:
    """Merge polygons around non-critical vertices until a sweep changes nothing.

    Criticality is evaluated once on the cubical surface.  Each sweep visits
    the remaining candidate vertices by decreasing number of incident edges
    (see :func:`_sweep_order` for ties).
    """
    termination = termination or Coplanar()
    if critical is None:
        critical = find_critical_vertices(img, dQ)
    stats = stats if stats is not None else SimplifyStats()
    P = dQ.copy()
    acc = _Accumulator(dQ)
    pending = [v for v in dQ.cells(0) if v not in critical]
    while pending:
        stats.sweeps += 1
        pending = [v for v in pending if P.alive[v]]
        pending.sort(key=_sweep_order(P, pending, termination))
        keep = []
        accepted = 0
        for v in pending:
            if not P.alive[v]:
                continue
            faces = P.incident_polygons(v)
            if len(faces) <= 2 or not termination.wants(P, v, faces):
                keep.append(v)
                continue
            try:
                plan = _plan_removal(P, v)
            except PinchedBoundary:
                stats.skipped_pinched += 1
                keep.append(v)
                continue
            p = _apply_removal(P, plan)
            acc.push(*_removal_maps(plan, p))
            accepted += 1
        stats.removed += accepted
        pending = keep
        log.debug("sweep %d: %d removals, %d candidates left", stats.sweeps, accepted, len(pending))
        if not accepted:
            break
    return P, acc.contraction(P)
