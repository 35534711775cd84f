"""Diagonal approximations on polygons, simplices and lattice squares.

Everything is first computed on *labels*: a vertex is ``(a,)``, an edge the
sorted pair ``(a, b)`` and a polygon its vertex tuple.  The ``X``-level
functions resolve labels to cell ids of a complex.
"""
from __future__ import annotations

from .complex import CellComplex
from .gf2 import TensorChain


class MalformedPolygonError(ValueError):
    pass


class NotASquareError(ValueError):
    pass


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _dim(label: tuple) -> int:
    return min(len(label) - 1, 2)


def _term(left: tuple, right: tuple):
    return ((left, _dim(left)), (right, _dim(right)))


def _check_tuple(labels) -> tuple[int, ...]:
    L = tuple(int(a) for a in labels)
    if len(L) < 3:
        raise MalformedPolygonError(f"a polygon needs at least 3 vertices, got {L}")
    if len(set(L)) != len(L):
        raise MalformedPolygonError(f"repeated vertex in {L}")
    if L[0] != min(L):
        raise MalformedPolygonError(f"{L} does not start at its minimum vertex")
    return L


def formula_terms(labels) -> TensorChain:
    """The polygon diagonal on ``<i_1, ..., i_k>`` as a label-level tensor chain."""
    L = _check_tuple(labels)
    k = len(L)
    i = (None,) + L                      # 1-based: i[1] .. i[k]
    u = lambda j: _edge(i[1], i[j])
    e = lambda j: _edge(i[j], i[j + 1])
    lam = lambda j: 0 if i[j] < i[j + 1] else 1
    m = max(range(2, k + 1), key=lambda j: i[j])
    terms = [_term((i[1],), L), _term(L, (i[m],))]
    for j in range(2, m):
        left = [u(2)] + [e(r) for r in range(2, j)]
        if lam(j):
            left.append(e(j))
        terms += [_term(x, e(j)) for x in left]
    for j in range(m, k):
        left = [e(r) for r in range(j + 1, k)] + [u(k)]
        if not lam(j):
            left.append(e(j))
        terms += [_term(x, e(j)) for x in left]
    return TensorChain(terms)


def aw_diagonal(simplex, label: tuple | None = None) -> TensorChain:
    """Alexander-Whitney diagonal of a vertex-ordered simplex of dimension <= 2.

    ``label`` names the 2-cell when it differs from the sorted vertex tuple.
    """
    s = tuple(int(a) for a in simplex)
    if not 1 <= len(s) <= 3:
        raise ValueError(f"only simplices of dimension 0, 1, 2 are supported, got {s}")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise ValueError(f"simplex vertices must be strictly increasing, got {s}")
    top = label if (label is not None and len(s) == 3) else s
    faces = [s[: r + 1] for r in range(len(s))]
    tails = [s[r:] for r in range(len(s))]
    faces[-1] = top
    tails[0] = top
    return TensorChain(_term(faces[r], tails[r]) for r in range(len(s)))


def _apply_f(f: dict, t: TensorChain) -> TensorChain:
    """(f (x) f) for a label map with identity default (missing keys)."""
    out = []
    for (l, _), (r, _) in t.terms:
        for a in f.get(l, [l]):
            for b in f.get(r, [r]):
                out.append(_term(a, b))
    return TensorChain(out)


def aw_fan_terms(labels) -> TensorChain:
    """Coproduct induced on the polygon from A-W on its fan triangulation.

    Triangles ``t_{j-1} = <i_1, i_j, i_{j+1}>`` are merged one at a time into
    ``p_{j-1} = <i_1, ..., i_{j+1}>`` along ``u_j``; each merge is a chain
    contraction and the running diagonal is pushed through its f.
    """
    L = _check_tuple(labels)
    k = len(L)
    i = (None,) + L
    D = aw_diagonal(sorted(L[:3]), label=L[:3])
    for j in range(3, k):
        prev, new = L[:j], L[: j + 1]
        t = (i[1], i[j], i[j + 1])
        uj = _edge(i[1], i[j])
        D = D + aw_diagonal(sorted(t), label=t)
        if i[j + 1] > max(L[1:j]):
            # p_{j-2} is removed: f(u_j) = u_j + d p_{j-2}
            rest = [_edge(i[1], i[2])] + [_edge(i[r], i[r + 1]) for r in range(2, j)]
            f = {uj: rest, prev: [], t: [new]}
        else:
            # the triangle is removed: f(u_j) = u_j + d t = e_j + u_{j+1}
            f = {uj: [_edge(i[j], i[j + 1]), _edge(i[1], i[j + 1])], t: [], prev: [new]}
        D = _apply_f(f, D)
    return D


def label_boundary(label: tuple) -> list[tuple]:
    if len(label) == 1:
        return []
    if len(label) == 2:
        return [(label[0],), (label[1],)]
    return [_edge(a, b) for a, b in zip(label, label[1:] + label[:1])]


def tensor_boundary_labels(t: TensorChain) -> TensorChain:
    """(d (x) 1 + 1 (x) d) on a label-level tensor chain."""
    out = []
    for (l, _), (r, _) in t.terms:
        out += [_term(x, r) for x in label_boundary(l)]
        out += [_term(l, x) for x in label_boundary(r)]
    return TensorChain(out)


# -- complex-level --------------------------------------------------------------

def _resolver(X: CellComplex, p: int, L: tuple):
    def cell(label: tuple) -> int:
        if len(label) == 1:
            return label[0]
        if len(label) == 2:
            e = X.edge_between(*label)
            if e is None:
                raise MalformedPolygonError(f"vertices {label} of polygon {p} are not joined by an edge")
            return e
        if label != L:
            raise MalformedPolygonError(f"unexpected 2-cell label {label} on polygon {p}")
        return p
    return cell


def _polygon_tuple(X: CellComplex, p: int) -> tuple[int, ...]:
    if p >= X.capacity or not X.alive[p] or X.dims[p] != 2:
        raise MalformedPolygonError(f"{p} is not a live polygon")
    return _check_tuple(X.verts[p])


def polygon_diagonal(X: CellComplex, p: int) -> TensorChain:
    """The polygon formula on a 2-cell of X, as a tensor chain of cell ids."""
    L = _polygon_tuple(X, p)
    return formula_terms(L).map_cells(_resolver(X, p, L))


def aw_fan_oracle(X: CellComplex, p: int) -> TensorChain:
    L = _polygon_tuple(X, p)
    return aw_fan_terms(L).map_cells(_resolver(X, p, L))


def vertex_diagonal(v: int) -> TensorChain:
    return TensorChain([((v, 0), (v, 0))])


def edge_diagonal(X: CellComplex, e: int) -> TensorChain:
    """A-W on an edge with its smaller vertex first."""
    a, b = sorted(X.boundary[e])
    return TensorChain([((a, 0), (e, 1)), ((e, 1), (b, 0))])


def _square_frame(X: CellComplex, q: int):
    if X.dims[q] != 2 or len(X.verts[q]) != 4:
        raise NotASquareError(f"cell {q} is not a quadrilateral")
    pts = [X.coords[v] for v in X.verts[q]]
    if any(p is None for p in pts):
        raise NotASquareError(f"cell {q} has vertices without coordinates")
    lo = tuple(min(c) for c in zip(*pts))
    hi = tuple(max(c) for c in zip(*pts))
    span = [h - l for l, h in zip(lo, hi)]
    if sorted(span) != [0, 1, 1]:
        raise NotASquareError(f"cell {q} is not an axis-aligned unit square")
    b, c = [a for a in range(3) if span[a] == 1]
    expected = set()
    for db in (0, 1):
        for dc in (0, 1):
            pt = list(lo)
            pt[b] += db
            pt[c] += dc
            expected.add(tuple(pt))
    if set(pts) != expected:
        raise NotASquareError(f"cell {q} is not an axis-aligned unit square")
    return lo, b, c


def serre_diagonal_square(X: CellComplex, q: int) -> TensorChain:
    """Serre diagonal of a lattice square with axes b < c and lower corner o:

    o (x) q + [b = o_b] (x) [c = o_c + 1] + [c = o_c] (x) [b = o_b + 1] + q (x) (o + 1, 1)

    where ``[b = t]`` is the side of q along the c axis at b-coordinate t.
    """
    lo, b, c = _square_frame(X, q)
    by_coord = {X.coords[v]: v for v in X.verts[q]}

    def vert(db: int, dc: int) -> int:
        pt = list(lo)
        pt[b] += db
        pt[c] += dc
        return by_coord[tuple(pt)]

    def edge(v1: int, v2: int) -> int:
        e = X.edge_between(v1, v2)
        if e is None:
            raise NotASquareError(f"square {q} is missing the edge {v1}-{v2}")
        return e

    o, far = vert(0, 0), vert(1, 1)
    side_b0 = edge(vert(0, 0), vert(0, 1))   # b = o_b, c varies
    side_b1 = edge(vert(1, 0), vert(1, 1))   # b = o_b + 1
    side_c0 = edge(vert(0, 0), vert(1, 0))   # c = o_c, b varies
    side_c1 = edge(vert(0, 1), vert(1, 1))   # c = o_c + 1
    return TensorChain([
        ((o, 0), (q, 2)),
        ((side_b0, 1), (side_c1, 1)),
        ((side_c0, 1), (side_b1, 1)),
        ((q, 2), (far, 0)),
    ])


def tensor_boundary(X: CellComplex, t: TensorChain) -> TensorChain:
    """(d (x) 1 + 1 (x) d) on a tensor chain of cell ids."""
    out = []
    for (l, dl), (r, dr) in t.terms:
        out += [((x, dl - 1), (r, dr)) for x in X.boundary[l]]
        out += [((l, dl), (x, dr - 1)) for x in X.boundary[r]]
    return TensorChain(out)


def coderivation_defect(X: CellComplex, p: int, diag) -> TensorChain:
    """(d (x) 1 + 1 (x) d) diag(p) minus the A-W diagonal of d p; zero when compatible."""
    out = tensor_boundary(X, diag(X, p))
    for e in X.boundary[p]:
        out = out + edge_diagonal(X, e)
    return out


def closure(X: CellComplex, p: int) -> set[int]:
    cells = {p}
    frontier = [p]
    while frontier:
        nxt = []
        for c in frontier:
            for b in X.boundary[c]:
                if b not in cells:
                    cells.add(b)
                    nxt.append(b)
        frontier = nxt
    return cells


def contained_in_closure(X: CellComplex, p: int, t: TensorChain) -> bool:
    cl = closure(X, p)
    return all(l in cl and r in cl for (l, _), (r, _) in t.terms)


def polygon_cup_form(X: CellComplex, p: int, vec: dict[int, int], rows: list[int]) -> None:
    """Add the (1, 1) part of the polygon diagonal, evaluated bilinearly, into ``rows``.

    ``vec[e]`` is the bitmask of degree-one cocycles containing edge e;
    afterwards ``rows[a]`` has bit b toggled once per term l (x) r with a in
    vec[l] and b in vec[r].  Same value as expanding :func:`polygon_diagonal`
    and evaluating each term, in O(k) mask operations instead of O(k^2).
    """
    L = _polygon_tuple(X, p)
    k = len(L)
    i = (None,) + L
    w = [0] * (k + 1)                     # w[j] = vec(e_j), e_k = <i_k, i_1> = u_k
    for j in range(1, k + 1):
        e = X.edge_between(i[j], i[j % k + 1])
        if e is None:
            raise MalformedPolygonError(f"vertices {i[j]}, {i[j % k + 1]} of polygon {p} are not joined by an edge")
        w[j] = vec.get(e, 0)
    m = max(range(2, k + 1), key=lambda j: i[j])

    def add(left: int, right: int) -> None:
        if not right:
            return
        while left:
            a = left.bit_length() - 1
            rows[a] ^= right
            left ^= 1 << a

    prefix = w[1]                          # u_2 + e_2 + ... + e_{j-1}
    for j in range(2, m):
        add(prefix ^ (w[j] if i[j] > i[j + 1] else 0), w[j])
        prefix ^= w[j]
    suffix = w[k]                          # e_{j+1} + ... + e_{k-1} + u_k
    for j in range(k - 1, m - 1, -1):
        add(suffix ^ (w[j] if i[j] < i[j + 1] else 0), w[j])
        suffix ^= w[j]
