"""Chain contractions (f, g, phi) between cell complexes over Z/2."""
from __future__ import annotations

from dataclasses import dataclass

from .complex import CellComplex
from .gf2 import SparseLinearMap, iter_bits, to_bits


class ComplexMismatchError(ValueError):
    pass


def boundary_bits(X: CellComplex, bits: int, table: list[int] | None = None) -> int:
    """Boundary of a chain given as a bitset; ``table`` is a :func:`boundary_table`."""
    out = 0
    if table is None:
        for c in iter_bits(bits):
            out ^= to_bits(X.boundary[c])
    else:
        for c in iter_bits(bits):
            out ^= table[c]
    return out


def boundary_table(X: CellComplex) -> list[int]:
    """Boundary bitset of every cell id, for repeated boundary evaluations."""
    return [to_bits(bd) for bd in X.boundary]


@dataclass
class ChainContraction:
    """``f: C(source) -> C(target)``, ``g: C(target) -> C(source)`` and a
    homotopy ``phi`` on C(source) with fg = 1 and d.phi + phi.d = 1 + gf."""

    source: CellComplex
    target: CellComplex
    f: SparseLinearMap
    g: SparseLinearMap
    phi: SparseLinearMap

    @classmethod
    def identity(cls, X: CellComplex) -> "ChainContraction":
        return cls(X, X, SparseLinearMap(0, "identity"), SparseLinearMap(0, "identity"),
                   SparseLinearMap(1, "zero"))


def _alive(X: CellComplex, c: int) -> bool:
    return c < X.capacity and X.alive[c]


def compose_contractions(c1: ChainContraction, c2: ChainContraction) -> ChainContraction:
    """Contraction X -> X'' from c1: X -> X' and c2: X' -> X''.

    Maps are (f2 f1, g1 g2, phi1 + g1 phi2 f1).
    """
    if c1.target is not c2.source:
        raise ComplexMismatchError("c1.target must be c2.source")
    X, Z = c1.source, c2.target
    f1, g1, p1 = c1.f, c1.g, c1.phi
    f2, g2, p2 = c2.f, c2.g, c2.phi

    f = SparseLinearMap(0, "identity")
    for k, img in f1.entries.items():
        f.set(k, f2.apply_bits(img))
    for k, img in f2.entries.items():
        if k not in f1.entries and _alive(X, k):
            f.set(k, img)

    g = SparseLinearMap(0, "identity")
    for k, img in g2.entries.items():
        g.set(k, g1.apply_bits(img))
    for k, img in g1.entries.items():
        if k not in g2.entries and _alive(Z, k):
            g.set(k, img)

    phi = SparseLinearMap(1, "zero", p1.entries)
    keys = to_bits(p2.entries)
    candidates = {k for k, img in f1.entries.items() if img & keys}
    for k in p2.entries:
        if k not in f1.entries and _alive(X, k):
            candidates.add(k)
    for x in candidates:
        extra = g1.apply_bits(p2.apply_bits(f1.image(x)))
        phi.set(x, phi.image(x) ^ extra)
    return ChainContraction(X, Z, f, g, phi)


def check_contraction(c: ChainContraction, side_conditions: bool = True) -> list[str]:
    """Apply both sides of every contraction identity to every generator."""
    X, Y = c.source, c.target
    f, g, phi = c.f, c.g, c.phi
    problems: list[str] = []
    tx, ty = boundary_table(X), boundary_table(Y)
    for x in X.cells():
        fx = f.image(x)
        for y in iter_bits(fx):
            if not _alive(Y, y) or Y.dims[y] != X.dims[x]:
                problems.append(f"f({x}) contains {y}, not a cell of matching dimension in the target")
        if f.apply_ids(X.boundary[x]) != boundary_bits(Y, fx, ty):
            problems.append(f"f d != d' f on {x}")
        px = phi.image(x)
        ys = iter_bits(px)
        for y in ys:
            if not _alive(X, y) or X.dims[y] != X.dims[x] + 1:
                problems.append(f"phi({x}) contains {y}, not a source cell of dimension {X.dims[x] + 1}")
        lhs = phi.apply_ids(X.boundary[x])
        for y in ys:
            lhs ^= tx[y]
        rhs = (1 << x) ^ g.apply_bits(fx)
        if lhs != rhs:
            problems.append(f"d phi + phi d != 1 + g f on {x}")
        if side_conditions and ys:
            if phi.apply_ids(ys):
                problems.append(f"phi phi != 0 on {x}")
            if f.apply_ids(ys):
                problems.append(f"f phi != 0 on {x}")
    for y in Y.cells():
        gy = g.image(y)
        for x in iter_bits(gy):
            if not _alive(X, x) or X.dims[x] != Y.dims[y]:
                problems.append(f"g({y}) contains {x}, not a source cell of matching dimension")
        if g.apply_ids(Y.boundary[y]) != boundary_bits(X, gy, tx):
            problems.append(f"g d' != d g on {y}")
        if f.apply_bits(gy) != 1 << y:
            problems.append(f"f g != 1 on {y}")
        if side_conditions and phi.apply_bits(gy):
            problems.append(f"phi g != 0 on {y}")
    return problems
