"""AT-models: chain contractions onto a graded set of homology generators.

An AT-model of a complex X stores

* ``cocycles[s]``: the set of cells x whose image f(x) contains generator s
  (so ``f`` is kept transposed, which is exactly the dual cocycle of s),
* ``cycles[s]``: the representative cycle g(s),
* ``phi[x]``: the chain homotopy, only nonzero entries.

Generator labels are plain integers; after transport along a contraction
they keep the labels of the complex they were computed on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complex import CellComplex
from .contraction import ChainContraction, ComplexMismatchError, boundary_bits, boundary_table
from .gf2 import Chain, Cochain, iter_bits, parity, to_bits


class NotAGeneratorError(KeyError):
    pass


@dataclass
class ATModel:
    complex: CellComplex
    generators: dict[int, list[int]]
    gen_dim: dict[int, int]
    cocycles: dict[int, int]
    cycles: dict[int, int]
    phi: dict[int, int] = field(default_factory=dict)

    def f_bits(self, x: int) -> list[int]:
        """Generators occurring in f(x)."""
        return [s for s, coc in self.cocycles.items() if (coc >> x) & 1]

    def f_of_chain(self, bits: int) -> list[int]:
        return [s for s, coc in self.cocycles.items() if parity(coc & bits)]

    def phi_bits(self, bits: int) -> int:
        out = 0
        for x in iter_bits(bits):
            out ^= self.phi.get(x, 0)
        return out

    def g(self, s: int) -> Chain:
        return Chain.from_bits(self.gen_dim[s], self.cycles[s])


def compute_at_model(X: CellComplex) -> ATModel:
    """Incremental AT-model over the (dimension, id) filtration of X.

    A cell whose boundary maps to zero under f becomes a new generator;
    otherwise it kills the youngest generator in f(boundary).
    """
    fwd: dict[int, int] = {}      # x -> f(x) as a bitset over generator labels
    cocycles: dict[int, int] = {}
    cycles: dict[int, int] = {}
    phi: dict[int, int] = {}
    alive_gens: set[int] = set()
    for s in X.filtration():
        bd = X.boundary[s]
        lam = 0
        phi_bd = 0
        for b in bd:
            lam ^= fwd.get(b, 0)
            phi_bd ^= phi.get(b, 0)
        if not lam:
            alive_gens.add(s)
            fwd[s] = 1 << s
            cocycles[s] = 1 << s
            cycles[s] = (1 << s) ^ phi_bd
            continue
        tau = lam.bit_length() - 1
        killer = (1 << s) ^ phi_bd
        support = cocycles.pop(tau)
        cycles.pop(tau)
        alive_gens.discard(tau)
        for other in iter_bits(lam ^ (1 << tau)):
            cocycles[other] ^= support
        for x in iter_bits(support):
            fwd[x] ^= lam
            p = phi.get(x, 0) ^ killer
            if p:
                phi[x] = p
            else:
                phi.pop(x, None)
    generators: dict[int, list[int]] = {q: [] for q in range(4)}
    gen_dim = {}
    for s in sorted(alive_gens):
        generators[X.dims[s]].append(s)
        gen_dim[s] = X.dims[s]
    return ATModel(X, generators, gen_dim, cocycles, cycles, phi)


def betti(m: ATModel) -> tuple[int, int, int]:
    return tuple(len(m.generators.get(q, [])) for q in range(3))


def dual_cocycle(m: ATModel, s: int) -> Cochain:
    if s not in m.cocycles:
        raise NotAGeneratorError(s)
    return Cochain.from_bits(m.gen_dim[s], m.cocycles[s])


def check_at_model(m: ATModel) -> list[str]:
    """Every AT-model identity applied to every cell and generator."""
    X = m.complex
    problems: list[str] = []
    table = boundary_table(X)
    gens = [s for q in sorted(m.generators) for s in m.generators[q]]
    fx: dict[int, list[int]] = {}
    for s in gens:
        coc, cyc, d = m.cocycles[s], m.cycles[s], m.gen_dim[s]
        cob = 0
        for x in iter_bits(coc):
            if not X.alive[x] or X.dims[x] != d:
                problems.append(f"cocycle of {s} contains {x} of wrong dimension or dead")
                continue
            fx.setdefault(x, []).append(s)
            for c in X.cofaces[x]:
                cob ^= 1 << c
        if cob:
            # f d(x) = <cocycle, d x> = (delta cocycle)(x)
            problems.append(f"f d contains {s} on cells {list(iter_bits(cob))[:5]}")
        for x in iter_bits(cyc):
            if not X.alive[x] or X.dims[x] != d:
                problems.append(f"cycle of {s} contains {x} of wrong dimension or dead")
        if boundary_bits(X, cyc, table):
            problems.append(f"g({s}) is not a cycle")
        for t in gens:
            if parity(m.cocycles[t] & cyc) != (s == t):
                problems.append(f"f g({s}) has wrong coefficient on {t}")
        if m.phi_bits(cyc):
            problems.append(f"phi g({s}) != 0")
    phi = m.phi
    for x in X.cells():
        px = phi.get(x, 0)
        lhs = hit = phi_phi = 0
        if px:
            # one pass over phi(x) for d phi(x), f phi(x) and phi phi(x)
            for y in iter_bits(px):
                lhs ^= table[y]
                phi_phi ^= phi.get(y, 0)
                for s in fx.get(y, ()):
                    hit ^= 1 << gens.index(s)
        for b in X.boundary[x]:
            lhs ^= phi.get(b, 0)
        rhs = 1 << x
        for s in fx.get(x, ()):
            rhs ^= m.cycles[s]
        if lhs != rhs:
            problems.append(f"d phi + phi d != 1 + g f on {x}")
        if hit:
            problems.append(f"f phi({x}) != 0")
        if phi_phi:
            problems.append(f"phi phi != 0 on {x}")
    return problems


def _alive_mask(X: CellComplex) -> int:
    return to_bits(X.cells())


def transport_at_model(c: ChainContraction, m: ATModel) -> ATModel:
    """Move an AT-model across a contraction.

    If ``m`` lives on ``c.source`` the result lives on ``c.target`` with
    maps (f' g, f g', f phi' g); if ``m`` lives on ``c.target`` the result
    lives on ``c.source`` with maps (f'' f, g g'', phi + g phi'' f).
    """
    if m.complex is c.source:
        return _to_target(c, m)
    if m.complex is c.target:
        return _to_source(c, m)
    raise ComplexMismatchError("AT-model belongs to neither end of the contraction")


def _pullback(cocycle: int, mp, mask: int) -> int:
    """{x : parity(map(x) & cocycle) = 1} for a map with identity default."""
    out = cocycle & mask
    for x, img in mp.entries.items():
        if (mask >> x) & 1:
            if parity(img & cocycle):
                out |= 1 << x
            else:
                out &= ~(1 << x)
    return out


def _to_source(c: ChainContraction, m: ATModel) -> ATModel:
    X = c.source
    mask = _alive_mask(X)
    cocycles = {s: _pullback(coc, c.f, mask) for s, coc in m.cocycles.items()}
    cycles = {s: c.g.apply_bits(cyc) for s, cyc in m.cycles.items()}
    phi = dict(c.phi.entries)
    keys = to_bits(m.phi)
    candidates = {x for x, img in c.f.entries.items() if img & keys}
    candidates.update(k for k in m.phi if k not in c.f.entries and (mask >> k) & 1)
    for x in candidates:
        inner = 0
        for y in iter_bits(c.f.image(x)):
            inner ^= m.phi.get(y, 0)
        p = phi.get(x, 0) ^ c.g.apply_bits(inner)
        if p:
            phi[x] = p
        else:
            phi.pop(x, None)
    return ATModel(X, {q: list(v) for q, v in m.generators.items()}, dict(m.gen_dim), cocycles, cycles, phi)


def _to_target(c: ChainContraction, m: ATModel) -> ATModel:
    Y = c.target
    mask = _alive_mask(Y)
    cocycles = {s: _pullback(coc, c.g, mask) for s, coc in m.cocycles.items()}
    cycles = {s: c.f.apply_bits(cyc) for s, cyc in m.cycles.items()}
    phi: dict[int, int] = {}
    keys = to_bits(m.phi)
    candidates = {y for y, img in c.g.entries.items() if img & keys}
    candidates.update(k for k in m.phi if k not in c.g.entries and (mask >> k) & 1)
    for y in candidates:
        inner = 0
        for x in iter_bits(c.g.image(y)):
            inner ^= m.phi.get(x, 0)
        p = c.f.apply_bits(inner)
        if p:
            phi[y] = p
    return ATModel(Y, {q: list(v) for q, v in m.generators.items()}, dict(m.gen_dim), cocycles, cycles, phi)


def _rank(columns: list[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = col
                rank += 1
                break
            col ^= p
    return rank


def rank_oracle(X: CellComplex) -> tuple[int, int, int]:
    """Betti numbers by plain Gaussian elimination of the boundary matrices."""
    n = X.counts()
    ranks = [0] * 5
    for q in (1, 2, 3):
        ranks[q] = _rank([X.boundary_bits(c) for c in X.cells(q)])
    return tuple(n[q] - ranks[q] - ranks[q + 1] for q in range(3))


def representative_cycles(m: ATModel, dim: int) -> list[Chain]:
    return [Chain.from_bits(dim, m.cycles[s]) for s in m.generators.get(dim, [])]

