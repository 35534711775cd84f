"""Cup products of degree-one classes evaluated on degree-two generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .atmodel import ATModel, dual_cocycle
from .complex import CellComplex
from .diagonal import polygon_cup_form, polygon_diagonal
from .gf2 import Cochain, TensorChain, iter_bits, tensor_evaluate

Diagonal = Callable[[CellComplex, int], TensorChain]


@dataclass
class CupPairing:
    """``full[k, i, j]`` is the value of mu_i cup mu_j on g(gamma_k).

    ``A`` keeps only the rows i < j, which is all the information since the
    form is symmetric with zero diagonal.
    """

    basis1: list[int]
    basis2: list[int]
    full: np.ndarray
    cocycles1: dict[int, int] = field(default_factory=dict, repr=False)
    diagonals: list[TensorChain] = field(default_factory=list, repr=False)

    @property
    def rows(self) -> list[tuple[int, int]]:
        n = len(self.basis1)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    @property
    def A(self) -> np.ndarray:
        rows = self.rows
        out = np.zeros((len(rows), len(self.basis2)), dtype=np.uint8)
        for r, (i, j) in enumerate(rows):
            out[r] = self.full[:, i, j]
        return out

    def entry(self, i: int, j: int, k: int) -> int:
        return int(self.full[k, i, j])

    def nonzero_triples(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, k) for (i, j) in self.rows for k in range(len(self.basis2))
                      if self.full[k, i, j])


@dataclass(frozen=True)
class ClassProduct:
    i: int
    j: int
    result: frozenset[int]
    structural_zero: bool = False


def diagonal_of_cycle(X: CellComplex, bits: int, diag: Diagonal) -> TensorChain:
    """Sum of diag over the 2-cells of a cycle, keeping the (1, 1) part."""
    terms: set = set()
    for c in iter_bits(bits):
        for t in diag(X, c).terms:
            if t[0][1] == 1 and t[1][1] == 1:
                terms ^= {t}
    return TensorChain(terms)


def _edge_masks(cocycles: list[int]) -> dict[int, int]:
    vec: dict[int, int] = {}
    for i, coc in enumerate(cocycles):
        for x in iter_bits(coc):
            vec[x] = vec.get(x, 0) | (1 << i)
    return vec


def _generic_form(diag: Diagonal):
    def form(X: CellComplex, c: int, vec: dict[int, int], rows: list[int]) -> None:
        for (l, dl), (r, dr) in diag(X, c).terms:
            if dl == 1 and dr == 1:
                left, right = vec.get(l, 0), vec.get(r, 0)
                if right:
                    for a in iter_bits(left):
                        rows[a] ^= right
    return form


# diagonals with a cheaper bilinear evaluation than term-by-term expansion
_FORMS = {polygon_diagonal: polygon_cup_form}


def cup_matrix(X: CellComplex, m: ATModel, diag: Diagonal, keep_diagonals: bool = True) -> CupPairing:
    """Evaluate every mu_i (x) mu_j on diag applied to every g(gamma_k).

    With ``keep_diagonals`` the (1, 1) tensor chains are stored for
    :func:`verify_structure`.
    """
    if m.complex is not X:
        raise ValueError("AT-model was computed on a different complex")
    basis1 = list(m.generators.get(1, []))
    basis2 = list(m.generators.get(2, []))
    n1, n2 = len(basis1), len(basis2)
    cocycles = [m.cocycles[s] for s in basis1]
    vec = _edge_masks(cocycles)
    form = _FORMS.get(diag) or _generic_form(diag)
    full = np.zeros((n2, n1, n1), dtype=np.uint8)
    diagonals = []
    for k, gamma in enumerate(basis2):
        rows = [0] * n1
        if n1:
            for c in iter_bits(m.cycles[gamma]):
                form(X, c, vec, rows)
        for a, bits in enumerate(rows):
            for b in iter_bits(bits):
                full[k, a, b] = 1
        if keep_diagonals:
            diagonals.append(diagonal_of_cycle(X, m.cycles[gamma], diag))
    return CupPairing(basis1, basis2, full, dict(zip(basis1, cocycles)), diagonals)


def class_product(cp: CupPairing, i: int, j: int) -> ClassProduct:
    n = len(cp.basis1)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"generator indices must lie in [0, {n})")
    if i == j:
        return ClassProduct(i, j, frozenset(), structural_zero=True)
    return ClassProduct(i, j, frozenset(k for k in range(len(cp.basis2)) if cp.full[k, i, j]))


def _gf2_rank(M: np.ndarray) -> int:
    M = (np.array(M, dtype=np.uint8) % 2).copy()
    rank = 0
    rows, cols = M.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if M[r, c]), None)
        if pivot is None:
            continue
        M[[rank, pivot]] = M[[pivot, rank]]
        hit = M[:, c].astype(bool)
        hit[rank] = False
        M[hit] ^= M[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def pairing_rank(cp: CupPairing) -> int:
    """Rank of the b1 x (b1 * b2) matrix [i, (j, k)] -> full[k, i, j].

    Invariant under changes of basis of both degree-one and degree-two
    classes; for one closed surface it is the rank of the intersection form.
    """
    n1, n2 = len(cp.basis1), len(cp.basis2)
    if not n1 or not n2:
        return 0
    wide = np.concatenate([cp.full[k] for k in range(n2)], axis=1)
    return _gf2_rank(wide)


@dataclass
class StructureReport:
    symmetric: bool
    squares_vanish: bool
    degrees_ok: bool
    problems: list[str]

    @property
    def ok(self) -> bool:
        return self.symmetric and self.squares_vanish and self.degrees_ok


def verify_structure(cp: CupPairing, m: ATModel | None = None) -> StructureReport:
    """Recompute A(j, i, k) and every cup square with tensor_evaluate."""
    problems: list[str] = []
    n1 = len(cp.basis1)
    if m is not None:
        cochains = [dual_cocycle(m, s) for s in cp.basis1]
    else:
        cochains = [Cochain.from_bits(1, cp.cocycles1[s]) for s in cp.basis1]
    symmetric = squares = True
    for k, T in enumerate(cp.diagonals):
        for i in range(n1):
            if tensor_evaluate(cochains[i], cochains[i], T):
                squares = False
                problems.append(f"square of class {i} is nonzero on generator {k}")
            for j in range(i + 1, n1):
                if tensor_evaluate(cochains[j], cochains[i], T) != cp.full[k, i, j]:
                    symmetric = False
                    problems.append(f"A({i},{j},{k}) != A({j},{i},{k})")
    degrees_ok = True
    if m is not None:
        high = [s for q, gens in m.generators.items() if q > 2 for s in gens]
        if high:
            degrees_ok = False
            problems.append(f"generators above degree 2: {high}")
    return StructureReport(symmetric, squares, degrees_ok, problems)
