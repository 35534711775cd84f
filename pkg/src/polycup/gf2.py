"""Z/2 linear algebra on cell identifiers.

Chains and cochains are sets of cell ids with mod-2 addition.  Internally
everything reduces to Python integers used as packed bitsets (bit ``i`` set
means cell ``i`` has coefficient 1); the :class:`Chain` wrapper keeps small
sparse supports as sorted id tuples and switches to the packed form once the
support is dense enough.
"""
from __future__ import annotations

from bisect import bisect_left
from typing import Callable, Hashable, Iterable, Iterator, Mapping

# support density (|support| / (max id + 1)) at which chains switch to packed words
PACK_THRESHOLD = 1.0 / 64


class DimensionError(ValueError):
    """Raised when two operands live in different degrees."""


def iter_bits(n: int) -> list[int]:
    """Positions of the set bits of ``n`` in increasing order."""
    if not n & (n - 1):
        # zero or a single bit: the common case for cell images
        if n > 0:
            return [n.bit_length() - 1]
        if n == 0:
            return []
        raise ValueError("bitsets are non-negative")
    if n < 0:
        raise ValueError("bitsets are non-negative")
    if n.bit_length() > 4096 and n.bit_count() > 64:
        s = bin(n)[:1:-1]
        out = []
        i = s.find("1")
        while i != -1:
            out.append(i)
            i = s.find("1", i + 1)
        return out
    out = []
    while n:
        top = n.bit_length() - 1
        out.append(top)
        n ^= 1 << top
    out.reverse()
    return out


bits_list = iter_bits


def to_bits(ids: Iterable[int]) -> int:
    """Pack ids into a bitset, mod 2 (repeated ids cancel)."""
    n = 0
    for i in ids:
        n ^= 1 << i
    return n


def parity(n: int) -> int:
    return n.bit_count() & 1


class _Z2Vector:
    __slots__ = ("dim", "_ids", "_bits")

    def __init__(self, dim: int, support: Iterable[int] = ()):
        self.dim = int(dim)
        self._ids: tuple[int, ...] | None = None
        self._bits: int | None = None
        self._store(to_bits(support))

    @classmethod
    def from_bits(cls, dim: int, bits: int):
        obj = cls.__new__(cls)
        obj.dim = int(dim)
        obj._ids = None
        obj._bits = None
        obj._store(bits)
        return obj

    def _store(self, bits: int) -> None:
        count = bits.bit_count()
        if count and count >= PACK_THRESHOLD * bits.bit_length():
            self._bits = bits
            self._ids = None
        else:
            self._ids = tuple(sorted(iter_bits(bits)))
            self._bits = None

    @property
    def is_packed(self) -> bool:
        return self._bits is not None

    @property
    def bits(self) -> int:
        if self._bits is not None:
            return self._bits
        return to_bits(self._ids)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self)

    def __iter__(self) -> Iterator[int]:
        if self._ids is not None:
            return iter(self._ids)
        return iter(bits_list(self._bits))

    def __len__(self) -> int:
        if self._ids is not None:
            return len(self._ids)
        return self._bits.bit_count()

    def __contains__(self, cell: int) -> bool:
        if self._ids is not None:
            i = bisect_left(self._ids, cell)
            return i < len(self._ids) and self._ids[i] == cell
        return bool((self._bits >> cell) & 1)

    def __bool__(self) -> bool:
        return len(self) > 0

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.dim == other.dim and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.dim, self.bits))

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.dim != other.dim:
            raise DimensionError(f"cannot add degree {self.dim} and degree {other.dim}")
        return type(self).from_bits(self.dim, self.bits ^ other.bits)

    __xor__ = __add__

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.dim}, {sorted(self)})"


class Chain(_Z2Vector):
    """A q-chain: finite set of q-cells."""

    __slots__ = ()


class Cochain(_Z2Vector):
    """A q-cochain given by the characteristic function of its support."""

    __slots__ = ()

    def __call__(self, chain: Chain) -> int:
        return evaluate(self, chain)


def chain_add(a: Chain, b: Chain) -> Chain:
    return a + b


def evaluate(c: Cochain, a: Chain) -> int:
    if c.dim != a.dim:
        raise DimensionError(f"cochain of degree {c.dim} applied to chain of degree {a.dim}")
    return parity(c.bits & a.bits)


Term = tuple[tuple[Hashable, int], tuple[Hashable, int]]


class TensorChain:
    """Mod-2 formal sum of ``left (x) right`` terms.

    Each term is ``((left, left_dim), (right, right_dim))``; the cells may be
    integer ids or any hashable label.  Terms occurring an even number of
    times cancel on construction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        acc: set = set()
        for t in terms:
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def _raw(cls, terms: frozenset) -> "TensorChain":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    def __add__(self, other: "TensorChain") -> "TensorChain":
        return TensorChain._raw(self.terms ^ other.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorChain):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def bidegree(self, p: int, q: int) -> "TensorChain":
        return TensorChain._raw(frozenset(t for t in self.terms if t[0][1] == p and t[1][1] == q))

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(t[0][1], t[1][1]) for t in self.terms}

    def map_cells(self, fn: Callable[[Hashable], Hashable]) -> "TensorChain":
        return TensorChain(((fn(l), dl), (fn(r), dr)) for (l, dl), (r, dr) in self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{l}(x){r}" for (l, _), (r, _) in sorted(self.terms, key=repr))
        return f"TensorChain({body or '0'})"


def tensor(left: Iterable[Hashable], ldim: int, right: Iterable[Hashable], rdim: int) -> TensorChain:
    """Bilinear expansion of ``(sum left) (x) (sum right)``."""
    right = list(right)
    return TensorChain(((l, ldim), (r, rdim)) for l in left for r in right)


def tensor_evaluate(c1: Cochain, c2: Cochain, t: TensorChain) -> int:
    total = 0
    for (l, dl), (r, dr) in t.terms:
        if dl == c1.dim and dr == c2.dim and l in c1 and r in c2:
            total ^= 1
    return total


class SparseLinearMap:
    """Linear map on chains that stores only non-default images.

    ``default`` is ``"identity"`` or ``"zero"``; images are packed bitsets.
    ``shift`` is the degree change (0 for chain maps, +1 for homotopies).
    """

    __slots__ = ("shift", "default", "entries")

    def __init__(self, shift: int = 0, default: str = "identity", entries: Mapping[int, int] | None = None):
        if default not in ("identity", "zero"):
            raise ValueError(f"unknown default {default!r}")
        if default == "identity" and shift != 0:
            raise ValueError("identity default requires degree shift 0")
        self.shift = shift
        self.default = default
        self.entries: dict[int, int] = dict(entries or {})

    def image(self, cell: int) -> int:
        img = self.entries.get(cell)
        if img is not None:
            return img
        return 1 << cell if self.default == "identity" else 0

    def apply_bits(self, bits: int) -> int:
        if not bits:
            return 0
        entries = self.entries
        if self.default == "identity":
            out = bits
            if len(entries) < bits.bit_count():
                for k, img in entries.items():
                    if (bits >> k) & 1:
                        out ^= (1 << k) ^ img
            else:
                for k in iter_bits(bits):
                    img = entries.get(k)
                    if img is not None:
                        out ^= (1 << k) ^ img
            return out
        out = 0
        if len(entries) < bits.bit_count():
            for k, img in entries.items():
                if (bits >> k) & 1:
                    out ^= img
        else:
            for k in iter_bits(bits):
                img = entries.get(k)
                if img is not None:
                    out ^= img
        return out

    def apply_ids(self, ids: Iterable[int]) -> int:
        """Image of the chain whose cells are ``ids`` (no repeats)."""
        entries = self.entries
        out = 0
        if self.default == "identity":
            for k in ids:
                img = entries.get(k)
                out ^= (1 << k) if img is None else img
        else:
            for k in ids:
                img = entries.get(k)
                if img is not None:
                    out ^= img
        return out

    def __call__(self, chain: Chain) -> Chain:
        return Chain.from_bits(chain.dim + self.shift, self.apply_bits(chain.bits))

    def set(self, cell: int, image: int) -> None:
        default = 1 << cell if self.default == "identity" else 0
        if image == default:
            self.entries.pop(cell, None)
        else:
            self.entries[cell] = image

    def copy(self) -> "SparseLinearMap":
        return SparseLinearMap(self.shift, self.default, self.entries)

    def __repr__(self) -> str:
        return f"SparseLinearMap(shift={self.shift}, default={self.default}, {len(self.entries)} entries)"
