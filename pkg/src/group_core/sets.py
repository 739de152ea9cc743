"""Dense bitset subsets of F_2^n and the set-level operations on them."""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .context import GroupCtx
from .errors import EmptySetError, ParameterError

# Above this many summands per unit of rank the transform beats the XOR-shift loop.
DIRECT_SUMSET_FACTOR = 3


class SetF2:
    """A subset of F_2^n held as a read-only boolean array indexed by element."""

    __slots__ = ("ctx", "members", "cardinality")

    def __init__(self, ctx: GroupCtx, members: np.ndarray, copy: bool = True) -> None:
        array = np.array(members, dtype=bool, copy=True) if copy else np.asarray(members, dtype=bool)
        if array.shape != (ctx.order,):
            raise ParameterError(f"bitset of shape {array.shape} does not match F_2^{ctx.rank}")
        array.setflags(write=False)
        self.ctx = ctx
        self.members = array
        self.cardinality = int(np.count_nonzero(array))

    @classmethod
    def empty(cls, ctx: GroupCtx) -> "SetF2":
        return cls(ctx, np.zeros(ctx.order, dtype=bool), copy=False)

    @classmethod
    def full(cls, ctx: GroupCtx) -> "SetF2":
        return cls(ctx, np.ones(ctx.order, dtype=bool), copy=False)

    @classmethod
    def from_elements(cls, ctx: GroupCtx, elements: Iterable[int]) -> "SetF2":
        members = np.zeros(ctx.order, dtype=bool)
        for element in elements:
            members[ctx.check_element(element)] = True
        return cls(ctx, members, copy=False)

    @classmethod
    def from_mask(cls, ctx: GroupCtx, mask: int) -> "SetF2":
        """Build a set from an integer whose bit i marks element i."""
        mask = int(mask)
        if mask < 0 or mask >> ctx.order:
            raise ParameterError(f"mask {mask:#x} does not fit F_2^{ctx.rank}")
        n_bytes = max(1, (ctx.order + 7) // 8)
        raw = np.frombuffer(mask.to_bytes(n_bytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: ctx.order].astype(bool)
        return cls(ctx, bits, copy=False)

    def to_mask(self) -> int:
        packed = np.packbits(self.members, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def min_element(self) -> int:
        if not self.cardinality:
            raise EmptySetError("the empty set has no minimum")
        return int(np.argmax(self.members))

    def translate(self, shift: int) -> "SetF2":
        shift = self.ctx.check_element(shift)
        if shift == 0:
            return self
        return SetF2(self.ctx, self.members[self.ctx.indices() ^ shift], copy=False)

    def union(self, other: "SetF2") -> "SetF2":
        self.ctx.require_same(other.ctx)
        return SetF2(self.ctx, self.members | other.members, copy=False)

    def intersection(self, other: "SetF2") -> "SetF2":
        self.ctx.require_same(other.ctx)
        return SetF2(self.ctx, self.members & other.members, copy=False)

    def difference(self, other: "SetF2") -> "SetF2":
        self.ctx.require_same(other.ctx)
        return SetF2(self.ctx, self.members & ~other.members, copy=False)

    def issubset(self, other: "SetF2") -> bool:
        self.ctx.require_same(other.ctx)
        return not np.any(self.members & ~other.members)

    def is_full(self) -> bool:
        return self.cardinality == self.ctx.order

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def __len__(self) -> int:
        return self.cardinality

    def __bool__(self) -> bool:
        return self.cardinality > 0

    def __iter__(self) -> Iterator[int]:
        return (int(x) for x in self.elements())

    def __contains__(self, element: object) -> bool:
        if not isinstance(element, (int, np.integer)):
            return False
        return 0 <= int(element) < self.ctx.order and bool(self.members[int(element)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetF2):
            return NotImplemented
        return self.ctx.rank == other.ctx.rank and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.ctx.rank, self.members.tobytes()))

    def __repr__(self) -> str:
        return f"SetF2(n={self.ctx.rank}, {{{','.join(str(x) for x in self)}}})"


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along a length-2^n axis."""
    out = np.array(values, copy=True)
    half = 1
    while half < out.shape[0]:
        view = out.reshape(-1, 2, half)
        low = view[:, 0, :].copy()
        high = view[:, 1, :].copy()
        view[:, 0, :] = low + high
        view[:, 1, :] = low - high
        half <<= 1
    return out


def representation_counts(a: SetF2, b: SetF2) -> np.ndarray:
    """nu_{A,B}(g) for every g, exact, via two forward transforms and one inverse."""
    a.ctx.require_same(b.ctx)
    ctx = a.ctx
    # int64 is exact while 2^(3n) stays below 2^63
    dtype = np.int64 if ctx.rank <= 20 else object
    if not a or not b:
        return np.zeros(ctx.order, dtype=dtype)
    spectrum = walsh_hadamard(a.members.astype(dtype)) * walsh_hadamard(b.members.astype(dtype))
    return walsh_hadamard(spectrum) // ctx.order


def sumset(a: SetF2, b: SetF2) -> SetF2:
    a.ctx.require_same(b.ctx)
    ctx = a.ctx
    if not a or not b:
        return SetF2.empty(ctx)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    if len(small) > DIRECT_SUMSET_FACTOR * max(ctx.rank, 1):
        return SetF2(ctx, representation_counts(a, b) > 0, copy=False)
    indices = ctx.indices()
    out = np.zeros(ctx.order, dtype=bool)
    for element in small.elements():
        out |= large.members[indices ^ element]
    return SetF2(ctx, out, copy=False)


def complement(a: SetF2) -> SetF2:
    return SetF2(a.ctx, ~a.members, copy=False)


def nu(a: SetF2, b: SetF2, g: int) -> int:
    """Number of pairs (x, y) in A x B with x + y = g."""
    a.ctx.require_same(b.ctx)
    g = a.ctx.check_element(g)
    return int(np.count_nonzero(a.members & b.members[a.ctx.indices() ^ g]))


def mu(a: SetF2, b: SetF2) -> int:
    if not a or not b:
        raise EmptySetError("mu is undefined for an empty summand")
    counts = representation_counts(a, b)
    return int(counts[counts > 0].min())
