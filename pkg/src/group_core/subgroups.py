"""Subgroups, cosets, spans, periods and quotient maps of F_2^n."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Tuple

import numpy as np

from .context import GroupCtx
from .errors import ContextMismatchError, EmptySetError, ParameterError
from .sets import SetF2, representation_counts


def _pivot(vector: int) -> int:
    return vector.bit_length() - 1


def reduce_vector(vector: int, basis: Iterable[int]) -> int:
    """Clear every pivot bit of a reduced echelon basis (pivots descending)."""
    for row in basis:
        if (vector >> _pivot(row)) & 1:
            vector ^= row
    return vector


def echelon_basis(vectors: Iterable[int]) -> Tuple[int, ...]:
    """Reduced row-echelon basis of the span, pivot = top bit, pivots descending."""
    rows: List[int] = []
    for vector in vectors:
        vector = reduce_vector(int(vector), rows)
        if vector == 0:
            continue
        pivot = _pivot(vector)
        rows = [row ^ vector if (row >> pivot) & 1 else row for row in rows]
        rows.append(vector)
        rows.sort(key=_pivot, reverse=True)
    return tuple(rows)


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_2^n."""
    if not 0 <= k <= n:
        return 0
    numerator, denominator = 1, 1
    for i in range(k):
        numerator *= (1 << (n - i)) - 1
        denominator *= (1 << (i + 1)) - 1
    return numerator // denominator


class Subgroup:
    """A linear subspace in canonical (reduced echelon) form with cached members."""

    __slots__ = ("ctx", "basis", "pivots", "members", "_labels")

    def __init__(self, ctx: GroupCtx, basis: Iterable[int]) -> None:
        vectors = [ctx.check_element(v) for v in basis]
        self.ctx = ctx
        self.basis = echelon_basis(vectors)
        self.pivots = tuple(_pivot(v) for v in self.basis)
        indices = ctx.indices()
        members = np.zeros(ctx.order, dtype=bool)
        members[0] = True
        for vector in self.basis:
            members |= members[indices ^ vector]
        self.members = SetF2(ctx, members, copy=False)
        self._labels = None

    @classmethod
    def zero(cls, ctx: GroupCtx) -> "Subgroup":
        return cls(ctx, ())

    @classmethod
    def full(cls, ctx: GroupCtx) -> "Subgroup":
        return cls(ctx, (1 << i for i in range(ctx.rank)))

    @classmethod
    def spanned_by(cls, a: SetF2) -> "Subgroup":
        """Linear span of the elements of a set."""
        ctx = a.ctx
        indices = ctx.indices()
        span = np.zeros(ctx.order, dtype=bool)
        span[0] = True
        basis: List[int] = []
        while True:
            outside = a.members & ~span
            if not outside.any():
                break
            vector = int(np.argmax(outside))
            basis.append(vector)
            span |= span[indices ^ vector]
        return cls(ctx, basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 1 << self.dim

    @property
    def index(self) -> int:
        return 1 << (self.ctx.rank - self.dim)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ctx.rank

    def contains(self, element: int) -> bool:
        return reduce_vector(int(element), self.basis) == 0

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        self.ctx.require_same(other.ctx)
        return all(other.contains(v) for v in self.basis)

    def reduce(self, element: int) -> int:
        """Numerically smallest element of element + H."""
        return reduce_vector(self.ctx.check_element(element), self.basis)

    def complement_positions(self) -> Tuple[int, ...]:
        pivots = set(self.pivots)
        return tuple(i for i in range(self.ctx.rank) if i not in pivots)

    def quotient_ctx(self) -> GroupCtx:
        return GroupCtx(self.ctx.rank - self.dim)

    def quotient_labels(self) -> np.ndarray:
        """Label of every element in G/H: the bits of its reduced form at non-pivot positions."""
        if self._labels is None:
            reduced = self.ctx.indices().copy()
            for vector, pivot in zip(self.basis, self.pivots):
                reduced ^= ((reduced >> pivot) & 1) * vector
            labels = np.zeros(self.ctx.order, dtype=np.int64)
            for j, position in enumerate(self.complement_positions()):
                labels |= ((reduced >> position) & 1) << j
            labels.setflags(write=False)
            self._labels = labels
        return self._labels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.ctx.rank == other.ctx.rank and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ctx.rank, self.basis))

    def __repr__(self) -> str:
        return f"Subgroup(n={self.ctx.rank}, basis={list(self.basis)})"


@dataclass(frozen=True)
class Coset:
    rep: int
    subgroup: Subgroup

    @classmethod
    def of(cls, subgroup: Subgroup, element: int) -> "Coset":
        return cls(subgroup.reduce(element), subgroup)

    @property
    def size(self) -> int:
        return self.subgroup.order

    @property
    def index(self) -> int:
        return self.subgroup.index

    def members(self) -> SetF2:
        return self.subgroup.members.translate(self.rep)

    def __contains__(self, element: object) -> bool:
        if not isinstance(element, (int, np.integer)):
            return False
        return self.subgroup.reduce(int(element)) == self.rep


def affine_span(a: SetF2) -> Coset:
    """Smallest coset containing a non-empty set."""
    if not a:
        raise EmptySetError("the affine span of the empty set is undefined")
    base = a.min_element()
    linear = Subgroup.spanned_by(a.translate(base))
    return Coset.of(linear, base)


def period(a: SetF2, allow_empty: bool = False) -> Subgroup:
    """Maximal subgroup H with A + H = A. The empty set has period G only on request."""
    if not a:
        if allow_empty:
            return Subgroup.full(a.ctx)
        raise EmptySetError("the period of the empty set is only defined with allow_empty=True")
    autocorrelation = representation_counts(a, a)
    stabilizer = SetF2(a.ctx, autocorrelation == len(a), copy=False)
    return Subgroup.spanned_by(stabilizer)


def is_union_of_cosets(a: SetF2, f: Subgroup) -> bool:
    a.ctx.require_same(f.ctx)
    indices = a.ctx.indices()
    return all(np.array_equal(a.members[indices ^ v], a.members) for v in f.basis)


def _require_subgroup_of(a: SetF2, h: Subgroup) -> None:
    if a.ctx.rank != h.ctx.rank:
        raise ContextMismatchError(f"subgroup of F_2^{h.ctx.rank} used on a set in F_2^{a.ctx.rank}")


def quotient_map(a: SetF2, h: Subgroup) -> SetF2:
    """phi_H(A) as a set in F_2^(n - dim H), coordinates on the unit-vector completion of H."""
    _require_subgroup_of(a, h)
    qctx = h.quotient_ctx()
    members = np.zeros(qctx.order, dtype=bool)
    members[h.quotient_labels()[a.elements()]] = True
    return SetF2(qctx, members, copy=False)


def lift(s: SetF2, h: Subgroup) -> SetF2:
    """Full preimage of a quotient set under quotient_map's labelling."""
    if s.ctx.rank != h.ctx.rank - h.dim:
        raise ContextMismatchError(f"set in F_2^{s.ctx.rank} is not a subset of G/H of rank {h.ctx.rank - h.dim}")
    return SetF2(h.ctx, s.members[h.quotient_labels()], copy=False)


def restrict_to_subgroup(a: SetF2, f: Subgroup, shift: int = 0) -> SetF2:
    """(A + shift) in the coordinates of F: coordinate j is the bit at F's j-th smallest pivot."""
    _require_subgroup_of(a, f)
    moved = a.translate(shift)
    if not moved.issubset(f.members):
        raise ParameterError("translated set is not contained in the subgroup")
    elements = moved.elements()
    coordinates = np.zeros(elements.shape, dtype=np.int64)
    for j, pivot in enumerate(sorted(f.pivots)):
        coordinates |= ((elements >> pivot) & 1) << j
    sub_ctx = GroupCtx(f.dim)
    members = np.zeros(sub_ctx.order, dtype=bool)
    members[coordinates] = True
    return SetF2(sub_ctx, members, copy=False)


def enumerate_subgroups(ctx: GroupCtx, dim: int) -> Iterator[Subgroup]:
    """Every dim-dimensional subgroup exactly once.

    Order: pivot sets in lexicographic order, then free coordinates in
    binary counting order; each yielded basis is already canonical.
    """
    if not 0 <= dim <= ctx.rank:
        raise ParameterError(f"dimension {dim} is outside 0..{ctx.rank}")
    for pivots in itertools.combinations(range(ctx.rank), dim):
        pivot_set = set(pivots)
        free = [[i for i in range(p) if i not in pivot_set] for p in pivots]
        n_free = sum(len(slots) for slots in free)
        for bits in itertools.product((0, 1), repeat=n_free):
            basis = []
            cursor = 0
            for pivot, slots in zip(pivots, free):
                vector = 1 << pivot
                for slot in slots:
                    if bits[cursor]:
                        vector |= 1 << slot
                    cursor += 1
                basis.append(vector)
            yield Subgroup(ctx, basis)
