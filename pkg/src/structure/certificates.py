"""Kemperman's condition, Lev decompositions and recursive structure certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from group_core.errors import EmptySetError, PreconditionError, StructureSearchError
from group_core.sets import SetF2, mu, representation_counts, sumset
from group_core.subgroups import (
    Subgroup,
    enumerate_subgroups,
    is_union_of_cosets,
    lift,
    period,
    quotient_map,
    restrict_to_subgroup,
)

from .elementary import ElementaryWitness, classify_elementary, verify_elementary

logger = logging.getLogger(__name__)


class NodeKind(str, Enum):
    DEPERIODIZE = "deperiodize"
    ELEMENTARY = "elementary"
    LEV = "lev"


@dataclass(frozen=True)
class LevDecomposition:
    subgroup: Subgroup
    a0: SetF2
    b0: SetF2
    quotient_witness: ElementaryWitness


@dataclass(frozen=True)
class Certificate:
    """One node of a structure certificate for a pair living in F_2^rank.

    deperiodize: `subgroup` is pi(A+B), `child` certifies the quotient pair.
    elementary: `witness` proves the pair elementary.
    lev: `subgroup` is F, `a0`/`b0` the distinguished parts, `witness` the
    quotient pair's elementary witness and `child` certifies (A_0, B_0)
    written in F's coordinates.
    """

    kind: NodeKind
    rank: int
    subgroup: Optional[Subgroup] = None
    a0: Optional[SetF2] = None
    b0: Optional[SetF2] = None
    witness: Optional[ElementaryWitness] = None
    child: Optional["Certificate"] = None

    def nodes(self) -> Iterator["Certificate"]:
        node: Optional[Certificate] = self
        while node is not None:
            yield node
            node = node.child

    @property
    def depth(self) -> int:
        return sum(1 for _ in self.nodes())


@dataclass(frozen=True)
class ClassifyOutcome:
    small_sumset: bool
    kemperman_condition: bool
    certificate: Optional[Certificate] = None
    failure_reason: Optional[str] = None


def is_small_sumset(a: SetF2, b: SetF2) -> bool:
    return len(sumset(a, b)) < len(a) + len(b)


def kemperman_condition(a: SetF2, b: SetF2) -> bool:
    """pi(A+B) = {0} or mu_{A,B} = 1."""
    if not a or not b:
        raise EmptySetError("Kemperman's condition needs non-empty sets")
    if period(sumset(a, b)).is_zero():
        return True
    return mu(a, b) == 1


def _in_one_coset(s: SetF2, f: Subgroup) -> bool:
    return len(quotient_map(s, f)) == 1


def find_lev_decomposition(a: SetF2, b: SetF2) -> Optional[LevDecomposition]:
    """First (F, A_0, B_0) satisfying the three decomposition clauses, F by ascending index.

    Requires |A+B| < |A|+|B|, Kemperman's condition and a non-elementary pair.
    """
    a.ctx.require_same(b.ctx)
    if not a or not b:
        raise EmptySetError("a decomposition needs non-empty sets")
    if not is_small_sumset(a, b):
        raise PreconditionError("|A+B| < |A|+|B| does not hold")
    if not kemperman_condition(a, b):
        raise PreconditionError("the pair fails Kemperman's condition")
    if classify_elementary(a, b) is not None:
        raise PreconditionError("the pair is elementary")

    ctx = a.ctx
    for dim in range(ctx.rank - 1, 0, -1):
        for f in enumerate_subgroups(ctx, dim):
            qa, qb = quotient_map(a, f), quotient_map(b, f)
            witness = classify_elementary(qa, qb)
            if witness is None:
                continue
            counts = representation_counts(qa, qb)
            for c in np.flatnonzero(counts == 1):
                x = int(np.flatnonzero(qa.members & qb.members[qa.ctx.indices() ^ c])[0])
                y = x ^ int(c)
                a0 = a & lift(SetF2.from_elements(qa.ctx, [x]), f)
                b0 = b & lift(SetF2.from_elements(qb.ctx, [y]), f)
                if not is_union_of_cosets(a - a0, f) or not is_union_of_cosets(b - b0, f):
                    continue
                if len(sumset(a0, b0)) != len(a0) + len(b0) - 1:
                    continue
                if not kemperman_condition(a0, b0):
                    continue
                logger.debug("Lev decomposition over %r with |A_0|=%d |B_0|=%d", f, len(a0), len(b0))
                return LevDecomposition(f, a0, b0, witness)
    return None


def _certify(a: SetF2, b: SetF2) -> Certificate:
    rank = a.ctx.rank
    if not kemperman_condition(a, b):
        h = period(sumset(a, b))
        child = _certify(quotient_map(a, h), quotient_map(b, h))
        return Certificate(NodeKind.DEPERIODIZE, rank, subgroup=h, child=child)
    witness = classify_elementary(a, b)
    if witness is not None:
        return Certificate(NodeKind.ELEMENTARY, rank, witness=witness)
    decomposition = find_lev_decomposition(a, b)
    if decomposition is None:
        raise StructureSearchError(f"no decomposition found for {a!r} and {b!r}")
    f, a0, b0 = decomposition.subgroup, decomposition.a0, decomposition.b0
    child = _certify(
        restrict_to_subgroup(a0, f, a0.min_element()),
        restrict_to_subgroup(b0, f, b0.min_element()),
    )
    return Certificate(
        NodeKind.LEV, rank, subgroup=f, a0=a0, b0=b0, witness=decomposition.quotient_witness, child=child
    )


def certify(a: SetF2, b: SetF2) -> ClassifyOutcome:
    """Build a structure certificate for a pair with a small sumset."""
    a.ctx.require_same(b.ctx)
    if not a or not b:
        raise EmptySetError("certification needs non-empty sets")
    small = is_small_sumset(a, b)
    kemperman = kemperman_condition(a, b)
    if not small:
        return ClassifyOutcome(False, kemperman)
    try:
        certificate = _certify(a, b)
    except StructureSearchError as exc:
        logger.debug("certification failed: %s", exc)
        return ClassifyOutcome(True, kemperman, failure_reason=str(exc))
    return ClassifyOutcome(True, kemperman, certificate)


def _violation(a: SetF2, b: SetF2, c: Certificate) -> Optional[str]:
    if not isinstance(c, Certificate):
        return "malformed"
    if c.rank != a.ctx.rank or c.rank != b.ctx.rank:
        return "rank"
    if not a or not b:
        return "nonempty"
    if not is_small_sumset(a, b):
        return "small_sumset"
    kind = NodeKind(c.kind)

    if kind is NodeKind.ELEMENTARY:
        if c.witness is None or not verify_elementary(a, b, c.witness):
            return "elementary.witness"
        return None

    if kind is NodeKind.DEPERIODIZE:
        h = c.subgroup
        if not isinstance(h, Subgroup) or h.ctx.rank != c.rank:
            return "deperiodize.period"
        total = sumset(a, b)
        if not total.is_full():
            qa, qb = quotient_map(a, h), quotient_map(b, h)
            if len(sumset(qa, qb)) >= min(len(qa) + len(qb), qa.ctx.order):
                return "deperiodize.quotient_size"
        if h != period(total):
            return "deperiodize.period"
        if h.is_zero() or kemperman_condition(a, b):
            return "deperiodize.kemperman"
        if c.child is None:
            return "child.missing"
        if c.child.rank != c.rank - h.dim:
            return "child.rank"
        return _violation(quotient_map(a, h), quotient_map(b, h), c.child)

    f, a0, b0 = c.subgroup, c.a0, c.b0
    if not isinstance(f, Subgroup) or f.ctx.rank != c.rank or f.is_zero() or f.is_full():
        return "lev.subgroup"
    if not isinstance(a0, SetF2) or not isinstance(b0, SetF2) or a0.ctx.rank != c.rank or b0.ctx.rank != c.rank:
        return "lev.clause_i.subsets"
    if not a0 or not b0 or not a0.issubset(a) or not b0.issubset(b):
        return "lev.clause_i.subsets"
    if not _in_one_coset(a0, f) or not _in_one_coset(b0, f):
        return "lev.clause_i.single_coset"
    if len(sumset(a0, b0)) != len(a0) + len(b0) - 1:
        return "lev.clause_i.sumset_size"
    if not kemperman_condition(a0, b0):
        return "lev.clause_i.kemperman"
    if not is_union_of_cosets(a - a0, f) or not is_union_of_cosets(b - b0, f):
        return "lev.clause_ii"
    qa, qb = quotient_map(a, f), quotient_map(b, f)
    if c.witness is None or not verify_elementary(qa, qb, c.witness):
        return "lev.clause_iii.elementary"
    x, y = quotient_map(a0, f).min_element(), quotient_map(b0, f).min_element()
    if int(representation_counts(qa, qb)[x ^ y]) != 1:
        return "lev.clause_iii.unique_representation"
    if c.child is None:
        return "child.missing"
    if c.child.rank != f.dim:
        return "child.rank"
    return _violation(
        restrict_to_subgroup(a0, f, a0.min_element()),
        restrict_to_subgroup(b0, f, b0.min_element()),
        c.child,
    )


def certificate_violation(a: SetF2, b: SetF2, c: Certificate) -> Optional[str]:
    """Name of the first clause the certificate fails for (A, B), or None if it is valid."""
    try:
        return _violation(a, b, c)
    except (ValueError, TypeError, AttributeError) as exc:
        logger.debug("malformed certificate: %s", exc)
        return "malformed"


def verify_certificate(a: SetF2, b: SetF2, c: Certificate) -> bool:
    return certificate_violation(a, b, c) is None
