"""Kemperman's elementary pairs (types I to IV) in F_2^n: search and independent re-check."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from group_core.context import GroupCtx
from group_core.errors import EmptySetError
from group_core.sets import SetF2, representation_counts, sumset
from group_core.subgroups import Subgroup, period


class ElementaryType(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


@dataclass(frozen=True)
class ElementaryWitness:
    """Data proving that a pair is elementary.

    Type I uses `side`; type II uses the progression fields; types III and IV
    use g1, g2, the subgroup H and the parts H1, H2 (subsets of H), and
    type III additionally the element c with nu(c) = 1.
    """

    type: ElementaryType
    side: Optional[str] = None
    d: Optional[int] = None
    anchor_a: Optional[int] = None
    anchor_b: Optional[int] = None
    length_a: Optional[int] = None
    length_b: Optional[int] = None
    g1: Optional[int] = None
    g2: Optional[int] = None
    subgroup: Optional[Subgroup] = None
    h1: Optional[SetF2] = None
    h2: Optional[SetF2] = None
    c: Optional[int] = None


def _order(d: int) -> int:
    return 1 if d == 0 else 2


def progression(ctx: GroupCtx, anchor: int, d: int, length: int) -> SetF2:
    """{anchor + d, anchor + 2d, ..., anchor + length*d}."""
    anchor, d = ctx.check_element(anchor), ctx.check_element(d)
    # i*d is d for odd i and 0 for even i
    return SetF2.from_elements(ctx, (anchor ^ d if i % 2 else anchor for i in range(1, length + 1)))


def _find_type_two(a: SetF2, b: SetF2) -> Optional[ElementaryWitness]:
    total = len(a) + len(b)
    # no element has order above 2, so only |A| + |B| <= 3 can qualify
    if total - 1 > (2 if a.ctx.rank else 1):
        return None
    for d in range(a.ctx.order):
        if _order(d) < total - 1:
            continue
        anchors = []
        for side in (a, b):
            found = None
            for anchor in range(a.ctx.order):
                if progression(a.ctx, anchor, d, len(side)) == side:
                    found = anchor
                    break
            anchors.append(found)
        if None not in anchors:
            return ElementaryWitness(
                ElementaryType.II, d=d, anchor_a=anchors[0], anchor_b=anchors[1], length_a=len(a), length_b=len(b)
            )
    return None


def _joint_span(a: SetF2, b: SetF2) -> Subgroup:
    moved = a.translate(a.min_element()).union(b.translate(b.min_element()))
    return Subgroup.spanned_by(moved)


def _find_type_three(a: SetF2, b: SetF2) -> Optional[ElementaryWitness]:
    if len(a) < 2 or len(b) < 2:
        return None
    span = _joint_span(a, b)
    if span.order != len(a) + len(b) - 1:
        return None
    singles = np.flatnonzero(representation_counts(a, b) == 1)
    if singles.size != 1:
        return None
    c = int(singles[0])
    zero = SetF2.from_elements(a.ctx, [0])
    for g1 in a:
        g2 = g1 ^ c
        if g2 not in b:
            continue
        part_a, part_b = a.translate(g1), b.translate(g2)
        if part_a.intersection(part_b) == zero and part_a.union(part_b) == span.members:
            return ElementaryWitness(
                ElementaryType.III,
                g1=g1,
                g2=g2,
                subgroup=span,
                h1=part_a - zero,
                h2=part_b - zero,
                c=c,
            )
    return None


def _find_type_four(a: SetF2, b: SetF2) -> Optional[ElementaryWitness]:
    span = _joint_span(a, b)
    if span.order != len(a) + len(b) or span.order < 2:
        return None
    if not period(a).is_zero() or not period(b).is_zero():
        return None
    counts = representation_counts(a, b)
    if counts[counts > 0].min() < 2:
        return None
    base_a, base_b = a.min_element(), b.min_element()
    for offset in span.members:
        g1 = base_a ^ offset
        h1 = a.translate(g1)
        rest = span.members - h1
        for y in rest:
            g2 = base_b ^ y
            if b.translate(g2) == rest:
                return ElementaryWitness(ElementaryType.IV, g1=g1, g2=g2, subgroup=span, h1=h1, h2=rest)
    return None


def classify_elementary(a: SetF2, b: SetF2) -> Optional[ElementaryWitness]:
    """Witness for the lowest-numbered type the pair has, or None."""
    a.ctx.require_same(b.ctx)
    if not a or not b:
        raise EmptySetError("elementary classification needs non-empty sets")
    if len(a) == 1:
        return ElementaryWitness(ElementaryType.I, side="A")
    if len(b) == 1:
        return ElementaryWitness(ElementaryType.I, side="B")
    for finder in (_find_type_two, _find_type_three, _find_type_four):
        witness = finder(a, b)
        if witness is not None:
            return witness
    return None


def _parts_fit(witness: ElementaryWitness, ctx_rank: int) -> bool:
    h, h1, h2 = witness.subgroup, witness.h1, witness.h2
    if not isinstance(h, Subgroup) or not isinstance(h1, SetF2) or not isinstance(h2, SetF2):
        return False
    if not h.ctx.rank == h1.ctx.rank == h2.ctx.rank == ctx_rank:
        return False
    return bool(h1) and bool(h2) and not h1.intersection(h2) and h1.issubset(h.members) and h2.issubset(h.members)


def _verify(a: SetF2, b: SetF2, w: ElementaryWitness) -> bool:
    kind = ElementaryType(w.type)
    if kind is ElementaryType.I:
        return (w.side == "A" and len(a) == 1) or (w.side == "B" and len(b) == 1)
    if kind is ElementaryType.II:
        if w.length_a != len(a) or w.length_b != len(b):
            return False
        if _order(a.ctx.check_element(w.d)) < len(a) + len(b) - 1:
            return False
        return (
            progression(a.ctx, w.anchor_a, w.d, w.length_a) == a
            and progression(b.ctx, w.anchor_b, w.d, w.length_b) == b
        )

    if not _parts_fit(w, a.ctx.rank):
        return False
    g1, g2 = a.ctx.check_element(w.g1), a.ctx.check_element(w.g2)
    h = w.subgroup
    if kind is ElementaryType.III:
        zero = SetF2.from_elements(a.ctx, [0])
        if 0 in w.h1 or 0 in w.h2 or (w.h1 | w.h2 | zero) != h.members:
            return False
        if (w.h1 | zero).translate(g1) != a or (w.h2 | zero).translate(g2) != b:
            return False
        if w.c is None or int(w.c) != g1 ^ g2:
            return False
        singles = np.flatnonzero(representation_counts(a, b) == 1)
        return singles.tolist() == [g1 ^ g2]

    if (w.h1 | w.h2) != h.members:
        return False
    if w.h1.translate(g1) != a or w.h2.translate(g2) != b:
        return False
    if not period(w.h1).is_zero() or not period(w.h2).is_zero():
        return False
    counts = representation_counts(a, b)
    return int(counts[counts > 0].min()) >= 2


def verify_elementary(a: SetF2, b: SetF2, w: ElementaryWitness) -> bool:
    """Re-derive every clause of the claimed type from the raw sets; malformed witnesses give False."""
    if not isinstance(w, ElementaryWitness) or a.ctx.rank != b.ctx.rank or not a or not b:
        return False
    try:
        return _verify(a, b, w)
    except (ValueError, TypeError, AttributeError):
        return False


def predicted_sumset(w: ElementaryWitness) -> Optional[SetF2]:
    """A+B read off a type III (g1+g2+H) or type IV (g1+g2+(H minus 0)) witness."""
    kind = ElementaryType(w.type)
    if kind is ElementaryType.III:
        return w.subgroup.members.translate(w.g1 ^ w.g2)
    if kind is ElementaryType.IV:
        zero = SetF2.from_elements(w.subgroup.ctx, [0])
        return (w.subgroup.members - zero).translate(w.g1 ^ w.g2)
    return None


def sumset_matches_witness(a: SetF2, b: SetF2, w: ElementaryWitness) -> bool:
    expected = predicted_sumset(w)
    return expected is None or sumset(a, b) == expected
