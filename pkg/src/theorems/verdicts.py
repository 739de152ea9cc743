"""Hypothesis and conclusion checks for the small-sumset theorems on concrete pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from group_core.errors import EmptySetError, ParameterError
from group_core.sets import SetF2, complement, mu, sumset
from group_core.subgroups import Coset, affine_span


class Outcome(str, Enum):
    VACUOUS = "vacuous"
    CONFIRMED = "confirmed"
    VIOLATION = "violation"


@dataclass(frozen=True)
class Verdict:
    """Result of checking one theorem on one pair.

    `strict_containment` means the complement is a proper subset of the
    index-`required_index` coset containing it (required_index * |complement| < |G|);
    `complement_is_coset` says whether the complement equals its own affine span.
    """

    theorem: str
    hypotheses: Dict[str, bool]
    conclusion_holds: bool
    sumset_size: int
    complement_size: int
    complement_span: Optional[Coset]
    complement_span_index: Optional[int]
    required_index: Optional[int]
    strict_containment: bool
    complement_is_coset: bool
    mu_value: int
    details: str = ""
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def outcome(self) -> Outcome:
        if not self.hypotheses_hold:
            return Outcome.VACUOUS
        return Outcome.CONFIRMED if self.conclusion_holds else Outcome.VIOLATION

    def to_dict(self) -> Dict[str, Any]:
        span = self.complement_span
        record = {
            "theorem": self.theorem,
            "outcome": self.outcome.value,
            "hypotheses": dict(self.hypotheses),
            "conclusion": self.conclusion_holds,
            "sumset_size": self.sumset_size,
            "complement_size": self.complement_size,
            "span_rep": None if span is None else span.rep,
            "span_basis": None if span is None else list(span.subgroup.basis),
            "span_index": self.complement_span_index,
            "required_index": self.required_index,
            "strict": self.strict_containment,
            "complement_is_coset": self.complement_is_coset,
            "mu": self.mu_value,
            "details": self.details,
        }
        record.update(self.extras)
        return record


def _require_pair(a: SetF2, b: SetF2) -> None:
    a.ctx.require_same(b.ctx)
    if not a or not b:
        raise EmptySetError("theorem checks need non-empty sets")


def _spans_full(a: SetF2) -> bool:
    return affine_span(a).subgroup.is_full()


def _complement_verdict(
    theorem: str,
    hypotheses: Dict[str, bool],
    total: SetF2,
    required_index: Optional[int],
    mu_value: int,
    extras: Optional[Dict[str, Any]] = None,
) -> Verdict:
    """Index conclusion shared by the coset-containment theorems."""
    extras = dict(extras or {})
    order = total.ctx.order
    rest = complement(total)
    if not rest:
        return Verdict(
            theorem, hypotheses, True, len(total), 0, None, None, required_index, True, False, mu_value,
            details="sumset is the whole group",
            extras=extras,
        )
    span = affine_span(rest)
    index = span.index
    is_coset = len(rest) == span.size
    strict = required_index is not None and required_index * len(rest) < order
    holds = required_index is None or (index >= required_index and (mu_value != 1 or strict))
    details = f"complement of size {len(rest)} spans a coset of index {index}"
    return Verdict(
        theorem, hypotheses, holds, len(total), len(rest), span, index, required_index, strict, is_coset, mu_value,
        details=details,
        extras=extras,
    )


def check_main(a: SetF2, b: SetF2) -> Verdict:
    """Spans are G and |A+B| < min(|A|+|B|, |G|) imply the complement sits in an index-8 coset."""
    _require_pair(a, b)
    total = sumset(a, b)
    hypotheses = {
        "span_a_full": _spans_full(a),
        "span_b_full": _spans_full(b),
        "sumset_below_sum": len(total) < len(a) + len(b),
        "sumset_proper": len(total) < a.ctx.order,
    }
    return _complement_verdict("main", hypotheses, total, 8, mu(a, b))


def check_asymmetric(a: SetF2, b: SetF2, k: int) -> Verdict:
    """Adds 2^k |B| >= (2^k - k - 1) |G| and asks for an index-2^k coset."""
    if k < 4:
        raise ParameterError(f"k must be at least 4 (k = 3 is check_main), got {k}")
    _require_pair(a, b)
    total = sumset(a, b)
    scale = 1 << k
    hypotheses = {
        "span_a_full": _spans_full(a),
        "span_b_full": _spans_full(b),
        "sumset_below_sum": len(total) < len(a) + len(b),
        "sumset_proper": len(total) < a.ctx.order,
        "b_large": scale * len(b) >= (scale - k - 1) * a.ctx.order,
    }
    return _complement_verdict("asym", hypotheses, total, scale, mu(a, b), extras={"k": k})


def check_hp(a: SetF2) -> Verdict:
    """|2A| < 2|A| with span G: 2A = G or its complement is a coset of index >= 8, and 8|2A| >= 7|G|."""
    _require_pair(a, a)
    total = sumset(a, a)
    order = a.ctx.order
    hypotheses = {
        "span_full": _spans_full(a),
        "doubling_below_two": len(total) < 2 * len(a),
    }
    base = _complement_verdict("hp", hypotheses, total, 8, mu(a, a))
    seven_eighths = 8 * len(total) >= 7 * order
    if base.complement_size == 0:
        shape = True
    else:
        shape = base.complement_is_coset and base.complement_span_index >= 8
    verdict = Verdict(
        "hp",
        hypotheses,
        shape and seven_eighths,
        base.sumset_size,
        base.complement_size,
        base.complement_span,
        base.complement_span_index,
        8,
        base.strict_containment,
        base.complement_is_coset,
        base.mu_value,
        details=base.details,
        extras={"seven_eighths": seven_eighths},
    )
    return verdict


def _whole_group_verdict(theorem: str, hypotheses: Dict[str, bool], a: SetF2, b: SetF2) -> Verdict:
    total = sumset(a, b)
    verdict = _complement_verdict(theorem, hypotheses, total, None, mu(a, b))
    holds = total.is_full()
    return Verdict(
        theorem,
        hypotheses,
        holds,
        verdict.sumset_size,
        verdict.complement_size,
        verdict.complement_span,
        verdict.complement_span_index,
        None,
        verdict.strict_containment,
        verdict.complement_is_coset,
        verdict.mu_value,
        details="sumset is the whole group" if holds else verdict.details,
    )


def check_kneser_corollary(a: SetF2, b: SetF2) -> Verdict:
    """Spans are G and 4|A+B| < 4|A| + 3|B| imply A+B = G."""
    _require_pair(a, b)
    total_size = len(sumset(a, b))
    hypotheses = {
        "span_a_full": _spans_full(a),
        "span_b_full": _spans_full(b),
        "below_three_quarters": 4 * total_size < 4 * len(a) + 3 * len(b),
    }
    return _whole_group_verdict("kneser", hypotheses, a, b)


def check_seven_eighths_corollary(a: SetF2, b: SetF2) -> Verdict:
    """Spans are G and 8|A+B| < 7(|A| + |B|) imply A+B = G."""
    _require_pair(a, b)
    total_size = len(sumset(a, b))
    hypotheses = {
        "span_a_full": _spans_full(a),
        "span_b_full": _spans_full(b),
        "below_seven_eighths": 8 * total_size < 7 * (len(a) + len(b)),
    }
    return _whole_group_verdict("seven-eighths", hypotheses, a, b)


def quotient_rank_admissible(m: int) -> bool:
    """2m + 2 <= 2^m + 1: the quotient in the decomposition case has rank m >= 3."""
    return 2 * m + 2 <= (1 << m) + 1


def asymmetric_rank_admissible(m: int, k: int) -> bool:
    """m <= (k+1) 2^(m-k), cleared of denominators as m 2^k <= (k+1) 2^m."""
    return m * (1 << k) <= (k + 1) * (1 << m)
