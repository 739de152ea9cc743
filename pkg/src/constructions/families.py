"""Explicit extremal and boundary pairs with their predicted sumset data.

Coordinates: the small subgroup H occupies the low bits and F the bits above
it; h_i is the i-th unit vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Dict, Iterable, List, Optional, Union

from group_core.context import GroupCtx
from group_core.errors import ConstructionError, ParameterError
from group_core.literals import format_set_literal
from group_core.sets import SetF2, complement, sumset
from group_core.subgroups import Subgroup, affine_span
from structure.elementary import ElementaryType, ElementaryWitness, verify_elementary

NONCOSET_H_PART = (1, 2, 4)
NONCOSET_B_PART = (3, 5, 6, 7)


@dataclass(frozen=True)
class Prediction:
    size_a: int
    size_b: int
    size_sumset: int
    complement: SetF2
    complement_span_index: Optional[int]
    complement_is_coset: bool

    def to_dict(self) -> Dict[str, Any]:
        record = {f.name: getattr(self, f.name) for f in fields(self)}
        record["complement"] = format_set_literal(self.complement)
        return record


def observe(a: SetF2, b: SetF2) -> Prediction:
    """The prediction fields measured directly on a pair."""
    rest = complement(sumset(a, b))
    if rest:
        span = affine_span(rest)
        index, is_coset = span.index, len(rest) == span.size
    else:
        index, is_coset = None, False
    return Prediction(len(a), len(b), rest.ctx.order - len(rest), rest, index, is_coset)


@dataclass(frozen=True)
class ConstructionOutput:
    family: str
    params: Dict[str, Any]
    a: SetF2
    b: SetF2
    predicted: Prediction
    witness: Optional[ElementaryWitness] = field(default=None, compare=False)

    def recompute(self) -> Prediction:
        return observe(self.a, self.b)

    def mismatches(self) -> List[str]:
        actual = self.recompute()
        names = [f.name for f in fields(Prediction)]
        return [name for name in names if getattr(actual, name) != getattr(self.predicted, name)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "params": dict(self.params),
            "A": format_set_literal(self.a),
            "B": format_set_literal(self.b),
            "predicted": self.predicted.to_dict(),
        }


def _embed(ctx: GroupCtx, values: Iterable[int], shift: int) -> SetF2:
    return SetF2.from_elements(ctx, (v << shift for v in values))


def _plus(ctx: GroupCtx, left: Iterable[int], right: SetF2) -> SetF2:
    out = SetF2.empty(ctx)
    for x in left:
        out = out | right.translate(x)
    return out


def build_noncoset_complement(rank_f: int, f0: Optional[SetF2] = None, g_shift: int = 0) -> ConstructionOutput:
    """A = g + (({h1,h2,h3} + F) u {0}), B = ({h1+h2, h2+h3, h3+h1, h1+h2+h3} + F) u F_0."""
    if rank_f < 1:
        raise ParameterError(f"rank_f must be at least 1, got {rank_f}")
    f_ctx = GroupCtx(rank_f)
    if f0 is None:
        f0 = SetF2.from_elements(f_ctx, [0])
    if f0.ctx.rank != rank_f:
        raise ParameterError(f"F_0 lives in F_2^{f0.ctx.rank}, expected F_2^{rank_f}")
    if f0.is_full():
        raise ParameterError("F_0 must be a proper subset of F")
    ctx = GroupCtx(3 + rank_f)
    g_shift = ctx.check_element(g_shift)
    f = _embed(ctx, range(f_ctx.order), 3)
    zero = SetF2.from_elements(ctx, [0])
    a = (_plus(ctx, NONCOSET_H_PART, f) | zero).translate(g_shift)
    b = _plus(ctx, NONCOSET_B_PART, f) | _embed(ctx, f0, 3)

    rest = (f - _embed(ctx, f0, 3)).translate(g_shift)
    span = affine_span(rest)
    predicted = Prediction(
        size_a=3 * len(f) + 1,
        size_b=4 * len(f) + len(f0),
        size_sumset=ctx.order - (len(f) - len(f0)),
        complement=rest,
        complement_span_index=span.index,
        complement_is_coset=len(rest) == span.size,
    )
    params = {"rank_f": rank_f, "f0": format_set_literal(f0), "g_shift": g_shift}
    return ConstructionOutput("noncoset", params, a, b, predicted)


def build_tight_extremal(k: int, rank_f: int = 0, g1: int = 0, g2: int = 0) -> ConstructionOutput:
    """A = g1 + {0, h_1..h_k} + F and B = g2 + (H minus {0, h_1..h_k}) + F with |H| = 2^k."""
    if k < 3:
        raise ParameterError(f"k must be at least 3, got {k}")
    if rank_f < 0:
        raise ParameterError(f"rank_f must be non-negative, got {rank_f}")
    ctx = GroupCtx(k + rank_f)
    g1, g2 = ctx.check_element(g1), ctx.check_element(g2)
    f = _embed(ctx, range(1 << rank_f), k)
    generators = [0] + [1 << i for i in range(k)]
    others = [h for h in range(1 << k) if h not in generators]
    a = _plus(ctx, generators, f).translate(g1)
    b = _plus(ctx, others, f).translate(g2)

    predicted = Prediction(
        size_a=(k + 1) * len(f),
        size_b=((1 << k) - k - 1) * len(f),
        size_sumset=ctx.order - len(f),
        complement=f.translate(g1 ^ g2),
        complement_span_index=1 << k,
        complement_is_coset=True,
    )
    return ConstructionOutput("tight", {"k": k, "rank_f": rank_f, "g1": g1, "g2": g2}, a, b, predicted)


def build_span_necessity(variant: int, n: int) -> ConstructionOutput:
    """Pairs meeting the three-quarters inequality with A+B != G once one span hypothesis is dropped.

    variant 1: B the subgroup on coordinates 3.., A = {0,h1,h2,h3} + B (four cosets, not a coset).
    variant 2: A the subgroup on coordinates 2.., B = {0,h1,h2} + A (three cosets).
    """
    if variant == 1:
        if n < 3:
            raise ParameterError(f"variant 1 needs n >= 3, got {n}")
        ctx = GroupCtx(n)
        b = Subgroup(ctx, (1 << i for i in range(3, n))).members
        a = _plus(ctx, (0, 1, 2, 4), b)
        rest = _plus(ctx, NONCOSET_B_PART, b)
        predicted = Prediction(4 * len(b), len(b), len(a), rest, 1, False)
    elif variant == 2:
        if n < 2:
            raise ParameterError(f"variant 2 needs n >= 2, got {n}")
        ctx = GroupCtx(n)
        a = Subgroup(ctx, (1 << i for i in range(2, n))).members
        b = _plus(ctx, (0, 1, 2), a)
        rest = a.translate(3)
        predicted = Prediction(len(a), 3 * len(a), len(b), rest, 4, True)
    else:
        raise ParameterError(f"variant must be 1 or 2, got {variant}")
    return ConstructionOutput("necessity", {"variant": variant, "n": n}, a, b, predicted)


def build_elementary(
    kind: Union[str, ElementaryType], n: int, h1: Iterable[int], g1: int = 0, g2: int = 0
) -> ConstructionOutput:
    """Type III or IV pair over H = G with H_1 given and H_2 its complementary part."""
    try:
        kind = ElementaryType(kind)
    except ValueError as exc:
        raise ParameterError(f"unknown elementary type {kind!r}") from exc
    if kind not in (ElementaryType.III, ElementaryType.IV):
        raise ParameterError(f"only types III and IV are constructed, got {kind.value}")
    ctx = GroupCtx(n)
    g1, g2 = ctx.check_element(g1), ctx.check_element(g2)
    part_one = SetF2.from_elements(ctx, h1)
    zero = SetF2.from_elements(ctx, [0])
    whole = Subgroup.full(ctx)

    if kind is ElementaryType.III:
        if 0 in part_one:
            raise ConstructionError("H_1 must not contain 0 for type III")
        part_two = complement(part_one | zero)
        if not part_one or not part_two:
            raise ConstructionError("H_1 and H_2 must both be non-empty")
        a, b = (part_one | zero).translate(g1), (part_two | zero).translate(g2)
        witness = ElementaryWitness(kind, g1=g1, g2=g2, subgroup=whole, h1=part_one, h2=part_two, c=g1 ^ g2)
        rest = SetF2.empty(ctx)
        predicted = Prediction(len(a), len(b), ctx.order, rest, None, False)
    else:
        part_two = complement(part_one)
        if not part_one or not part_two:
            raise ConstructionError("H_1 and H_2 must both be non-empty")
        a, b = part_one.translate(g1), part_two.translate(g2)
        witness = ElementaryWitness(kind, g1=g1, g2=g2, subgroup=whole, h1=part_one, h2=part_two)
        rest = SetF2.from_elements(ctx, [g1 ^ g2])
        predicted = Prediction(len(a), len(b), ctx.order - 1, rest, ctx.order, True)

    if not verify_elementary(a, b, witness):
        raise ConstructionError(f"H_1 = {format_set_literal(part_one)} does not give a type {kind.value} pair")
    params = {"kind": kind.value, "n": n, "h1": format_set_literal(part_one), "g1": g1, "g2": g2}
    return ConstructionOutput("elementary", params, a, b, predicted, witness)
