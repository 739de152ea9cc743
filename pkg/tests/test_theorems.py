# Run tests: pytest -q
from pathlib import Path
import sys

import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from constructions.families import build_noncoset_complement, build_span_necessity, build_tight_extremal  # noqa: E402
from group_core.context import GroupCtx  # noqa: E402
from group_core.errors import EmptySetError, ParameterError  # noqa: E402
from group_core.sets import SetF2, sumset  # noqa: E402
from group_core.subgroups import Subgroup, affine_span  # noqa: E402
from theorems.verdicts import (  # noqa: E402
    Outcome,
    asymmetric_rank_admissible,
    check_asymmetric,
    check_hp,
    check_kneser_corollary,
    check_main,
    check_seven_eighths_corollary,
    quotient_rank_admissible,
)


def S(n, elements):
    return SetF2.from_elements(GroupCtx(n), elements)


def random_pair(rng, n, p):
    ctx = GroupCtx(n)
    return SetF2(ctx, rng.random(ctx.order) < p), SetF2(ctx, rng.random(ctx.order) < p)


def test_main_on_tight_extremal_pair():
    out = build_tight_extremal(3, rank_f=1)
    verdict = check_main(out.a, out.b)
    assert verdict.outcome is Outcome.CONFIRMED
    assert verdict.complement_size == 2
    assert verdict.complement_span_index == 8
    assert verdict.complement_is_coset
    assert not verdict.strict_containment
    assert verdict.mu_value >= 2
    assert set(verdict.complement_span.members()) == {0, 8}


def test_main_on_full_group_is_vacuous():
    full = SetF2.full(GroupCtx(3))
    verdict = check_main(full, full)
    assert not verdict.hypotheses["sumset_proper"]
    assert verdict.outcome is Outcome.VACUOUS


def test_main_on_noncoset_pair_is_strict_under_mu_one():
    out = build_noncoset_complement(1)
    verdict = check_main(out.a, out.b)
    assert verdict.sumset_size == 15
    assert verdict.complement_size == 1
    assert verdict.mu_value == 1
    assert verdict.strict_containment
    assert verdict.outcome is Outcome.CONFIRMED


def test_verdict_record_fields():
    out = build_tight_extremal(3, rank_f=1)
    record = check_main(out.a, out.b).to_dict()
    assert record["theorem"] == "main"
    assert record["outcome"] == "confirmed"
    assert record["span_index"] == 8
    assert record["required_index"] == 8
    assert record["strict"] is False
    assert record["span_rep"] == 0 and record["span_basis"] == [8]


def test_asymmetric_on_tight_extremal_pair():
    out = build_tight_extremal(4, rank_f=1)
    assert len(out.b) == 22
    verdict = check_asymmetric(out.a, out.b, 4)
    assert verdict.hypotheses["b_large"]
    assert verdict.outcome is Outcome.CONFIRMED
    assert verdict.complement_span_index == 16
    assert not verdict.strict_containment
    assert verdict.extras["k"] == 4

    out = build_tight_extremal(4, rank_f=0)
    verdict = check_asymmetric(out.a, out.b, 4)
    assert verdict.outcome is Outcome.CONFIRMED
    assert verdict.complement_size == 1


def test_asymmetric_rejects_small_b_and_small_k():
    out = build_tight_extremal(4, rank_f=0)
    smaller = out.b - S(4, [out.b.min_element()])
    assert not check_asymmetric(out.a, smaller, 4).hypotheses["b_large"]
    with pytest.raises(ParameterError):
        check_asymmetric(out.a, out.b, 3)


def test_empty_input_is_rejected():
    with pytest.raises(EmptySetError):
        check_main(SetF2.empty(GroupCtx(2)), S(2, [0]))
    with pytest.raises(EmptySetError):
        check_hp(SetF2.empty(GroupCtx(2)))


def test_hp_examples():
    full = check_hp(SetF2.full(GroupCtx(3)))
    assert full.hypotheses_hold and full.outcome is Outcome.CONFIRMED
    half = Subgroup(GroupCtx(3), [1, 2]).members
    assert check_hp(half).outcome is Outcome.VACUOUS
    tight = check_hp(S(3, [0, 1, 2, 4]))
    assert tight.outcome is Outcome.CONFIRMED
    assert tight.complement_is_coset and tight.complement_span_index == 8
    assert tight.extras["seven_eighths"]


def test_hp_exhaustive_at_rank_three():
    ctx = GroupCtx(3)
    satisfied = 0
    for mask in range(1, 256):
        verdict = check_hp(SetF2.from_mask(ctx, mask))
        assert verdict.outcome is not Outcome.VIOLATION
        if verdict.hypotheses_hold:
            satisfied += 1
            assert 8 * verdict.sumset_size >= 7 * 8
    assert satisfied > 0


def test_kneser_corollary_and_necessity_witnesses():
    full = SetF2.full(GroupCtx(3))
    assert check_kneser_corollary(full, full).outcome is Outcome.CONFIRMED
    for variant, n in ((1, 4), (1, 3), (2, 3)):
        out = build_span_necessity(variant, n)
        verdict = check_kneser_corollary(out.a, out.b)
        assert verdict.hypotheses["below_three_quarters"]
        assert not verdict.conclusion_holds
        spans = [verdict.hypotheses["span_a_full"], verdict.hypotheses["span_b_full"]]
        assert spans.count(False) == 1
        assert verdict.outcome is Outcome.VACUOUS


def test_seven_eighths_corollary():
    full = SetF2.full(GroupCtx(2))
    verdict = check_seven_eighths_corollary(full, full)
    assert verdict.outcome is Outcome.CONFIRMED
    out = build_tight_extremal(3, rank_f=1)
    # 8 * 14 < 7 * 16 fails, so the extremal pair is outside the corollary
    assert check_seven_eighths_corollary(out.a, out.b).outcome is Outcome.VACUOUS


def test_base_case_spanning_pairs_cover_small_groups():
    for n in (1, 2):
        ctx = GroupCtx(n)
        for ma in range(1, 1 << ctx.order):
            a = SetF2.from_mask(ctx, ma)
            if not affine_span(a).subgroup.is_full():
                continue
            for mb in range(1, 1 << ctx.order):
                b = SetF2.from_mask(ctx, mb)
                if affine_span(b).subgroup.is_full():
                    assert sumset(a, b).is_full()


def test_random_pairs_never_violate_and_mu_one_is_strict():
    rng = np.random.default_rng(42)
    for _ in range(400):
        n = int(rng.integers(3, 6))
        a, b = random_pair(rng, n, float(rng.uniform(0.3, 0.8)))
        if not a or not b:
            continue
        verdict = check_main(a, b)
        assert verdict.outcome is not Outcome.VIOLATION
        if verdict.outcome is Outcome.CONFIRMED and verdict.mu_value == 1:
            assert verdict.strict_containment
        for k in (4, 5):
            asym = check_asymmetric(a, b, k)
            assert asym.outcome is not Outcome.VIOLATION
            if asym.outcome is Outcome.CONFIRMED:
                assert verdict.conclusion_holds
        assert check_kneser_corollary(a, b).outcome is not Outcome.VIOLATION
        assert check_seven_eighths_corollary(a, b).outcome is not Outcome.VIOLATION


def test_proof_index_inequalities():
    assert not quotient_rank_admissible(1)
    assert not quotient_rank_admissible(2)
    assert all(quotient_rank_admissible(m) for m in range(3, 31))
    for k in range(4, 31):
        assert not any(asymmetric_rank_admissible(m, k) for m in range(1, k))
        assert asymmetric_rank_admissible(k, k)


def test_asymmetric_extras_do_not_leak_into_other_verdicts():
    out = build_tight_extremal(4, rank_f=0)
    assert check_asymmetric(out.a, out.b, 4).extras == {"k": 4}
    assert check_main(out.a, out.b).extras == {}
