# Run tests: pytest -q
from collections import Counter
from functools import lru_cache
from pathlib import Path
import sys

import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))
from constructions.families import build_tight_extremal  # noqa: E402
from group_core.context import GroupCtx  # noqa: E402
from group_core.errors import ParameterError  # noqa: E402
from group_core.literals import parse_set_literal  # noqa: E402
from group_core.sets import SetF2, complement, mu, sumset  # noqa: E402
from group_core.subgroups import affine_span  # noqa: E402
from search.batch import batch_mu, batch_sumsets, masks_to_rows, rows_to_masks, span_indices  # noqa: E402
from search.orbits import canonical_form, canonical_mask, orbit_masks, orbit_representatives  # noqa: E402
from search.report import SweepReport  # noqa: E402
from search.sweeps import (  # noqa: E402
    SweepOptions,
    census_certificates,
    sweep_asymmetric,
    sweep_hp,
    sweep_kneser,
    sweep_main,
    sweep_seven_eighths,
)

# Brute-force oracle on plain Python sets.

def elements(mask, order):
    return [x for x in range(order) if (mask >> x) & 1]

def to_mask(values):
    out = 0
    for x in values:
        out |= 1 << x
    return out

def span_index(values, n):
    """|G| / |affine span|, or 0 for the empty set."""
    if not values:
        return 0
    base = values[0]
    basis = []
    for x in values:
        v = x ^ base
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return 1 << (n - len(basis))

def brute_mu(a, b):
    counts = Counter(x ^ y for x in a for y in b)
    return min(counts.values())

@lru_cache(maxsize=None)
def oracle_main(n):
    order = 1 << n
    sets = [elements(m, order) for m in range(1 << order)]
    spanning = [m for m in range(1, 1 << order) if span_index(sets[m], n) == 1]
    stats = Counter()
    histogram = Counter()
    for ma in spanning:
        for mb in spanning:
            a, b = sets[ma], sets[mb]
            total = {x ^ y for x in a for y in b}
            if len(total) >= min(len(a) + len(b), order):
                continue
            rest = [x for x in range(order) if x not in total]
            stats["hyp"] += 1
            histogram[str(span_index(rest, n))] += 1
            strict = 8 * len(rest) < order
            stats["boundary"] += not strict
            if brute_mu(a, b) == 1:
                stats["mu_one"] += 1
                stats["mu_one_strict"] += strict
    return stats, dict(histogram)

def oracle_hp(n):
    order = 1 << n
    sizes = Counter()
    for m in range(1, 1 << order):
        a = elements(m, order)
        if span_index(a, n) != 1:
            continue
        doubled = {x ^ y for x in a for y in a}
        if len(doubled) < 2 * len(a):
            sizes[str(len(doubled))] += 1
    return dict(sizes)

def random_rows(rng, count, n, p=0.5):
    return rng.random((count, 1 << n)) < p

# batch statistics against the scalar operations

def test_masks_and_rows_round_trip():
    masks = np.array([0, 1, 0x17, 0xFF])
    rows = masks_to_rows(masks, 3)
    assert rows.shape == (4, 8)
    assert list(rows_to_masks(rows)) == list(masks)

def test_batch_statistics_match_scalar_operations():
    rng = np.random.default_rng(5)
    n = 4
    ctx = GroupCtx(n)
    a_rows, b_rows = random_rows(rng, 60, n, 0.4), random_rows(rng, 60, n, 0.4)
    a_rows[0] = False
    sums = batch_sumsets(a_rows, b_rows)
    index = span_indices(a_rows)
    mus = batch_mu(a_rows, b_rows)
    for i in range(60):
        a, b = SetF2(ctx, a_rows[i]), SetF2(ctx, b_rows[i])
        assert SetF2(ctx, sums[i]) == sumset(a, b)
        if not a:
            assert index[i] == 0 and mus[i] == 0
            continue
        assert index[i] == affine_span(a).index == span_index(list(a), n)
        if b:
            assert mus[i] == mu(a, b) == brute_mu(list(a), list(b))

# orbits

def test_two_element_sets_form_one_orbit():
    twos = {canonical_mask(to_mask([x, y]), 2) for x in range(4) for y in range(x + 1, 4)}
    assert twos == {0b11}

def test_canonical_form_is_invariant_and_idempotent():
    rng = np.random.default_rng(9)
    for n in (3, 4):
        ctx = GroupCtx(n)
        for _ in range(10):
            a = SetF2(ctx, rng.random(ctx.order) < 0.5)
            shift = int(rng.integers(ctx.order))
            canon = canonical_form(a)
            assert canonical_form(a.translate(shift)) == canon
            assert canonical_form(canon) == canon
            assert canon.to_mask() <= a.to_mask()
        assert canonical_form(SetF2.empty(ctx)) == SetF2.empty(ctx)
        assert canonical_form(SetF2.full(ctx)) == SetF2.full(ctx)

def test_canonical_form_under_a_linear_map():
    # (x0, x1, x2) -> (x0 ^ x1, x1, x2 ^ x0)
    def image(x):
        x0, x1, x2 = x & 1, (x >> 1) & 1, (x >> 2) & 1
        return (x0 ^ x1) | (x1 << 1) | ((x2 ^ x0) << 2)

    for mask in (0b10110, 0b1001011, 0xA5):
        moved = to_mask(image(x) for x in elements(mask, 8))
        assert canonical_mask(moved, 3) == canonical_mask(mask, 3)

def test_orbit_sizes_cover_every_subset():
    for n in (1, 2, 3):
        reps = orbit_representatives(n)
        assert sum(size for _, size in reps) == 1 << (1 << n)
        for mask, size in reps:
            orbit = orbit_masks(mask, n)
            assert orbit.size == size and int(orbit.min()) == mask
    assert len(orbit_representatives(2)) == 5

# sweeps

def test_main_sweep_at_rank_two_is_vacuous():
    report = sweep_main(2)
    assert report.pairs_scanned == 1 << 8
    assert report.vacuous
    assert report.violations == []

def test_main_sweep_matches_the_oracle_at_rank_three():
    stats, histogram = oracle_main(3)
    report = sweep_main(3)
    assert report.pairs_scanned == report.pairs_evaluated == 1 << 16
    assert report.pairs_satisfying_hypotheses == stats["hyp"] > 0
    assert report.span_index_histogram == histogram
    assert report.boundary_pairs == stats["boundary"]
    assert report.mu_one_pairs == stats["mu_one"]
    assert report.mu_one_strict == stats["mu_one_strict"]
    assert report.violations == []
    assert report.min_span_index == 8

def test_orbit_sweep_weights_reproduce_exhaustive_counts():
    full = sweep_main(3).to_dict(include_timing=False)
    reduced = sweep_main(3, "orbit").to_dict(include_timing=False)
    for name in (
        "pairs_scanned",
        "pairs_satisfying_hypotheses",
        "span_index_histogram",
        "boundary_pairs",
        "mu_one_pairs",
        "mu_one_strict",
    ):
        assert reduced[name] == full[name], name
    assert reduced["pairs_evaluated"] < full["pairs_evaluated"]

def test_exemplars_sit_at_the_required_index():
    report = sweep_main(3, options=SweepOptions(exemplar_limit=4))
    assert 0 < len(report.exemplars) <= 4
    assert report.exemplars == sorted(report.exemplars)
    for a_text, b_text in report.exemplars:
        a, b = parse_set_literal(a_text), parse_set_literal(b_text)
        rest = complement(sumset(a, b))
        assert rest and affine_span(rest).index == 8

def test_hp_sweep_matches_the_oracle_at_rank_three():
    report = sweep_hp(3)
    assert report.pairs_scanned == 1 << 8
    assert report.sumset_size_histogram == oracle_hp(3)
    assert report.violations == []
    assert 8 * report.min_sumset_size >= 7 * 8
    assert sweep_hp(3, "orbit").sumset_size_histogram == report.sumset_size_histogram

def test_corollary_sweeps_have_no_violations():
    kneser = sweep_kneser(3)
    assert not kneser.vacuous and kneser.violations == []
    assert sweep_seven_eighths(3).violations == []

def test_asymmetric_sweep_parameters():
    with pytest.raises(ParameterError):
        sweep_asymmetric(3, 3)
    assert sweep_asymmetric(3, 4).vacuous

def test_random_pair_sweeps_reach_the_hypotheses():
    main = sweep_main(5, "random", budget=2000, seed=0)
    assert main.pairs_scanned == 2000
    assert main.pairs_satisfying_hypotheses * 20 >= main.pairs_scanned
    assert main.violations == []
    assert main.min_span_index >= 8

    asym = sweep_asymmetric(5, 4, "random", budget=2000, seed=2)
    assert asym.pairs_satisfying_hypotheses * 100 >= asym.pairs_scanned
    assert asym.violations == []
    assert asym.min_span_index >= 16

def test_random_census_certifies_every_small_pair():
    for n in (4, 5):
        report = census_certificates(n, "random", budget=300, seed=1)
        assert report.pairs_satisfying_hypotheses > 0
        assert report.certified == report.pairs_satisfying_hypotheses
        assert report.violations == []

def test_mode_errors():
    with pytest.raises(ParameterError):
        sweep_main(4)
    with pytest.raises(ParameterError):
        sweep_main(5, "orbit")
    with pytest.raises(ParameterError):
        sweep_main(3, "random")
    with pytest.raises(ParameterError):
        sweep_main(3, "sideways")

def test_random_sweep_is_deterministic():
    first = sweep_main(5, "random", budget=800, seed=11)
    again = sweep_main(5, "random", budget=800, seed=11)
    other = sweep_main(5, "random", budget=800, seed=12)
    assert first.fingerprint() == again.fingerprint()
    assert first.fingerprint() != other.fingerprint()
    assert first.pairs_scanned == 800 and first.seed == 11
    assert first.violations == []

def test_random_sweep_does_not_depend_on_worker_count():
    serial = sweep_main(4, "random", budget=600, seed=3, options=SweepOptions(batch_size=64))
    pooled = sweep_main(4, "random", budget=600, seed=3, options=SweepOptions(threads=2, batch_size=64))
    assert serial.fingerprint() == pooled.fingerprint()

def test_census_at_rank_two_certifies_everything():
    report = census_certificates(2)
    assert report.pairs_satisfying_hypotheses > 0
    assert report.certified == report.pairs_satisfying_hypotheses
    assert report.violations == []
    assert report.node_kind_tally["elementary"] > 0
    assert report.kemperman_failures > 0

# reports

def _report(**counts):
    report = SweepReport("main", 3, "exhaustive", exemplar_limit=2)
    for name, value in counts.items():
        setattr(report, name, value)
    return report

def test_report_merge_is_commutative_and_keeps_smallest_exemplars():
    left = _report(pairs_scanned=3, span_index_histogram={"8": 2}, exemplars=[["b", "x"]], min_sumset_size=9)
    right = _report(pairs_scanned=5, span_index_histogram={"8": 1, "empty": 4}, exemplars=[["a", "y"], ["c", "z"]])
    one, two = left.merge(right), right.merge(left)
    assert one.to_dict(include_timing=False) == two.to_dict(include_timing=False)
    assert one.pairs_scanned == 8
    assert one.span_index_histogram == {"8": 3, "empty": 4}
    assert one.exemplars == [["a", "y"], ["b", "x"]]
    assert one.min_sumset_size == 9
    assert one.min_span_index == 8

def test_report_merge_rejects_other_sweeps():
    with pytest.raises(ValueError):
        _report().merge(SweepReport("main", 4, "exhaustive"))
    with pytest.raises(ValueError):
        _report().merge(SweepReport("main", 3, "orbit"))

def test_fingerprint_ignores_timing():
    left, right = _report(pairs_scanned=2), _report(pairs_scanned=2)
    right.wall_time_seconds, right.throughput = 3.5, 10.0
    assert left.fingerprint() == right.fingerprint()
    assert "wall_time_seconds" in right.to_dict()

@pytest.mark.slow
def test_main_orbit_sweep_at_rank_four_reaches_the_tight_pair():
    report = sweep_main(4, "orbit", options=SweepOptions(exemplar_limit=1 << 20))
    assert report.violations == []
    assert report.min_span_index == 8
    tight = build_tight_extremal(3, rank_f=1)
    target = (canonical_mask(tight.a.to_mask(), 4), canonical_mask(tight.b.to_mask(), 4))
    forms = {
        (canonical_mask(parse_set_literal(a).to_mask(), 4), canonical_mask(parse_set_literal(b).to_mask(), 4))
        for a, b in report.exemplars
    }
    assert target in forms

@pytest.mark.slow
def test_hp_orbit_sweep_at_rank_four():
    report = sweep_hp(4, "orbit")
    assert report.violations == []
    assert 8 * report.min_sumset_size >= 7 * 16
    assert report.pairs_scanned == 1 << 16

@pytest.mark.slow
def test_census_at_rank_three_certifies_everything():
    report = census_certificates(3)
    assert report.certified == report.pairs_satisfying_hypotheses
    assert report.violations == []
    assert report.node_kind_tally.get("deperiodize", 0) > 0

@pytest.mark.slow
def test_kneser_orbit_sweep_at_rank_four():
    report = sweep_kneser(4, "orbit")
    assert report.violations == []
    assert not report.vacuous

@pytest.mark.slow
def test_asymmetric_orbit_sweep_at_rank_four_reaches_the_tight_pair():
    report = sweep_asymmetric(4, 4, "orbit", options=SweepOptions(exemplar_limit=1 << 20))
    assert report.violations == []
    assert report.min_span_index == 16
    tight = build_tight_extremal(4, rank_f=0)
    target = (canonical_mask(tight.a.to_mask(), 4), canonical_mask(tight.b.to_mask(), 4))
    forms = {
        (canonical_mask(parse_set_literal(a).to_mask(), 4), canonical_mask(parse_set_literal(b).to_mask(), 4))
        for a, b in report.exemplars
    }
    assert target in forms

@pytest.mark.slow
def test_census_orbit_sweep_at_rank_four():
    report = census_certificates(4, "orbit")
    assert report.pairs_satisfying_hypotheses > 0
    assert report.certified == report.pairs_satisfying_hypotheses
    assert report.violations == []

@pytest.mark.slow
def test_asymmetric_random_sweep_at_full_budget():
    report = sweep_asymmetric(5, 4, "random", budget=10**6, seed=0, options=SweepOptions(threads=4))
    assert report.pairs_scanned == 10**6
    assert report.pairs_satisfying_hypotheses > 0
    assert report.violations == []
    assert report.min_span_index >= 16
