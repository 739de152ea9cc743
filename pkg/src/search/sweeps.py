"""Exhaustive, orbit-reduced and seeded random sweeps of the small-sumset theorems."""

from __future__ import annotations

import logging
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from group_core.context import GroupCtx
from group_core.errors import ParameterError
from group_core.literals import format_set_literal
from group_core.sets import SetF2
from structure.certificates import NodeKind, certificate_violation, certify
from structure.elementary import ElementaryType, sumset_matches_witness
from theorems.verdicts import (
    Outcome,
    Verdict,
    check_asymmetric,
    check_hp,
    check_kneser_corollary,
    check_main,
    check_seven_eighths_corollary,
)

from .batch import (
    DENSE_TABLE_MAX_ORDER,
    GATHER_BUDGET,
    all_rows,
    batch_mu,
    batch_sumsets,
    masks_to_rows,
    popcounts,
    span_indices,
    sumsets_with,
)
from .orbits import ORBIT_MAX_RANK, orbit_representatives
from .report import EMPTY_KEY, SweepReport

logger = logging.getLogger(__name__)

PAIR_THEOREMS = ("main", "asym", "kneser", "seven-eighths")
MODES = ("exhaustive", "orbit", "random")
EXHAUSTIVE_PAIR_MAX_RANK = 3
EXHAUSTIVE_SET_MAX_RANK = 4
# Share of random pairs whose A is drawn inside a translate of G \ B.
STRUCTURED_SHARE = 0.75
INSIDE_TRIM = 2


@dataclass(frozen=True)
class SweepOptions:
    threads: int = 1
    batch_size: int = 4096
    exemplar_limit: int = 16
    progress: bool = False


def _required_index(theorem: str, k: Optional[int]) -> Optional[int]:
    if theorem in ("main", "hp"):
        return 8
    if theorem == "asym":
        return 1 << k
    return None


def _full_verdict(theorem: str, a: SetF2, b: SetF2, k: Optional[int]) -> Verdict:
    if theorem == "main":
        return check_main(a, b)
    if theorem == "asym":
        return check_asymmetric(a, b, k)
    if theorem == "kneser":
        return check_kneser_corollary(a, b)
    if theorem == "seven-eighths":
        return check_seven_eighths_corollary(a, b)
    return check_hp(a)


def _literal(ctx: GroupCtx, row: np.ndarray) -> str:
    return format_set_literal(SetF2(ctx, row))


def _pair_hypotheses(
    theorem: str, k: Optional[int], order: int, sa: np.ndarray, sb: np.ndarray, ss: np.ndarray, spans: np.ndarray
) -> np.ndarray:
    if theorem == "kneser":
        return spans & (4 * ss < 4 * sa + 3 * sb)
    if theorem == "seven-eighths":
        return spans & (8 * ss < 7 * (sa + sb))
    hyp = spans & (ss < sa + sb) & (ss < order)
    if theorem == "asym":
        scale = 1 << k
        hyp &= scale * sb >= (scale - k - 1) * order
    return hyp


def _record_histogram(target: Dict[str, int], keys: np.ndarray, weights: np.ndarray) -> None:
    for key in np.unique(keys):
        label = EMPTY_KEY if key == 0 else str(int(key))
        target[label] = target.get(label, 0) + int(weights[keys == key].sum())


def _evaluate_pairs(
    report: SweepReport,
    ctx: GroupCtx,
    a_rows: np.ndarray,
    b_rows: np.ndarray,
    sums: np.ndarray,
    weights: np.ndarray,
    spans: np.ndarray,
) -> None:
    """Fold a batch of pairs into the report; `spans` flags rows where both spans are G."""
    theorem, k, order = report.theorem, report.k, ctx.order
    sa, sb, ss = popcounts(a_rows), popcounts(b_rows), popcounts(sums)
    hyp = _pair_hypotheses(theorem, k, order, sa, sb, ss, spans)
    if not hyp.any():
        return
    idx = np.flatnonzero(hyp)
    a_hit, b_hit, w = a_rows[idx], b_rows[idx], weights[idx]
    rest = ~sums[idx]
    rest_size = order - ss[idx]
    index = span_indices(rest)
    mu = batch_mu(a_hit, b_hit)
    report.pairs_satisfying_hypotheses += int(w.sum())
    _record_histogram(report.span_index_histogram, index, w)

    required = _required_index(theorem, k)
    if required is None:
        holds = rest_size == 0
    else:
        strict = required * rest_size < order
        holds = (rest_size == 0) | ((index >= required) & ((mu != 1) | strict))
        report.boundary_pairs += int(w[(rest_size > 0) & ~strict].sum())
        report.mu_one_pairs += int(w[mu == 1].sum())
        report.mu_one_strict += int(w[(mu == 1) & strict].sum())
        extremal = np.flatnonzero((rest_size > 0) & (index == required))
        report.add_exemplars([[_literal(ctx, a_hit[i]), _literal(ctx, b_hit[i])] for i in extremal])

    for i in np.flatnonzero(~holds):
        a, b = SetF2(ctx, a_hit[i]), SetF2(ctx, b_hit[i])
        verdict = _full_verdict(theorem, a, b, k)
        if verdict.outcome is Outcome.VIOLATION:
            report.violations.append({"A": format_set_literal(a), "B": format_set_literal(b), "verdict": verdict.to_dict()})
        else:
            logger.debug("batch statistics flagged %r, %r but the full check confirms it", a, b)


def _pair_unit(args: Tuple[str, int, Optional[int], int, int, int]) -> SweepReport:
    """One A (mask) against every B in F_2^n."""
    theorem, n, k, a_mask, weight, limit = args
    ctx = GroupCtx(n)
    report = SweepReport(theorem, n, "", k, exemplar_limit=limit)
    a_row = masks_to_rows(np.array([a_mask]), n)[0]
    b_rows = all_rows(n)
    total = b_rows.shape[0]
    report.pairs_scanned = weight * total
    report.pairs_evaluated = total
    a_spans = bool(span_indices(a_row[None, :])[0] == 1)
    if not a_spans:
        return report
    sums = sumsets_with(np.flatnonzero(a_row), b_rows)
    spans = span_indices(b_rows) == 1
    a_rows = np.broadcast_to(a_row, b_rows.shape)
    _evaluate_pairs(report, ctx, a_rows, b_rows, sums, np.full(total, weight, dtype=np.int64), spans)
    return report


def _random_rows(
    rng: np.random.Generator, sizes: np.ndarray, order: int, allowed: Optional[np.ndarray] = None
) -> np.ndarray:
    """Uniform subsets of the given sizes, drawn inside `allowed` when it is given."""
    keys = rng.random((sizes.size, order))
    if allowed is not None:
        keys = np.where(allowed, keys, 2.0)
    kth = np.sort(keys, axis=1)[np.arange(sizes.size), sizes - 1]
    rows = keys <= kth[:, None]
    return rows if allowed is None else rows & allowed


def _random_pairs(
    rng: np.random.Generator, theorem: str, k: Optional[int], order: int, count: int
) -> Tuple[np.ndarray, np.ndarray]:
    """B uniform by size; most A are drawn inside g + (G \\ B), so g is missing from A + B."""
    low_b = 1
    if theorem == "asym":
        scale = 1 << k
        low_b = max(-(-((scale - k - 1) * order) // scale), 1)
    size_b = rng.integers(low_b, order + 1, size=count)
    b_rows = _random_rows(rng, size_b, order)

    room = order - size_b
    shifts = rng.integers(order, size=count)
    allowed = ~b_rows[np.arange(count)[:, None], np.arange(order)[None, :] ^ shifts[:, None]]
    size_inside = np.maximum(room - rng.integers(0, INSIDE_TRIM + 1, size=count), 1)
    inside = _random_rows(rng, size_inside, order, allowed)

    if theorem == "asym":
        # |A| + |B| > |G| forces A + B = G
        size_free = rng.integers(1, np.maximum(room, 1) + 1)
    else:
        size_free = rng.integers(1, order + 1, size=count)
    free = _random_rows(rng, size_free, order)

    structured = (rng.random(count) < STRUCTURED_SHARE) & (room > 0)
    return np.where(structured[:, None], inside, free), b_rows


def _random_pair_unit(args: Tuple[str, int, Optional[int], int, int, int, int]) -> SweepReport:
    theorem, n, k, seed, batch_index, count, limit = args
    ctx = GroupCtx(n)
    rng = np.random.default_rng([seed, batch_index])
    report = SweepReport(theorem, n, "random", k, exemplar_limit=limit)
    a_rows, b_rows = _random_pairs(rng, theorem, k, ctx.order, count)
    report.pairs_scanned = report.pairs_evaluated = count
    sums = batch_sumsets(a_rows, b_rows)
    spans = (span_indices(a_rows) == 1) & (span_indices(b_rows) == 1)
    _evaluate_pairs(report, ctx, a_rows, b_rows, sums, np.ones(count, dtype=np.int64), spans)
    return report


def _evaluate_sets(report: SweepReport, ctx: GroupCtx, rows: np.ndarray, weights: np.ndarray) -> None:
    order = ctx.order
    sums = batch_sumsets(rows, rows)
    sa, ss = popcounts(rows), popcounts(sums)
    hyp = (span_indices(rows) == 1) & (ss < 2 * sa)
    if not hyp.any():
        return
    idx = np.flatnonzero(hyp)
    hit, w, hit_sums = rows[idx], weights[idx], ss[idx]
    rest_size = order - hit_sums
    index = span_indices(~sums[idx])
    mu = batch_mu(hit, hit)
    report.pairs_satisfying_hypotheses += int(w.sum())
    _record_histogram(report.span_index_histogram, index, w)
    for size in np.unique(hit_sums):
        key = str(int(size))
        report.sumset_size_histogram[key] = report.sumset_size_histogram.get(key, 0) + int(w[hit_sums == size].sum())
    smallest = int(hit_sums.min())
    report.min_sumset_size = smallest if report.min_sumset_size is None else min(report.min_sumset_size, smallest)

    strict = 8 * rest_size < order
    is_coset = rest_size * index == order
    holds = (8 * hit_sums >= 7 * order) & ((rest_size == 0) | (is_coset & (index >= 8)))
    report.boundary_pairs += int(w[(rest_size > 0) & ~strict].sum())
    report.mu_one_pairs += int(w[mu == 1].sum())
    report.mu_one_strict += int(w[(mu == 1) & strict].sum())
    extremal = np.flatnonzero((rest_size > 0) & (index == 8))
    report.add_exemplars([[_literal(ctx, hit[i])] for i in extremal])

    for i in np.flatnonzero(~holds):
        a = SetF2(ctx, hit[i])
        verdict = check_hp(a)
        if verdict.outcome is Outcome.VIOLATION:
            report.violations.append({"A": format_set_literal(a), "verdict": verdict.to_dict()})


def _set_unit(args: Tuple[int, Tuple[int, ...], Tuple[int, ...], int]) -> SweepReport:
    n, masks, weights, limit = args
    ctx = GroupCtx(n)
    report = SweepReport("hp", n, "", exemplar_limit=limit)
    weight_array = np.asarray(weights, dtype=np.int64)
    report.pairs_scanned = int(weight_array.sum())
    report.pairs_evaluated = len(masks)
    _evaluate_sets(report, ctx, masks_to_rows(np.asarray(masks, dtype=np.int64), n), weight_array)
    return report


def _random_set_unit(args: Tuple[int, int, int, int, int]) -> SweepReport:
    n, seed, batch_index, count, limit = args
    ctx = GroupCtx(n)
    rng = np.random.default_rng([seed, batch_index])
    report = SweepReport("hp", n, "random", exemplar_limit=limit)
    rows = _random_rows(rng, rng.integers(1, ctx.order + 1, size=count), ctx.order)
    report.pairs_scanned = report.pairs_evaluated = count
    _evaluate_sets(report, ctx, rows, np.ones(count, dtype=np.int64))
    return report


def _certify_pairs(report: SweepReport, ctx: GroupCtx, a_rows: np.ndarray, b_rows: np.ndarray, weights: np.ndarray) -> None:
    sa, sb = popcounts(a_rows), popcounts(b_rows)
    ss = popcounts(batch_sumsets(a_rows, b_rows))
    small = (sa > 0) & (sb > 0) & (ss < sa + sb)
    report.pairs_satisfying_hypotheses += int(weights[small].sum())
    lev_examples: List[List[str]] = []
    for i in np.flatnonzero(small):
        a, b, weight = SetF2(ctx, a_rows[i]), SetF2(ctx, b_rows[i]), int(weights[i])
        outcome = certify(a, b)
        record = {"A": format_set_literal(a), "B": format_set_literal(b)}
        if not outcome.kemperman_condition:
            report.kemperman_failures += weight
        if outcome.certificate is None:
            report.violations.append(dict(record, clause="certify", reason=outcome.failure_reason))
            continue
        clause = certificate_violation(a, b, outcome.certificate)
        if clause is not None:
            report.violations.append(dict(record, clause=clause))
            continue
        top = outcome.certificate
        if top.kind is NodeKind.ELEMENTARY and top.witness.type in (ElementaryType.III, ElementaryType.IV):
            if not _elementary_facts_hold(a, b, top.witness):
                report.violations.append(dict(record, clause="elementary.sumset_fact"))
                continue
        report.certified += weight
        for node in top.nodes():
            report.node_kind_tally[node.kind.value] = report.node_kind_tally.get(node.kind.value, 0) + weight
        if top.kind is NodeKind.LEV:
            lev_examples.append([record["A"], record["B"]])
    report.add_exemplars(lev_examples)


def _elementary_facts_hold(a: SetF2, b: SetF2, witness) -> bool:
    size = witness.subgroup.order
    if witness.type is ElementaryType.III:
        sizes_ok = len(a) + len(b) == size + 1
    else:
        sizes_ok = len(a) + len(b) == size
    return sizes_ok and sumset_matches_witness(a, b, witness)


def _census_unit(args: Tuple[int, int, int, int]) -> SweepReport:
    n, a_mask, weight, limit = args
    ctx = GroupCtx(n)
    report = SweepReport("lev", n, "", exemplar_limit=limit)
    b_rows = all_rows(n)
    total = b_rows.shape[0]
    report.pairs_scanned = weight * total
    report.pairs_evaluated = total
    a_rows = np.broadcast_to(masks_to_rows(np.array([a_mask]), n)[0], b_rows.shape)
    _certify_pairs(report, ctx, a_rows, b_rows, np.full(total, weight, dtype=np.int64))
    return report


def _random_census_unit(args: Tuple[int, int, int, int, int]) -> SweepReport:
    n, seed, batch_index, count, limit = args
    ctx = GroupCtx(n)
    rng = np.random.default_rng([seed, batch_index])
    report = SweepReport("lev", n, "random", exemplar_limit=limit)
    a_rows, b_rows = _random_pairs(rng, "lev", None, ctx.order, count)
    report.pairs_scanned = report.pairs_evaluated = count
    _certify_pairs(report, ctx, a_rows, b_rows, np.ones(count, dtype=np.int64))
    return report


def _run_units(
    worker: Callable[[tuple], SweepReport], units: Sequence[tuple], report: SweepReport, options: SweepOptions
) -> SweepReport:
    """Map units over a spawn process pool (or serially) and merge in submission order."""
    started = time.perf_counter()
    executor: Optional[ProcessPoolExecutor] = None
    if options.threads > 1 and len(units) > 1:
        try:
            executor = ProcessPoolExecutor(max_workers=options.threads, mp_context=mp.get_context("spawn"))
        except (NotImplementedError, PermissionError, OSError) as exc:
            logger.debug("parallel workers unavailable; falling back to serial (%s)", exc)
            executor = None
    try:
        results = executor.map(worker, units) if executor is not None else map(worker, units)
        desc = f"{report.theorem} n={report.n}"
        for part in tqdm(results, total=len(units), desc=desc, disable=not options.progress):
            part.mode = report.mode
            report = report.merge(part)
    finally:
        if executor is not None:
            executor.shutdown()
    report.wall_time_seconds = time.perf_counter() - started
    report.throughput = report.pairs_evaluated / report.wall_time_seconds if report.wall_time_seconds > 0 else 0.0
    logger.debug("%s sweep at n=%d: %d pairs in %.2fs", report.theorem, report.n, report.pairs_evaluated, report.wall_time_seconds)
    return report


def _check_mode(mode: str, n: int, exhaustive_cap: int, budget: Optional[int]) -> None:
    GroupCtx(n)
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    if mode == "exhaustive" and n > exhaustive_cap:
        raise ParameterError(f"exhaustive mode supports n <= {exhaustive_cap}, got {n}")
    if mode == "orbit" and n > ORBIT_MAX_RANK:
        raise ParameterError(f"orbit mode supports n <= {ORBIT_MAX_RANK}, got {n}")
    if mode == "random" and (budget is None or budget < 0):
        raise ParameterError("random mode needs a non-negative budget")


def _a_masks(mode: str, n: int) -> List[Tuple[int, int]]:
    if mode == "orbit":
        return list(orbit_representatives(n))
    return [(mask, 1) for mask in range(1 << (1 << n))]


def _random_batches(budget: int, n: int, batch_size: int) -> List[Tuple[int, int]]:
    """(batch_index, count) pairs covering the budget; sizes depend only on n and batch_size."""
    order = 1 << n
    if order <= DENSE_TABLE_MAX_ORDER:
        step = max(1, min(batch_size, GATHER_BUDGET // (order * order)))
    else:
        step = max(1, min(batch_size, 64))
    return [(i, min(step, budget - start)) for i, start in enumerate(range(0, budget, step))]


def _sweep_pairs(
    theorem: str, n: int, k: Optional[int], mode: str, budget: Optional[int], seed: int, options: SweepOptions
) -> SweepReport:
    _check_mode(mode, n, EXHAUSTIVE_PAIR_MAX_RANK, budget)
    report = SweepReport(theorem, n, mode, k, seed if mode == "random" else None, budget if mode == "random" else None, options.exemplar_limit)
    if mode == "random":
        units = [(theorem, n, k, seed, i, count, options.exemplar_limit) for i, count in _random_batches(budget, n, options.batch_size)]
        return _run_units(_random_pair_unit, units, report, options)
    units = [(theorem, n, k, mask, weight, options.exemplar_limit) for mask, weight in _a_masks(mode, n)]
    return _run_units(_pair_unit, units, report, options)


def sweep_main(
    n: int, mode: str = "exhaustive", budget: Optional[int] = None, seed: int = 0, options: Optional[SweepOptions] = None
) -> SweepReport:
    return _sweep_pairs("main", n, None, mode, budget, seed, options or SweepOptions())


def sweep_asymmetric(
    n: int,
    k: int,
    mode: str = "exhaustive",
    budget: Optional[int] = None,
    seed: int = 0,
    options: Optional[SweepOptions] = None,
) -> SweepReport:
    if k < 4:
        raise ParameterError(f"k must be at least 4, got {k}")
    return _sweep_pairs("asym", n, k, mode, budget, seed, options or SweepOptions())


def sweep_kneser(
    n: int, mode: str = "exhaustive", budget: Optional[int] = None, seed: int = 0, options: Optional[SweepOptions] = None
) -> SweepReport:
    return _sweep_pairs("kneser", n, None, mode, budget, seed, options or SweepOptions())


def sweep_seven_eighths(
    n: int, mode: str = "exhaustive", budget: Optional[int] = None, seed: int = 0, options: Optional[SweepOptions] = None
) -> SweepReport:
    return _sweep_pairs("seven-eighths", n, None, mode, budget, seed, options or SweepOptions())


def sweep_hp(
    n: int, mode: str = "exhaustive", budget: Optional[int] = None, seed: int = 0, options: Optional[SweepOptions] = None
) -> SweepReport:
    options = options or SweepOptions()
    _check_mode(mode, n, EXHAUSTIVE_SET_MAX_RANK, budget)
    report = SweepReport("hp", n, mode, None, seed if mode == "random" else None, budget if mode == "random" else None, options.exemplar_limit)
    if mode == "random":
        units = [(n, seed, i, count, options.exemplar_limit) for i, count in _random_batches(budget, n, options.batch_size)]
        return _run_units(_random_set_unit, units, report, options)
    pairs = _a_masks(mode, n)
    step = max(1, options.batch_size)
    units = []
    for start in range(0, len(pairs), step):
        chunk = pairs[start : start + step]
        units.append((n, tuple(m for m, _ in chunk), tuple(w for _, w in chunk), options.exemplar_limit))
    return _run_units(_set_unit, units, report, options)


def census_certificates(
    n: int, mode: str = "exhaustive", budget: Optional[int] = None, seed: int = 0, options: Optional[SweepOptions] = None
) -> SweepReport:
    """Certify and re-verify every pair with |A+B| < |A|+|B|; violations list any failure."""
    options = options or SweepOptions()
    _check_mode(mode, n, EXHAUSTIVE_PAIR_MAX_RANK, budget)
    report = SweepReport("lev", n, mode, None, seed if mode == "random" else None, budget if mode == "random" else None, options.exemplar_limit)
    if mode == "random":
        units = [(n, seed, i, count, options.exemplar_limit) for i, count in _random_batches(budget, n, options.batch_size)]
        return _run_units(_random_census_unit, units, report, options)
    units = [(n, mask, weight, options.exemplar_limit) for mask, weight in _a_masks(mode, n)]
    return _run_units(_census_unit, units, report, options)
