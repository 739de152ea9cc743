"""Sweep reports: mergeable counters, exemplars and violations."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = 1
TIMING_FIELDS = ("wall_time_seconds", "throughput")
EMPTY_KEY = "empty"


def _canonical(record: Any) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256_of_json(record: Dict[str, Any]) -> str:
    return hashlib.sha256(_canonical(record).encode("utf-8")).hexdigest()


def _add(left: Dict[str, int], right: Dict[str, int]) -> Dict[str, int]:
    total = Counter(left)
    total.update(right)
    return dict(total)


def _min_optional(left: Optional[int], right: Optional[int]) -> Optional[int]:
    values = [v for v in (left, right) if v is not None]
    return min(values) if values else None


@dataclass
class SweepReport:
    """Counters of one sweep.

    Counts of pairs are weighted by orbit size in orbit mode; `pairs_evaluated`
    counts what was actually examined. Merging is commutative and associative.
    """

    theorem: str
    n: int
    mode: str
    k: Optional[int] = None
    seed: Optional[int] = None
    budget: Optional[int] = None
    exemplar_limit: int = 16
    pairs_scanned: int = 0
    pairs_evaluated: int = 0
    pairs_satisfying_hypotheses: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)
    span_index_histogram: Dict[str, int] = field(default_factory=dict)
    boundary_pairs: int = 0
    mu_one_pairs: int = 0
    mu_one_strict: int = 0
    exemplars: List[List[str]] = field(default_factory=list)
    sumset_size_histogram: Dict[str, int] = field(default_factory=dict)
    min_sumset_size: Optional[int] = None
    node_kind_tally: Dict[str, int] = field(default_factory=dict)
    kemperman_failures: int = 0
    certified: int = 0
    wall_time_seconds: float = 0.0
    throughput: float = 0.0

    def empty_like(self) -> "SweepReport":
        return SweepReport(self.theorem, self.n, self.mode, self.k, self.seed, self.budget, self.exemplar_limit)

    def add_exemplars(self, candidates: List[List[str]]) -> None:
        self.exemplars = sorted(self.exemplars + [list(c) for c in candidates])[: self.exemplar_limit]

    def merge(self, other: "SweepReport") -> "SweepReport":
        if (self.theorem, self.n, self.mode, self.k) != (other.theorem, other.n, other.mode, other.k):
            raise ValueError("only reports of the same sweep can be merged")
        merged = replace(
            self,
            pairs_scanned=self.pairs_scanned + other.pairs_scanned,
            pairs_evaluated=self.pairs_evaluated + other.pairs_evaluated,
            pairs_satisfying_hypotheses=self.pairs_satisfying_hypotheses + other.pairs_satisfying_hypotheses,
            violations=sorted(self.violations + other.violations, key=_canonical),
            span_index_histogram=_add(self.span_index_histogram, other.span_index_histogram),
            boundary_pairs=self.boundary_pairs + other.boundary_pairs,
            mu_one_pairs=self.mu_one_pairs + other.mu_one_pairs,
            mu_one_strict=self.mu_one_strict + other.mu_one_strict,
            exemplars=list(self.exemplars),
            sumset_size_histogram=_add(self.sumset_size_histogram, other.sumset_size_histogram),
            min_sumset_size=_min_optional(self.min_sumset_size, other.min_sumset_size),
            node_kind_tally=_add(self.node_kind_tally, other.node_kind_tally),
            kemperman_failures=self.kemperman_failures + other.kemperman_failures,
            certified=self.certified + other.certified,
            wall_time_seconds=self.wall_time_seconds + other.wall_time_seconds,
        )
        merged.add_exemplars(other.exemplars)
        return merged

    @property
    def min_span_index(self) -> Optional[int]:
        indices = [int(key) for key in self.span_index_histogram if key != EMPTY_KEY]
        return min(indices) if indices else None

    @property
    def vacuous(self) -> bool:
        return self.pairs_satisfying_hypotheses == 0

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        record = {
            "schema_version": SCHEMA_VERSION,
            "theorem": self.theorem,
            "n": self.n,
            "mode": self.mode,
            "k": self.k,
            "seed": self.seed,
            "budget": self.budget,
            "exemplar_limit": self.exemplar_limit,
            "pairs_scanned": self.pairs_scanned,
            "pairs_evaluated": self.pairs_evaluated,
            "pairs_satisfying_hypotheses": self.pairs_satisfying_hypotheses,
            "violations": list(self.violations),
            "span_index_histogram": dict(sorted(self.span_index_histogram.items())),
            "boundary_pairs": self.boundary_pairs,
            "mu_one_pairs": self.mu_one_pairs,
            "mu_one_strict": self.mu_one_strict,
            "exemplars": [list(e) for e in self.exemplars],
            "sumset_size_histogram": dict(sorted(self.sumset_size_histogram.items())),
            "min_sumset_size": self.min_sumset_size,
            "node_kind_tally": dict(sorted(self.node_kind_tally.items())),
            "kemperman_failures": self.kemperman_failures,
            "certified": self.certified,
        }
        if include_timing:
            for name in TIMING_FIELDS:
                record[name] = getattr(self, name)
        return record

    def fingerprint(self) -> str:
        """sha256 of the report without its timing fields."""
        return sha256_of_json(self.to_dict(include_timing=False))
