"""The ambient group F_2^n and its rank cap."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import ContextMismatchError, ParameterError, RankCapError

DEFAULT_MAX_RANK = 20
MAX_RANK_ENV = "F2SUMSET_MAX_RANK"

_configured_max_rank: Optional[int] = None


def configure_max_rank(value: Optional[int]) -> None:
    """Set the rank cap from configuration; the environment still wins."""
    global _configured_max_rank
    if value is not None and int(value) < 0:
        raise RankCapError(f"max_rank must be non-negative, got {value}")
    _configured_max_rank = None if value is None else int(value)


def max_rank() -> int:
    raw = os.environ.get(MAX_RANK_ENV, "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise RankCapError(f"{MAX_RANK_ENV} must be an integer, got {raw!r}") from exc
        if value < 0:
            raise RankCapError(f"{MAX_RANK_ENV} must be non-negative, got {value}")
        return value
    if _configured_max_rank is not None:
        return _configured_max_rank
    return DEFAULT_MAX_RANK


@lru_cache(maxsize=None)
def element_indices(rank: int) -> np.ndarray:
    """All elements 0..2^rank-1 as a read-only int64 array."""
    indices = np.arange(1 << rank, dtype=np.int64)
    indices.setflags(write=False)
    return indices


@dataclass(frozen=True)
class GroupCtx:
    """F_2^rank; coordinate i of an element is bit i, the group law is XOR."""

    rank: int

    def __post_init__(self) -> None:
        if not isinstance(self.rank, (int, np.integer)) or self.rank < 0:
            raise RankCapError(f"rank must be a non-negative integer, got {self.rank!r}")
        cap = max_rank()
        if self.rank > cap:
            raise RankCapError(f"rank {self.rank} exceeds the cap {cap} (set {MAX_RANK_ENV} to raise it)")
        object.__setattr__(self, "rank", int(self.rank))

    @property
    def order(self) -> int:
        return 1 << self.rank

    def indices(self) -> np.ndarray:
        return element_indices(self.rank)

    def check_element(self, element: int) -> int:
        value = int(element)
        if not 0 <= value < self.order:
            raise ParameterError(f"element {element} is outside F_2^{self.rank}")
        return value

    def require_same(self, other: "GroupCtx") -> None:
        if self.rank != other.rank:
            raise ContextMismatchError(f"operands live in F_2^{self.rank} and F_2^{other.rank}")
