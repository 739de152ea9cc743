"""Affine-orbit canonical forms of subsets of F_2^n under AGL(n, 2)."""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Iterator, List, Tuple

import numpy as np

from group_core.context import element_indices
from group_core.errors import ParameterError, RankCapError
from group_core.sets import SetF2

logger = logging.getLogger(__name__)

EXACT_CANONICAL_MAX_RANK = 5
ORBIT_MAX_RANK = 4
# Full image tables are cached up to this rank; rank 5 streams them.
CACHED_TABLE_MAX_RANK = 4


def _column_blocks(n: int) -> Iterator[np.ndarray]:
    """Invertible n x n matrices as column tuples, one block per first column."""
    order = 1 << n
    indices = element_indices(n)
    for first in range(1, order):
        cols = np.full((1, 1), first, dtype=np.int64)
        span = np.zeros((1, order), dtype=bool)
        span[0, [0, first]] = True
        for _ in range(1, n):
            idx, candidates = np.nonzero(~span)
            cols = np.column_stack([cols[idx], candidates])
            parent = span[idx]
            rows = np.arange(idx.size)[:, None]
            span = parent | parent[rows, indices[None, :] ^ candidates[:, None]]
        yield cols


def _image_table(cols: np.ndarray) -> np.ndarray:
    """T[m, x] = M_m x for the matrices given by their columns."""
    count, n = cols.shape
    order = 1 << n
    table = np.zeros((count, order), dtype=np.int64)
    for x in range(1, order):
        low = (x & -x).bit_length() - 1
        table[:, x] = table[:, x & (x - 1)] ^ cols[:, low]
    return table


def linear_image_blocks(n: int) -> Iterator[np.ndarray]:
    if n == 0:
        yield np.zeros((1, 1), dtype=np.int64)
        return
    for cols in _column_blocks(n):
        yield _image_table(cols)


@lru_cache(maxsize=None)
def affine_table(n: int) -> np.ndarray:
    """Every affine bijection x -> Mx + t of F_2^n as a row of images (n <= 4)."""
    if n > CACHED_TABLE_MAX_RANK:
        raise RankCapError(f"affine tables are cached only up to rank {CACHED_TABLE_MAX_RANK}")
    linear = np.concatenate(list(linear_image_blocks(n)), axis=0)
    order = 1 << n
    table = (linear[:, None, :] ^ np.arange(order)[None, :, None]).reshape(-1, order)
    table.setflags(write=False)
    logger.debug("affine table for n=%d has %d rows", n, table.shape[0])
    return table


def _image_masks(table: np.ndarray, elements: np.ndarray) -> np.ndarray:
    bits = np.left_shift(np.uint64(1), table[:, elements].astype(np.uint64))
    return np.bitwise_or.reduce(bits, axis=1) if elements.size else np.zeros(table.shape[0], dtype=np.uint64)


def canonical_mask(mask: int, n: int) -> int:
    """Smallest bitset in the affine orbit of `mask`."""
    if n > EXACT_CANONICAL_MAX_RANK:
        raise RankCapError(f"exact canonical forms are supported up to rank {EXACT_CANONICAL_MAX_RANK}, got {n}")
    order = 1 << n
    full = (1 << order) - 1
    if mask in (0, full):
        return mask
    elements = np.array([x for x in range(order) if (mask >> x) & 1], dtype=np.int64)
    if n <= CACHED_TABLE_MAX_RANK:
        return int(_image_masks(affine_table(n), elements).min())
    best = mask
    for block in linear_image_blocks(n):
        images = block[:, elements]
        for shift in range(order):
            bits = np.left_shift(np.uint64(1), (images ^ shift).astype(np.uint64))
            best = min(best, int(np.bitwise_or.reduce(bits, axis=1).min()))
    return best


def canonical_form(a: SetF2) -> SetF2:
    return SetF2.from_mask(a.ctx, canonical_mask(a.to_mask(), a.ctx.rank))


def orbit_masks(mask: int, n: int) -> np.ndarray:
    """All distinct bitsets in the affine orbit of `mask` (n <= 4), ascending."""
    if n > ORBIT_MAX_RANK:
        raise RankCapError(f"orbit enumeration is supported up to rank {ORBIT_MAX_RANK}, got {n}")
    elements = np.array([x for x in range(1 << n) if (mask >> x) & 1], dtype=np.int64)
    return np.unique(_image_masks(affine_table(n), elements))


@lru_cache(maxsize=None)
def orbit_representatives(n: int) -> Tuple[Tuple[int, int], ...]:
    """(orbit-minimal bitset, orbit size) for every affine orbit of subsets of F_2^n."""
    if n < 0:
        raise ParameterError(f"rank must be non-negative, got {n}")
    if n > ORBIT_MAX_RANK:
        raise RankCapError(f"orbit enumeration is supported up to rank {ORBIT_MAX_RANK}, got {n}")
    total = 1 << (1 << n)
    visited = np.zeros(total, dtype=bool)
    reps: List[Tuple[int, int]] = []
    mask = 0
    while mask < total:
        if not visited[mask]:
            orbit = orbit_masks(mask, n)
            visited[orbit.astype(np.int64)] = True
            reps.append((mask, int(orbit.size)))
        mask += 1
    logger.debug("n=%d has %d affine orbits of subsets", n, len(reps))
    return tuple(reps)
