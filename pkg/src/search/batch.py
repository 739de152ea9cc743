"""Vectorized statistics over many subsets at once, rows of boolean bitsets."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from group_core.context import GroupCtx, element_indices
from group_core.sets import SetF2, sumset
from group_core.subgroups import affine_span

# Above this group order the N x N parity and XOR tables are not materialized.
DENSE_TABLE_MAX_ORDER = 1024
# Cap on booleans held by one gather in batch_sumsets.
GATHER_BUDGET = 1 << 24


@lru_cache(maxsize=None)
def xor_table(n: int) -> np.ndarray:
    indices = element_indices(n)
    table = indices[:, None] ^ indices[None, :]
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def parity_matrix(n: int) -> np.ndarray:
    """P[u, x] = <u, x> over F_2, as int32."""
    indices = element_indices(n)
    conj = indices[:, None] & indices[None, :]
    table = np.zeros_like(conj)
    for bit in range(n):
        table ^= (conj >> bit) & 1
    table = table.astype(np.int32)
    table.setflags(write=False)
    return table


def masks_to_rows(masks: np.ndarray, n: int) -> np.ndarray:
    masks = np.asarray(masks, dtype=np.int64)
    return ((masks[:, None] >> element_indices(n)[None, :]) & 1).astype(bool)


def rows_to_masks(rows: np.ndarray) -> np.ndarray:
    order = rows.shape[1]
    return (rows.astype(np.int64) << np.arange(order, dtype=np.int64)[None, :]).sum(axis=1)


@lru_cache(maxsize=None)
def all_rows(n: int) -> np.ndarray:
    """Every subset of F_2^n as a row, in mask order (n <= 4)."""
    rows = masks_to_rows(np.arange(1 << (1 << n), dtype=np.int64), n)
    rows.setflags(write=False)
    return rows


def popcounts(rows: np.ndarray) -> np.ndarray:
    return rows.sum(axis=1, dtype=np.int64)


def sumsets_with(a_elements: np.ndarray, b_rows: np.ndarray) -> np.ndarray:
    """Row i is A + B_i for one fixed A given by its elements."""
    indices = element_indices(int(b_rows.shape[1]).bit_length() - 1)
    out = np.zeros_like(b_rows, dtype=bool)
    for a in a_elements:
        out |= b_rows[:, indices ^ a]
    return out


def batch_sumsets(a_rows: np.ndarray, b_rows: np.ndarray) -> np.ndarray:
    """Row i is A_i + B_i."""
    count, order = a_rows.shape
    n = order.bit_length() - 1
    if order > DENSE_TABLE_MAX_ORDER:
        ctx = GroupCtx(n)
        out = np.zeros((count, order), dtype=bool)
        for i in range(count):
            out[i] = sumset(SetF2(ctx, a_rows[i]), SetF2(ctx, b_rows[i])).members
        return out
    table = xor_table(n)
    step = max(1, GATHER_BUDGET // (order * order))
    out = np.empty((count, order), dtype=bool)
    for start in range(0, count, step):
        stop = min(start + step, count)
        gathered = b_rows[start:stop][:, table]
        out[start:stop] = (gathered & a_rows[start:stop, None, :]).any(axis=2)
    return out


def span_indices(rows: np.ndarray) -> np.ndarray:
    """Index |G|/|L| of the affine span a+L of each row; 0 for an empty row.

    The index counts the linear functionals that are constant on the set.
    """
    count, order = rows.shape
    n = order.bit_length() - 1
    sizes = popcounts(rows)
    if order > DENSE_TABLE_MAX_ORDER:
        ctx = GroupCtx(n)
        out = np.zeros(count, dtype=np.int64)
        for i, row in enumerate(rows):
            if sizes[i]:
                out[i] = affine_span(SetF2(ctx, row, copy=True)).index
        return out
    ones = rows.astype(np.int32) @ parity_matrix(n).T
    constant = (ones == 0) | (ones == sizes[:, None])
    out = constant.sum(axis=1, dtype=np.int64)
    out[sizes == 0] = 0
    return out


def walsh_hadamard_rows(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of every row."""
    out = np.array(values, dtype=np.int64, copy=True)
    count, order = out.shape
    half = 1
    while half < order:
        view = out.reshape(count, -1, 2, half)
        low = view[:, :, 0, :].copy()
        high = view[:, :, 1, :].copy()
        view[:, :, 0, :] = low + high
        view[:, :, 1, :] = low - high
        half <<= 1
    return out


def batch_mu(a_rows: np.ndarray, b_rows: np.ndarray) -> np.ndarray:
    """mu_{A_i, B_i} per row; 0 where either set is empty."""
    order = a_rows.shape[1]
    if not a_rows.shape[0]:
        return np.zeros(0, dtype=np.int64)
    counts = walsh_hadamard_rows(walsh_hadamard_rows(a_rows) * walsh_hadamard_rows(b_rows)) // order
    positive = np.where(counts > 0, counts, np.iinfo(np.int64).max)
    out = positive.min(axis=1)
    out[counts.max(axis=1) == 0] = 0
    return out
