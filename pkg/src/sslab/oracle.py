"""Exhaustive ground truth: full subset-sum enumeration, bin statistics, reference solver.

Everything here is exact. The fast path packs sums into int64 numpy arrays
indexed by mask and streams in memory-bounded blocks; instances whose total
weight exceeds int64 fall back to pure-Python big-int enumeration.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    CapacityError,
    Instance,
    SolverOutcome,
    full_mask,
    mask_indices,
    memory_limit_bytes,
    verified_outcome,
)

ENUM_LIMIT = 26       # hard cap on exhaustively enumerated coordinates
_BLOCK_BITS = 20      # streaming block: 2^20 sums (8 MB of int64) at a time
_INT64_SAFE = 1 << 62


@dataclass
class SumHistogram:
    """Multiset of subset sums over a coordinate subset: sum -> number of achieving subsets."""

    entries: dict
    subset: int

    def total(self) -> int:
        return sum(self.entries.values())

    def max_count(self) -> int:
        return max(self.entries.values())

    def l2_squared(self) -> int:
        return sum(c * c for c in self.entries.values())


def _subset_weights(instance: Instance, subset_mask: int | None) -> tuple[list[int], int]:
    if subset_mask is None:
        subset_mask = full_mask(instance.n)
    if subset_mask < 0 or subset_mask >> instance.n:
        raise ValueError("subset mask outside the instance's index space")
    idx = mask_indices(subset_mask)
    return [instance.weights[i] for i in idx], subset_mask


def _check_enum_limit(k: int) -> None:
    if k > ENUM_LIMIT:
        raise CapacityError(f"enumeration over {k} coordinates exceeds the limit of {ENUM_LIMIT}")


def _fits_int64(weights: Sequence[int], *extra: int) -> bool:
    return sum(weights) < _INT64_SAFE and all(0 <= x < _INT64_SAFE for x in extra)


def _dense_sums(weights: Sequence[int]) -> np.ndarray:
    """int64 array of all 2^k subset sums, indexed by mask (bit i = weights[i])."""
    arr = np.zeros(1, dtype=np.int64)
    for w in weights:
        arr = np.concatenate([arr, arr + np.int64(w)])
    return arr


def _iter_blocks(weights: Sequence[int]):
    """Yield (high_mask, base_sum, low_sums) covering all 2^k masks as high<<b | low."""
    k = len(weights)
    b = min(k, _BLOCK_BITS)
    low = _dense_sums(weights[:b])
    high_ws = weights[b:]
    for hm in range(1 << len(high_ws)):
        base = 0
        m, j = hm, 0
        while m:
            if m & 1:
                base += high_ws[j]
            m >>= 1
            j += 1
        yield hm, base, low


def _iter_gray(weights: Sequence[int]):
    """Pure-python streaming (mask, sum) over all subsets, Gray-code order."""
    mask, s = 0, 0
    yield 0, 0
    for k in range(1, 1 << len(weights)):
        bit = (k & -k).bit_length() - 1
        mask ^= 1 << bit
        if (mask >> bit) & 1:
            s += weights[bit]
        else:
            s -= weights[bit]
        yield mask, s


def enumerate_histogram(instance: Instance, subset_mask: int | None = None) -> SumHistogram:
    """Exact histogram of w(2^S): every sum with its multiplicity; counts total 2^|S|."""
    ws, smask = _subset_weights(instance, subset_mask)
    _check_enum_limit(len(ws))
    counts: Counter = Counter()
    if _fits_int64(ws):
        for _, base, low in _iter_blocks(ws):
            vals, cnt = np.unique(low + np.int64(base), return_counts=True)
            for v, c in zip(vals.tolist(), cnt.tolist()):
                counts[v] += c
    else:
        for _, s in _iter_gray(ws):
            counts[s] += 1
    return SumHistogram(entries=dict(counts), subset=smask)


def max_bin(instance: Instance, subset_mask: int | None = None) -> int:
    """beta(w) over the subset: the largest number of subsets sharing one sum."""
    return enumerate_histogram(instance, subset_mask).max_count()


def distinct_sums(instance: Instance, subset_mask: int | None = None) -> int:
    """|w(2^S)| via deduplicating DP (work scales with the answer, not 2^|S|)."""
    ws, _ = _subset_weights(instance, subset_mask)
    _check_enum_limit(len(ws))
    if _fits_int64(ws):
        arr = np.zeros(1, dtype=np.int64)
        for w in ws:
            arr = np.unique(np.concatenate([arr, arr + np.int64(w)]))
            if arr.nbytes > memory_limit_bytes():
                raise CapacityError("distinct-sum table exceeds the memory limit")
        return int(arr.size)
    sums = {0}
    for w in ws:
        sums |= {s + w for s in sums}
    return len(sums)


def all_subset_sums(instance: Instance, subset_mask: int | None = None):
    """Materialized sums for every mask (index = mask). Verification helper; 2^|S| memory."""
    ws, _ = _subset_weights(instance, subset_mask)
    _check_enum_limit(len(ws))
    if (1 << len(ws)) * 8 > memory_limit_bytes():
        raise CapacityError("materializing all subset sums exceeds the memory limit")
    if _fits_int64(ws):
        return _dense_sums(ws)
    out = [0]
    for w in ws:
        out += [s + w for s in out]
    return out


def brute_solve(instance: Instance) -> SolverOutcome:
    """Reference solver: scan all 2^n subsets, return the smallest witness mask or none."""
    _check_enum_limit(instance.n)
    ws = list(instance.weights)
    t = instance.target
    cost = {"sums_enumerated": 0, "pairs_checked": 0, "dict_lookups": 0, "samples_drawn": 0}
    if t > sum(ws):
        return SolverOutcome(cost=cost)
    if _fits_int64(ws, t):
        b = min(len(ws), _BLOCK_BITS)
        for hm, base, low in _iter_blocks(ws):
            hits = np.flatnonzero(low == np.int64(t - base))
            if hits.size:
                mask = (hm << b) | int(hits[0])
                cost["sums_enumerated"] += int(hits[0]) + 1
                return verified_outcome(instance, mask, cost)
            cost["sums_enumerated"] += low.size
        return SolverOutcome(cost=cost)
    for mask, s in _iter_gray(ws):
        cost["sums_enumerated"] += 1
        if s == t:
            return verified_outcome(instance, mask, cost)
    return SolverOutcome(cost=cost)


def sumset_with_witness(weights: Sequence[int], indices: Sequence[int]):
    """Deduplicated sums over subsets of `indices` with one witness mask per sum.

    Returns (sums, masks) sorted by sum; masks use the original coordinates.
    The kept witness prefers excluding later items, so it is deterministic.
    """
    ws = [weights[i] for i in indices]
    _check_enum_limit(len(ws))
    if _fits_int64(ws) and all(i < 62 for i in indices):
        sums = np.zeros(1, dtype=np.int64)
        masks = np.zeros(1, dtype=np.int64)
        for i, w in zip(indices, ws):
            cand_s = np.concatenate([sums, sums + np.int64(w)])
            cand_m = np.concatenate([masks, masks | np.int64(1 << i)])
            sums, first = np.unique(cand_s, return_index=True)
            masks = cand_m[first]
            if sums.nbytes * 2 > memory_limit_bytes():
                raise CapacityError("sum-set table exceeds the memory limit")
        return sums, masks
    table = {0: 0}
    for i, w in zip(indices, ws):
        bit = 1 << i
        add = {}
        for s, m in table.items():
            s2 = s + w
            if s2 not in table and s2 not in add:
                add[s2] = m | bit
        table.update(add)
    items = sorted(table.items())
    return [s for s, _ in items], [m for _, m in items]
