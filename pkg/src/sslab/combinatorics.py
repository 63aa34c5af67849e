"""Sum-structure verifiers: bin norms, uniquely-decodable code pairs, ternary kernels.

A pair (A, B) of binary-vector sets is uniquely decodable when all pairwise
sums over Z^n are distinct: |A + B| = |A| * |B|. Every instance yields such a
pair with |A| = |w(2^[n])| (one representative per distinct sum) and
|B| = beta(w) (the biggest bin), which ties the two statistics together.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .core import CapacityError, Instance, memory_limit_bytes
from .oracle import ENUM_LIMIT, all_subset_sums, enumerate_histogram

_UDCP_PAIR_CAP = 1 << 26
_TERNARY_LIMIT = 20


@dataclass(frozen=True)
class UdcpPair:
    """Two sets of n-bit masks interpreted as 0/1 vectors in Z^n."""

    a_masks: tuple
    b_masks: tuple
    n: int

    def __post_init__(self):
        for m in self.a_masks + self.b_masks:
            if m < 0 or m >> self.n:
                raise ValueError("mask outside the declared dimension")
        if len(set(self.a_masks)) != len(self.a_masks) or len(set(self.b_masks)) != len(self.b_masks):
            raise ValueError("mask sets must not contain duplicates")


def _spread(masks: Sequence[int], n: int) -> np.ndarray:
    """0/1 vectors packed 2 bits per coordinate, so vector sums stay carry-free."""
    out = np.zeros(len(masks), dtype=np.int64)
    arr = np.asarray(masks, dtype=np.int64)
    for j in range(n):
        out |= ((arr >> j) & 1) << (2 * j)
    return out


def check_udcp(pair: UdcpPair) -> bool:
    """Whether |A + B| = |A| * |B| with componentwise integer sums in {0,1,2}^n."""
    na, nb = len(pair.a_masks), len(pair.b_masks)
    if na == 0 or nb == 0:
        raise ValueError("both sets must be non-empty")
    if na * nb > _UDCP_PAIR_CAP:
        raise CapacityError(f"|A|*|B| = {na * nb} exceeds the pair cap {_UDCP_PAIR_CAP}")
    if 2 * pair.n > 62:
        raise CapacityError("dimension too large for packed coordinate sums")
    a = _spread(pair.a_masks, pair.n)
    b = _spread(pair.b_masks, pair.n)
    block = max(1, (1 << 22) // max(1, nb))
    uniques = []
    for i in range(0, na, block):
        sums = (a[i : i + block, None] + b[None, :]).ravel()
        uniques.append(np.unique(sums))
    merged = np.unique(np.concatenate(uniques))
    return int(merged.size) == na * nb


def udcp_from_instance(instance: Instance, oracle_limit: int = ENUM_LIMIT) -> UdcpPair:
    """Extract (A, B): lexicographically-smallest mask per distinct sum, and the
    modal bin's masks (smallest modal sum on ties). |A| = |w(2^[n])|, |B| = beta.
    """
    n = instance.n
    if n < 1 or n > oracle_limit:
        raise CapacityError(f"extraction enumerates 2^{n}, outside [2, 2^{oracle_limit}]")
    sums = all_subset_sums(instance)
    if isinstance(sums, np.ndarray):
        uniq, first, counts = np.unique(sums, return_index=True, return_counts=True)
        a_masks = tuple(int(m) for m in first)  # first occurrence = smallest mask
        modal = uniq[int(np.argmax(counts))]    # argmax takes the first max = smallest sum
        b_masks = tuple(int(m) for m in np.flatnonzero(sums == modal))
    else:
        first_seen: dict = {}
        hist: Counter = Counter()
        for m, s in enumerate(sums):
            hist[s] += 1
            first_seen.setdefault(s, m)
        beta = max(hist.values())
        modal = min(s for s, c in hist.items() if c == beta)
        a_masks = tuple(first_seen[s] for s in sorted(first_seen))
        b_masks = tuple(m for m, s in enumerate(sums) if s == modal)
    return UdcpPair(a_masks=a_masks, b_masks=b_masks, n=n)


def bin_l2(instance: Instance, subset_mask: int | None = None) -> int:
    """Exact squared l2 norm of the bin histogram: sum over sums of count^2."""
    hist = enumerate_histogram(instance, subset_mask)
    return hist.l2_squared()


def _ternary_half(weights: Sequence[int]) -> dict:
    """dot -> Counter(l1 -> count) over all {-1,0,1} assignments of `weights`."""
    table: dict = {}
    for vec in product((0, 1, -1), repeat=len(weights)):
        dot = 0
        l1 = 0
        for v, w in zip(vec, weights):
            if v:
                dot += v * w
                l1 += 1
        table.setdefault(dot, Counter())[l1] += 1
    return table


def zero_ternary_counts_by_l1(instance: Instance) -> list[int]:
    """counts[k] = #{y in {-1,0,1}^n : y.w = 0, ||y||_1 = k}, for every k at once.

    Half-split meet: 3^(n/2) enumeration per side instead of 3^n.
    """
    n = instance.n
    if n > _TERNARY_LIMIT:
        raise CapacityError(f"ternary kernel enumeration limited to n <= {_TERNARY_LIMIT}")
    h = n // 2
    left = _ternary_half(instance.weights[:h])
    right = _ternary_half(instance.weights[h:])
    out = [0] * (n + 1)
    for dot_r, counter_r in right.items():
        counter_l = left.get(-dot_r)
        if counter_l is None:
            continue
        for l1_l, c_l in counter_l.items():
            for l1_r, c_r in counter_r.items():
                out[l1_l + l1_r] += c_l * c_r
    return out


def count_zero_ternary(instance: Instance, ell1: int) -> int:
    """#{y in {-1,0,1}^n : y.w = 0, ||y||_1 = ell1}; ell1 = 0 counts only y = 0."""
    if not 0 <= ell1 <= instance.n:
        raise ValueError("ell1 must lie in [0, n]")
    return zero_ternary_counts_by_l1(instance)[ell1]


def l2_identity_terms(instance: Instance) -> tuple[int, int]:
    """(bin_l2, sum over k of counts[k] * 2^(n-k)): the two sides of the norm identity."""
    counts = zero_ternary_counts_by_l1(instance)
    n = instance.n
    rhs = sum(c << (n - k) for k, c in enumerate(counts))
    return bin_l2(instance), rhs
