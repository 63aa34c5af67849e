"""Modular bit-length reduction: map huge weights to O(poly) bit residues.

w'_i = w_i mod p for a random prime p in [B log2 t, 2B log2 t], and
t' = (t mod p) + r*p with r uniform in {0..n-1}. Solutions survive with
probability 1/n over r; structure (distinct-sum count, bin sizes) survives
with constant probability over p once B is large enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CapacityError, Instance, RandomSource
from .numeric import random_prime
from .oracle import ENUM_LIMIT, all_subset_sums, _fits_int64


class ReductionNotApplicable(RuntimeError):
    """Signal: target below 2n, pseudo-polynomial DP is already cheap."""


@dataclass(frozen=True)
class ReductionRecord:
    """One applied reduction: the reduced instance plus everything needed to replay it."""

    reduced: Instance
    p: int           # prime of the final round
    shift: int       # r of the final round
    B: int
    rounds: int
    chain: tuple     # ((p, r), ...) for every round, first to last

    def replay(self, original: Instance) -> Instance:
        """Recompute the reduced instance from the original and the chain."""
        cur = original
        for p, r in self.chain:
            cur = Instance(
                tuple(w % p for w in cur.weights), (cur.target % p) + r * p
            )
        return cur


def output_bound(n: int, B: int) -> float:
    """Every reduced value is strictly below 4*n*B*log2(B)."""
    return 4.0 * n * B * math.log2(B)


def reduce_bitlength(instance: Instance, B: int, rng: RandomSource) -> ReductionRecord:
    """Apply the reduction, re-applying up to 3 extra times while the target
    is still >= 2*n*B*log2(B); hard failure if the output bound is not met.
    """
    n = instance.n
    if n < 1:
        raise ValueError("reduction needs at least one item")
    if B < 2:
        raise ValueError("B must be >= 2")
    if instance.target < max(2, 2 * n):
        raise ReductionNotApplicable("target below 2n: use the DP solver directly")
    retrigger = 2.0 * n * B * math.log2(B)
    cur = instance
    chain = []
    for _ in range(4):
        r_lo = max(3, math.ceil(B * math.log2(cur.target)))
        p = random_prime(r_lo, rng)
        shift = rng.randrange(n)
        cur = Instance(tuple(w % p for w in cur.weights), (cur.target % p) + shift * p)
        chain.append((p, shift))
        if cur.target < retrigger or cur.target < 2:
            break
    bound = output_bound(n, B)
    if any(w >= bound for w in cur.weights) or cur.target >= bound:
        raise RuntimeError(
            "bit-length reduction failed to reach its output bound after 4 rounds"
        )
    return ReductionRecord(
        reduced=cur, p=chain[-1][0], shift=chain[-1][1], B=B,
        rounds=len(chain), chain=tuple(chain),
    )


@dataclass(frozen=True)
class ReductionReport:
    solutions_preserved: bool          # P2: {X: w(X)=t} == {X: w'(X)=t'}
    sums_preserved: bool               # P3: |sums|/2 <= |sums'| <= n*|sums|
    bins_preserved: bool | None        # P4: beta/n <= beta' <= beta; None unless B >= 5*|sums|^2
    distinct_original: int
    distinct_reduced: int
    max_bin_original: int
    max_bin_reduced: int


def _sums_and_bins(instance: Instance):
    sums = all_subset_sums(instance)
    if isinstance(sums, np.ndarray):
        _, counts = np.unique(sums, return_counts=True)
        return sums, int(counts.size), int(counts.max())
    from collections import Counter

    hist = Counter(sums)
    return sums, len(hist), max(hist.values())


def check_reduction_properties(
    original: Instance, record: ReductionRecord, oracle_limit: int = ENUM_LIMIT
) -> ReductionReport:
    """Exhaustively compare solution sets, distinct-sum counts and bin sizes."""
    n = original.n
    if n > oracle_limit:
        raise CapacityError(f"property check enumerates 2^{n}, above the limit {oracle_limit}")
    reduced = record.reduced
    o_sums, o_distinct, o_beta = _sums_and_bins(original)
    r_sums, r_distinct, r_beta = _sums_and_bins(reduced)
    if isinstance(o_sums, np.ndarray) and isinstance(r_sums, np.ndarray) and _fits_int64(
        (), original.target, reduced.target
    ):
        p2 = bool(
            np.array_equal(o_sums == np.int64(original.target), r_sums == np.int64(reduced.target))
        )
    else:
        o_list = o_sums.tolist() if isinstance(o_sums, np.ndarray) else o_sums
        r_list = r_sums.tolist() if isinstance(r_sums, np.ndarray) else r_sums
        p2 = all(
            (a == original.target) == (b == reduced.target) for a, b in zip(o_list, r_list)
        )
    p3 = o_distinct <= 2 * r_distinct and r_distinct <= n * o_distinct
    p4 = None
    if record.B >= 5 * o_distinct * o_distinct:
        p4 = o_beta <= n * r_beta and r_beta <= o_beta
    return ReductionReport(
        solutions_preserved=p2,
        sums_preserved=p3,
        bins_preserved=p4,
        distinct_original=o_distinct,
        distinct_reduced=r_distinct,
        max_bin_original=o_beta,
        max_bin_reduced=r_beta,
    )
