"""Structure-dispatched drivers: pick a solver from measured sum statistics.

Small maximum bin: partition [n] into ~1/mu consecutive blocks; a sum-rich
block feeds the representation solver, otherwise the block-product bound
makes a plain deduplicated join cheap. Large maximum bin: one of the two
halves must be sum-poor, which the few-sums join exploits unconditionally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    BudgetExhausted,
    CapacityError,
    Instance,
    RandomSource,
    SolverOutcome,
    StepMeter,
    density,
    mask_from_indices,
    mask_sum,
    verified_outcome,
)
from .hashing import ReductionNotApplicable, output_bound, reduce_bitlength
from .classic import bellman_dp, meet_in_middle
from .oracle import ENUM_LIMIT, brute_solve, distinct_sums, max_bin, sumset_with_witness
from .structured import solve_few_sums, solve_many_sums

# exact constants used by the exponent accounting
_C_ENTROPY_QUARTER = Fraction(8113, 10000)   # h(1/4) <= 0.8113


def small_bin_time_exponents(epsilon) -> tuple[Fraction, Fraction]:
    """Exact exponent coefficients of the two work terms of the small-bin driver.

    With mu = 3e/2 and gamma = 1 - e/2:
      list term  1/2 + 0.8113*mu - gamma*mu  = 1/2 - 0.28305 e + 3/4 e^2
      pair term  (1/2 - e) + (3/2 - gamma)mu = 1/2 - e/4      + 3/4 e^2
    """
    e = Fraction(epsilon)
    if not 0 < e <= Fraction(1, 6):
        raise ValueError("epsilon must lie in (0, 1/6]")
    mu = Fraction(3, 2) * e
    gamma = 1 - e / 2
    list_term = Fraction(1, 2) + _C_ENTROPY_QUARTER * mu - gamma * mu
    pair_term = (Fraction(1, 2) - e) + (Fraction(3, 2) - gamma) * mu
    return list_term, pair_term


def small_bin_runtime_exponent(epsilon) -> Fraction:
    return max(small_bin_time_exponents(epsilon))


def partition_blocks(n: int, epsilon: float) -> list[list[int]]:
    """Consecutive blocks of size <= ceil(mu*n), mu = 3*epsilon/2."""
    mu = 1.5 * epsilon
    cap = max(1, math.ceil(mu * n - 1e-9))
    return [list(range(i, min(i + cap, n))) for i in range(0, n, cap)]


def solve_partition_join(
    instance: Instance, epsilon: float, meter: StepMeter | None = None
) -> SolverOutcome:
    """Exact join when every block is sum-poor: |w(2^L)| is bounded by the
    product of per-block counts, so both dictionaries stay small. The decision
    is exact for any instance; only the runtime claim needs the promise.
    """
    n = instance.n
    blocks = partition_blocks(n, epsilon)
    left: list[int] = []
    for b in blocks[: len(blocks) // 2]:
        left += b
    left_set = set(left)
    right = [i for i in range(n) if i not in left_set]
    l_sums, l_masks = sumset_with_witness(instance.weights, left)
    r_sums, r_masks = sumset_with_witness(instance.weights, right)
    if meter:
        meter.add(len(l_sums) + len(r_sums))
    cost = {
        "sums_enumerated": len(l_sums) + len(r_sums),
        "dict_lookups": len(r_sums),
        "pairs_checked": 0,
    }
    t = instance.target
    table = {int(s): int(m) for s, m in zip(l_sums, l_masks)}
    for s, m in zip(r_sums, r_masks):
        lm = table.get(t - int(s))
        if lm is not None:
            cost["pairs_checked"] += 1
            return verified_outcome(instance, lm | int(m), cost, branch="join")
    return SolverOutcome(cost=cost, branch="join")


def solve_small_bin(
    instance: Instance,
    epsilon: float,
    rng: RandomSource,
    step_budget: int | None = None,
) -> SolverOutcome:
    """Driver for instances promised beta(w) <= 2^((1/2-epsilon)n).

    Hashes down over-long weights first (skipped when they already meet the
    reduced-size bound), measures each block's distinct sums, then either
    runs the representation solver on a sum-rich block (Monte Carlo) or the
    exact block-product join. Witnesses always re-verified on the original.
    """
    if not 0.0 < epsilon <= 1.0 / 6.0:
        raise ValueError("epsilon must lie in (0, 1/6]")
    n = instance.n
    if n <= 4:
        out = brute_solve(instance)
        out.branch = "tiny"
        return out
    work = instance
    hashed = False
    B = 1 << (3 * n)
    bound = output_bound(n, B)
    if max(max(instance.weights), instance.target) >= bound:
        if instance.target < 2 * n:
            out = bellman_dp(instance)
            out.branch = "dp"
            return out
        work = reduce_bitlength(instance, B, rng).reduced
        hashed = True
    gamma = 1.0 - epsilon / 2.0
    mu = 1.5 * epsilon
    meter = StepMeter(step_budget)
    blocks = partition_blocks(n, epsilon)
    rich_block = None
    try:
        for block in blocks:
            m_mask = mask_from_indices(block)
            count = distinct_sums(work, m_mask)
            meter.add(count)
            # threshold exponent >= gamma*|M_i| so the representation pre holds
            if math.log2(count) >= gamma * max(len(block), mu * n) - 1e-9:
                rich_block = m_mask
                break
        if rich_block is not None:
            sub = solve_many_sums(
                work, rich_block, gamma, rng,
                step_budget=(None if step_budget is None else step_budget - meter.count),
            )
            sub.branch = "representation"
        else:
            sub = solve_partition_join(work, epsilon, meter=meter)
            sub.cost["steps"] = meter.count
    except BudgetExhausted:
        return SolverOutcome(
            cost={"steps": meter.count}, exhausted=True,
            branch="representation" if rich_block is not None else "join",
        )
    if sub.witness is not None and hashed:
        if mask_sum(instance.weights, sub.witness) != instance.target:
            # the reduction introduced a spurious solution; report none
            sub = SolverOutcome(cost=sub.cost, branch=sub.branch, iterations=sub.iterations)
        else:
            sub = verified_outcome(
                instance, sub.witness, sub.cost,
                branch=sub.branch, iterations=sub.iterations,
            )
    return sub


def solve_large_bin(instance: Instance) -> SolverOutcome:
    """Exact driver for instances promised a huge bin, beta(w) >= 2^(0.661 n):
    take the half with fewer distinct sums as M (gamma measured, not promised)
    and run the unconditional few-sums join.
    """
    n = instance.n
    half = n // 2
    first = mask_from_indices(range(half))
    second = mask_from_indices(range(half, n))
    ds_first = distinct_sums(instance, first)
    if n % 2 == 0 and half:
        ds_second = distinct_sums(instance, second)
        m_mask, ds = (first, ds_first) if ds_first <= ds_second else (second, ds_second)
    else:
        m_mask, ds = first, ds_first  # odd n: M sized floor(n/2) by convention
    m = max(1, half)
    gamma = min(1.0, math.log2(max(ds, 1)) / m) if half else 0.0
    out = solve_few_sums(instance, m_mask, gamma)
    out.branch = "few-sums"
    out.cost["measured_gamma"] = gamma
    return out


@dataclass(frozen=True)
class RegimeReport:
    """Measured structure statistics and which promised regimes they satisfy."""

    n: int
    density: float | None
    beta: int
    distinct: int
    beta_exponent: float
    small_bin: bool               # beta < 2^(n/2), i.e. some epsilon > 0 works
    small_bin_epsilon: float      # largest admissible epsilon (0.0 if none)
    large_bin: bool               # beta >= 2^(0.661 n)
    many_sums: bool               # distinct >= 2^(0.997 n)
    sums_vs_bin_holds: bool       # many_sums implies beta <= 2^(0.4996 n)


def classify(instance: Instance, oracle_limit: int = ENUM_LIMIT) -> RegimeReport:
    """Measure beta and |w(2^[n])| and evaluate the regime thresholds exactly
    (integer powers, no floating-point exponent compares).
    """
    n = instance.n
    if n < 1:
        raise ValueError("classification needs n >= 1")
    if n > oracle_limit:
        raise CapacityError(f"classification enumerates 2^{n}, above {oracle_limit}")
    beta = max_bin(instance)
    ds = distinct_sums(instance)
    try:
        dens = density(instance)
    except ValueError:
        dens = None
    beta_exp = math.log2(beta) / n
    small = beta**2 < 2**n
    eps = max(0.0, 0.5 - beta_exp)
    large = beta**1000 >= 2 ** (661 * n)
    many = ds**1000 >= 2 ** (997 * n)
    implication = (not many) or (beta**2500 <= 2 ** (1249 * n))
    return RegimeReport(
        n=n, density=dens, beta=beta, distinct=ds, beta_exponent=beta_exp,
        small_bin=small, small_bin_epsilon=eps, large_bin=large,
        many_sums=many, sums_vs_bin_holds=implication,
    )


def solve_auto(
    instance: Instance,
    rng: RandomSource,
    budget: int | None = None,
    epsilon: float = 0.0004,
) -> SolverOutcome:
    """Two-step pipeline: run the small-bin driver under a step budget of
    ~4 * 2^(0.49991 n) * n^2; on exhaustion, hash the instance dense with
    B = 10*2^(ceil(0.997 n)) and hand it to meet-in-the-middle, amplified
    over up to n^2 independent reductions. Witnesses are always re-verified
    against the original instance; there are no false positives.
    """
    n = instance.n
    if n < 1:
        return brute_solve(instance)
    if budget is None:
        budget = math.ceil(4.0 * 2.0 ** (0.49991 * n) * n * n)
    step1 = solve_small_bin(instance, epsilon, rng, step_budget=budget)
    if not step1.exhausted:
        step1.branch = f"small-bin/{step1.branch}"
        return step1
    if instance.target < max(2, 2 * n):
        out = bellman_dp(instance)
        out.branch = "dp"
        return out
    B = 10 * (1 << math.ceil(0.997 * n))
    cost = {"reductions": 0, "sums_enumerated": 0}
    for _ in range(n * n):
        try:
            record = reduce_bitlength(instance, B, rng)
        except ReductionNotApplicable:  # pragma: no cover - target checked above
            break
        cost["reductions"] += 1
        sub = meet_in_middle(record.reduced)
        cost["sums_enumerated"] += sub.cost["sums_enumerated"]
        if sub.witness is not None and mask_sum(instance.weights, sub.witness) == instance.target:
            return verified_outcome(instance, sub.witness, cost, branch="hash+mim")
    return SolverOutcome(cost=cost, branch="hash+mim")
