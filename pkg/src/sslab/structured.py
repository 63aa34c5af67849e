"""Representation-technique solvers driven by the structure of a chosen block M.

Sum-rich M (many distinct sums): split the solution's M-part between two
modularly filtered lists so each candidate is found many times, and filter
with a random prime whose size matches the surplus of representations.
Sum-poor M (few distinct sums): both join halves have small deduplicated
sum sets, so an exact dictionary join is already cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .core import (
    BudgetExhausted,
    CapacityError,
    Instance,
    RandomSource,
    SolverOutcome,
    StepMeter,
    full_mask,
    mask_indices,
    mask_sum,
    verified_outcome,
)
from .numeric import h2, random_prime
from .oracle import distinct_sums, sumset_with_witness

_ITER_WORK_CAP = 1 << 26  # per-iteration enumeration guard


@dataclass(frozen=True)
class ReprParams:
    """Derived parameters for one filtered-join iteration."""

    n: int
    m_mask: int
    mu: float
    gamma: float
    s: int
    s1: int
    s2: int
    sigma: float
    sigma1: float
    sigma2: float
    pi: float
    lam: float
    left_mask: int
    right_mask: int
    p: int
    t_l: int
    clamped_prime: bool
    clamped_left: bool


def _ceil_frac(x: float) -> int:
    return math.ceil(x - 1e-9)


def derive_params(
    n: int,
    m_mask: int,
    gamma: float,
    s: int,
    s1: int,
    rng: RandomSource | None = None,
    modulus: tuple[int, int] | None = None,
) -> ReprParams:
    """Compute (sigma, pi, lambda, L/R split, prime filter) for one (s, s1) pair.

    The prime and residue are drawn once per (target, s) attempt; pass them
    back via `modulus` for the remaining s1 iterations.
    """
    m_indices = mask_indices(m_mask)
    m = len(m_indices)
    if m < 1 or 2 * m > n:
        raise ValueError("need 1 <= |M| <= n/2")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    if not math.ceil(m / 2) <= s <= m:
        raise ValueError("s must lie in [ceil(|M|/2), |M|]")
    s2 = s - s1
    if s1 < 0 or s1 > s2:
        raise ValueError("need 0 <= s1 <= s - s1")
    mu = m / n
    sigma, sigma1, sigma2 = s / m, s1 / m, s2 / m
    pi = gamma - 1.0 + sigma
    lam = (1.0 - mu) / 2.0 + (h2(sigma / 2.0) - h2(sigma1)) * mu
    rest = [i for i in range(n) if not (m_mask >> i) & 1]
    ell = _ceil_frac(lam * n)
    clamped_left = not 0 <= ell <= len(rest)
    ell = min(max(ell, 0), len(rest))
    left = rest[:ell]
    right = rest[ell:]
    if modulus is not None:
        p, t_l = modulus
        clamped_prime = False
    else:
        if rng is None:
            raise ValueError("either rng or modulus is required")
        low = 2.0 ** (pi * m)
        clamped_prime = low < 3.0
        p = random_prime(max(3, math.ceil(low)), rng)
        t_l = rng.randrange(p)
    return ReprParams(
        n=n, m_mask=m_mask, mu=mu, gamma=gamma, s=s, s1=s1, s2=s2,
        sigma=sigma, sigma1=sigma1, sigma2=sigma2, pi=pi, lam=lam,
        left_mask=sum(1 << i for i in left), right_mask=sum(1 << i for i in right),
        p=p, t_l=t_l, clamped_prime=clamped_prime, clamped_left=clamped_left,
    )


def _enumerate_side(weights, indices, meter: StepMeter | None):
    out = [(0, 0)]
    for i in indices:
        w = weights[i]
        bit = 1 << i
        out += [(m | bit, s + w) for m, s in out]
    if meter:
        meter.add(len(out))
    return out


def build_filtered_list(
    instance: Instance,
    side_mask: int,
    m_mask: int,
    s_i: int,
    p: int,
    residue: int,
    dict_size: int | None = None,
    meter: StepMeter | None = None,
) -> list[tuple[int, int]]:
    """All (mask, sum) with mask in 2^(side u M), sum = residue (mod p), |mask n M| = s_i.

    Split-enumeration: a dictionary over subsets of the first `dict_size` side
    items keyed by residue, joined against (rest of side) x (s_i-subsets of M).
    Exact regardless of the split; `dict_size` only balances the two halves.
    """
    if side_mask & m_mask:
        raise ValueError("side set and M must be disjoint")
    side = mask_indices(side_mask)
    m_indices = mask_indices(m_mask)
    if not 0 <= s_i <= len(m_indices):
        raise ValueError("s_i must lie in [0, |M|]")
    if p < 2:
        raise ValueError("filter modulus must be >= 2")
    residue %= p
    n_combos = math.comb(len(m_indices), s_i)
    if dict_size is None:
        dict_size = round((len(side) + math.log2(max(1, n_combos))) / 2.0)
    dict_size = min(max(dict_size, 0), len(side))
    est_out = ((1 << len(side)) * n_combos) // p  # expected survivors of the residue filter
    if (1 << dict_size) + (1 << (len(side) - dict_size)) * n_combos + est_out > _ITER_WORK_CAP:
        raise CapacityError("filtered-list enumeration exceeds the per-iteration work cap")
    ws = instance.weights
    buckets: dict[int, list[tuple[int, int]]] = {}
    for m, s in _enumerate_side(ws, side[:dict_size], meter):
        buckets.setdefault(s % p, []).append((m, s))
    scan = _enumerate_side(ws, side[dict_size:], meter)
    combos = []
    for combo in combinations(m_indices, s_i):
        cmask = 0
        csum = 0
        for i in combo:
            cmask |= 1 << i
            csum += ws[i]
        combos.append((cmask, csum))
    if meter:
        meter.add(len(combos))
    out = []
    for y_mask, y_sum in scan:
        for c_mask, c_sum in combos:
            need = (residue - y_sum - c_sum) % p
            for d_mask, d_sum in buckets.get(need, ()):
                out.append((y_mask | c_mask | d_mask, y_sum + c_sum + d_sum))
    if meter:
        meter.add(len(scan) * len(combos) + len(out))
    return out


def representation_attempt(
    instance: Instance,
    m_mask: int,
    gamma: float,
    s: int,
    target: int,
    rng: RandomSource,
    meter: StepMeter | None = None,
    records: list | None = None,
):
    """One full filtered-join attempt at `target`: fresh (p, t_L), all s1 splits.

    Returns a mask with w(mask) = target, or None. Iterations whose enumeration
    would blow the work cap are skipped and recorded, not fatal.
    """
    n = instance.n
    ws = instance.weights
    params0 = derive_params(n, m_mask, gamma, s, 0, rng=rng)
    p, t_l = params0.p, params0.t_l
    for s1 in range(0, s // 2 + 1):
        par = params0 if s1 == 0 else derive_params(
            n, m_mask, gamma, s, s1, modulus=(p, t_l)
        )
        # dictionary halves sized by lambda_1 = (lambda_side + h(sigma/2) mu)/2
        ent = h2(par.sigma / 2.0) * par.mu
        n_left = par.left_mask.bit_count()
        n_right = par.right_mask.bit_count()
        dict_left = min(max(math.floor((n_left / n + ent) / 2.0 * n), 0), n_left)
        dict_right = min(max(math.floor((n_right / n + ent) / 2.0 * n), 0), n_right)
        rec = {
            "target": target, "s": s, "s1": s1, "p": p, "t_l": t_l,
            "size_left": 0, "size_right": 0, "pairs_scanned": 0, "skipped": False,
        }
        try:
            left_list = build_filtered_list(
                instance, par.left_mask, m_mask, s1, p, t_l % p,
                dict_size=dict_left, meter=meter,
            )
            right_list = build_filtered_list(
                instance, par.right_mask, m_mask, par.s2, p, (target - t_l) % p,
                dict_size=dict_right, meter=meter,
            )
        except CapacityError:
            rec["skipped"] = True
            if records is not None:
                records.append(rec)
            continue
        rec["size_left"] = len(left_list)
        rec["size_right"] = len(right_list)
        by_sum: dict[int, list[int]] = {}
        for m, sm in left_list:
            by_sum.setdefault(sm, []).append(m)
        if meter:
            meter.add(len(left_list) + len(right_list))
        for t_mask, t_sum in right_list:
            for s_mask in by_sum.get(target - t_sum, ()):
                rec["pairs_scanned"] += 1
                if meter:
                    meter.add()
                if s_mask & t_mask == 0:
                    cand = s_mask | t_mask
                    if mask_sum(ws, cand) == target:
                        if records is not None:
                            records.append(rec)
                        return cand
        if records is not None:
            records.append(rec)
    return None


def _predicted_attempt_steps(n: int, m: int, gamma: float) -> float:
    """Expected-work prediction (beta-independent terms) for one (target, s) attempt."""
    mu = m / n
    total = 0.0
    for s in range(math.ceil(m / 2), m + 1):
        sigma = s / m
        pi_exp = (gamma - 1.0 + sigma) * m
        for s1 in range(0, s // 2 + 1):
            lam = (1.0 - mu) / 2.0 + (h2(sigma / 2.0) - h2(s1 / m)) * mu
            ell = min(max(_ceil_frac(lam * n), 0), n - m)
            w_l = (2.0 ** ell) * math.comb(m, s1)
            w_r = (2.0 ** (n - m - ell)) * math.comb(m, s - s1)
            total += math.sqrt(w_l) + w_l / (2.0 ** pi_exp)
            total += math.sqrt(w_r) + w_r / (2.0 ** pi_exp)
            total += 2.0 ** (mu * (1.5 - gamma) * n)
    return total


def solve_many_sums(
    instance: Instance,
    m_mask: int,
    gamma: float,
    rng: RandomSource,
    step_budget: int | None = None,
    passes: int | None = None,
) -> SolverOutcome:
    """Monte Carlo solver for instances whose block M is sum-rich:
    |w(2^M)| >= 2^(gamma |M|). Tries the target and its complement so the
    solution's M-part can be assumed to have s >= |M|/2; amplifies over
    `passes` (default n^2) independent (p, t_L) draws.
    Witnesses are exact; 'none' may be a false negative.
    """
    n = instance.n
    m_indices = mask_indices(m_mask)
    m = len(m_indices)
    if m < 1 or 2 * m > n:
        raise ValueError("need 1 <= |M| <= n/2")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    ds = distinct_sums(instance, m_mask)
    if math.log2(ds) < gamma * m - 1e-9:
        raise ValueError("M is not sum-rich enough: |w(2^M)| < 2^(gamma |M|)")
    if passes is None:
        passes = n * n
    if step_budget is None:
        step_budget = 64 * n * n * math.ceil(_predicted_attempt_steps(n, m, gamma))
    meter = StepMeter(step_budget)
    total = instance.total()
    t = instance.target
    cost = {"sums_enumerated": 0, "pairs_scanned": 0, "attempts": 0, "steps": 0}
    iterations: list = []
    fm = full_mask(n)
    try:
        for _ in range(passes):
            for s in range(math.ceil(m / 2), m + 1):
                for target in (t, total - t):
                    if target < 0 or target > total:
                        continue
                    cost["attempts"] += 1
                    wit = representation_attempt(
                        instance, m_mask, gamma, s, target, rng,
                        meter=meter, records=iterations,
                    )
                    if wit is not None:
                        if target != t:
                            wit = fm ^ wit
                        cost["steps"] = meter.count
                        cost["pairs_scanned"] = sum(r["pairs_scanned"] for r in iterations)
                        return verified_outcome(
                            instance, wit, cost, iterations=iterations
                        )
    except BudgetExhausted:
        cost["steps"] = meter.count
        cost["pairs_scanned"] = sum(r["pairs_scanned"] for r in iterations)
        return SolverOutcome(cost=cost, exhausted=True, iterations=iterations)
    cost["steps"] = meter.count
    cost["pairs_scanned"] = sum(r["pairs_scanned"] for r in iterations)
    return SolverOutcome(cost=cost, iterations=iterations)


def solve_few_sums(instance: Instance, m_mask: int, gamma: float) -> SolverOutcome:
    """Deterministic exact join for instances whose block M is sum-poor:
    with |w(2^M)| <= 2^(gamma |M|), both halves of the join have small
    deduplicated sum sets, because |w(2^R)| <= |w(2^M)| * |w(2^(R\\M))|.
    The decision is exact for any M; only the runtime claim needs the promise.
    """
    n = instance.n
    m = bin(m_mask).count("1")
    if m_mask and 2 * m > n:
        raise ValueError("need |M| <= n/2")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    mu = m / n if n else 0.0
    rest = [i for i in range(n) if not (m_mask >> i) & 1]
    ell = min(max(_ceil_frac((1.0 - mu * (1.0 - gamma)) / 2.0 * n), 0), len(rest))
    left = rest[:ell]
    left_set = set(left)
    right = [i for i in range(n) if i not in left_set]
    l_sums, l_masks = sumset_with_witness(instance.weights, left)
    r_sums, r_masks = sumset_with_witness(instance.weights, right)
    cost = {
        "sums_enumerated": len(l_sums) + len(r_sums),
        "dict_lookups": len(r_sums),
        "pairs_checked": 0,
    }
    t = instance.target
    table = {int(s): int(mk) for s, mk in zip(l_sums, l_masks)}
    for s, mk in zip(r_sums, r_masks):
        lm = table.get(t - int(s))
        if lm is not None:
            cost["pairs_checked"] += 1
            return verified_outcome(instance, lm | int(mk), cost)
    return SolverOutcome(cost=cost)
