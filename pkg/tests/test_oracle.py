from collections import Counter
from itertools import product

import pytest

from sslab import (
    CapacityError,
    Instance,
    RandomSource,
    all_subset_sums,
    brute_solve,
    distinct_sums,
    enumerate_histogram,
    gen_random_density,
    mask_from_indices,
    mask_sum,
    max_bin,
    sumset_with_witness,
)


def _python_histogram(weights, indices):
    hist = Counter()
    for picks in product((0, 1), repeat=len(indices)):
        hist[sum(w for b, w in zip(picks, (weights[i] for i in indices)) if b)] += 1
    return dict(hist)


def test_frozen_histogram_1133():
    inst = Instance(weights=(1, 1, 3, 3), target=4)
    hist = enumerate_histogram(inst)
    assert hist.entries == {0: 1, 1: 2, 2: 1, 3: 2, 4: 4, 5: 2, 6: 1, 7: 2, 8: 1}
    assert hist.total() == 16
    assert hist.max_count() == 4
    assert hist.l2_squared() == 36
    assert max_bin(inst) == 4
    assert distinct_sums(inst) == 9


def test_frozen_counts():
    assert distinct_sums(Instance(weights=(2, 4, 8, 16), target=1)) == 16
    assert max_bin(Instance(weights=(1, 1, 1, 1), target=1)) == 6  # the middle bin


def test_histogram_matches_python_enumeration():
    rng = RandomSource(11)
    for k in range(40):
        n = rng.randint(1, 10)
        inst = gen_random_density(n, rng.choice((0.5, 1.0, 2.0, 4.0)), rng.split(str(k)))
        assert enumerate_histogram(inst).entries == _python_histogram(inst.weights, range(n))


def test_histogram_subset_restriction():
    rng = RandomSource(12)
    inst = gen_random_density(12, 1.0, rng)
    subset = mask_from_indices([0, 3, 5, 8, 11])
    hist = enumerate_histogram(inst, subset)
    assert hist.entries == _python_histogram(inst.weights, [0, 3, 5, 8, 11])
    assert hist.total() == 2**5


def test_big_weight_fallback_agrees():
    # weights above the int64-safe range push the oracle onto the big-int path
    rng = RandomSource(13)
    small = tuple(rng.randint(1, 100) for _ in range(10))
    big = tuple(w + (1 << 70) for w in small)
    small_hist = enumerate_histogram(Instance(weights=small, target=1))
    big_hist = enumerate_histogram(Instance(weights=big, target=1))
    # low bits carry the small sums, high bits the popcount; folding the
    # popcount away must reproduce the small histogram exactly
    folded = Counter()
    popcounts = Counter()
    for s, c in big_hist.entries.items():
        folded[s & ((1 << 70) - 1)] += c
        popcounts[s >> 70] += c
    assert dict(folded) == small_hist.entries
    assert popcounts == Counter(enumerate_histogram(
        Instance(weights=(1,) * 10, target=1)).entries)


def test_brute_solve_frozen_example():
    inst = Instance(weights=(1, 2, 4, 8, 16, 32, 64, 128), target=170)
    out = brute_solve(inst)
    assert out.found and out.witness == 0xAA
    assert out.verified


def test_brute_solve_decisions():
    rng = RandomSource(14)
    for k in range(60):
        n = rng.randint(1, 12)
        inst = gen_random_density(n, rng.choice((0.5, 1.0, 2.0)), rng.split(str(k)))
        out = brute_solve(inst)
        achieved = {mask_sum(inst.weights, m) for m in range(1 << n)}
        assert out.found == (inst.target in achieved)
        if out.found:
            assert mask_sum(inst.weights, out.witness) == inst.target


def test_brute_solve_min_mask_witness():
    inst = Instance(weights=(1, 1, 2), target=2)
    # both {0,1} (mask 3) and {2} (mask 4) hit the target; smaller mask wins
    assert brute_solve(inst).witness == 3


def test_brute_solve_short_circuits():
    out = brute_solve(Instance(weights=(1, 2), target=100))
    assert not out.found
    assert out.cost["sums_enumerated"] == 0
    zero = brute_solve(Instance(weights=(3, 4), target=0))
    assert zero.found and zero.witness == 0


def test_all_subset_sums_indexing():
    inst = Instance(weights=(5, 9, 21), target=1)
    sums = all_subset_sums(inst)
    for mask in range(8):
        assert int(sums[mask]) == mask_sum(inst.weights, mask)


def test_enum_limit_guard():
    wide = Instance(weights=(1,) * 27, target=3)
    with pytest.raises(CapacityError):
        enumerate_histogram(wide)
    with pytest.raises(CapacityError):
        brute_solve(wide)


def test_sumset_with_witness_properties():
    rng = RandomSource(15)
    for k in range(30):
        n = rng.randint(1, 12)
        inst = gen_random_density(n, 2.0, rng.split(str(k)))
        indices = [i for i in range(n) if rng.random() < 0.6]
        sums, masks = sumset_with_witness(inst.weights, indices)
        allowed = mask_from_indices(indices)
        seen = sorted({mask_sum(inst.weights, m) for m in range(1 << n)
                       if m & ~allowed == 0})
        assert list(sums) == seen
        for s, m in zip(sums, masks):
            assert int(m) & ~allowed == 0
            assert mask_sum(inst.weights, int(m)) == int(s)


def test_sumset_witness_prefers_smallest_mask():
    sums, masks = sumset_with_witness((1, 1), [0, 1])
    assert list(sums) == [0, 1, 2]
    assert list(masks) == [0, 1, 3]  # sum 1 witnessed by item 0, not item 1
