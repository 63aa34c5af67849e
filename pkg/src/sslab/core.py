"""Instance model, subsets as bitmasks, seeded randomness, generators, text I/O.

Weights are arbitrary-precision Python ints throughout; subsets of [n] are
n-bit integer masks (bit i = item i, LSB first).
"""

from __future__ import annotations

import hashlib
import io
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class CapacityError(RuntimeError):
    """An operation would exceed the configured memory/enumeration budget."""


class BudgetExhausted(Exception):
    """Control-flow signal: a step meter ran past its limit."""


def memory_limit_bytes() -> int:
    """Soft cap for table-shaped allocations, from SSLAB_MEM_LIMIT_MB (default 512)."""
    return int(os.environ.get("SSLAB_MEM_LIMIT_MB", "512")) << 20


class StepMeter:
    """Counts abstract work units; raises BudgetExhausted once past the limit."""

    __slots__ = ("count", "limit")

    def __init__(self, limit: int | None = None):
        self.count = 0
        self.limit = limit

    def add(self, k: int = 1) -> None:
        self.count += k
        if self.limit is not None and self.count > self.limit:
            raise BudgetExhausted


# ---------------------------------------------------------------------------
# bitmask subsets

def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_from_indices(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def mask_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_sum(weights: Sequence[int], mask: int) -> int:
    """Exact sum of the items selected by `mask`."""
    s = 0
    i = 0
    while mask:
        if mask & 1:
            s += weights[i]
        mask >>= 1
        i += 1
    return s


# ---------------------------------------------------------------------------
# instance model

@dataclass(frozen=True)
class Instance:
    """A subset-sum instance: `weights` and a `target`.

    Weights are positive in the standard model; zero is tolerated because the
    modular bit-length reduction emits residues in [0, p).
    """

    weights: tuple[int, ...]
    target: int

    def __post_init__(self):
        ws = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "target", int(self.target))
        for w in ws:
            if w < 0:
                raise ValueError("weights must be non-negative integers")
        if self.target < 0:
            raise ValueError("target must be a non-negative integer")

    @property
    def n(self) -> int:
        return len(self.weights)

    def total(self) -> int:
        return sum(self.weights)

    def subset_sum(self, mask: int) -> int:
        if mask < 0 or mask >> self.n:
            raise ValueError("mask outside the instance's index space")
        return mask_sum(self.weights, mask)


def density(instance: Instance) -> float:
    """n / log2(t). Undefined for t < 2."""
    if instance.target < 2:
        raise ValueError("density undefined for target < 2")
    return instance.n / math.log2(instance.target)


# ---------------------------------------------------------------------------
# solver outcome

@dataclass
class SolverOutcome:
    """What a solver produced: an exactly verified witness mask or none, plus counters.

    `witness` is never reported unverified: every solver re-checks the exact
    sum against the instance before returning it.
    """

    witness: int | None = None
    cost: dict = field(default_factory=dict)
    verified: bool = False
    branch: str | None = None
    exhausted: bool = False
    iterations: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.witness is not None


def verified_outcome(instance: Instance, mask: int, cost: dict, **kw) -> SolverOutcome:
    # construction sites guarantee the sum; this is the last-line exactness check
    if mask_sum(instance.weights, mask) != instance.target:
        raise RuntimeError("internal error: candidate witness failed exact verification")
    return SolverOutcome(witness=mask, cost=cost, verified=True, **kw)


# ---------------------------------------------------------------------------
# deterministic randomness

class RandomSource:
    """Seeded deterministic RNG. One owner per stream; `split` derives independent streams."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._rng = random.Random(self.seed)

    def split(self, tag: str) -> "RandomSource":
        digest = hashlib.sha256(f"{self.seed}:{tag}".encode()).digest()
        return RandomSource(int.from_bytes(digest[:8], "big"))

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def randint(self, a: int, b: int) -> int:
        # inclusive ends, arbitrary precision
        return a + self._rng.randrange(b - a + 1)

    def getrandbits(self, k: int) -> int:
        if k == 0:
            return 0
        return self._rng.getrandbits(k)

    def random(self) -> float:
        return self._rng.random()

    def choice(self, seq):
        return seq[self._rng.randrange(len(seq))]


# ---------------------------------------------------------------------------
# generators

def _pow2_floor(exponent: Fraction) -> int:
    """floor(2**exponent) for rational exponent >= 0."""
    if exponent.denominator == 1:
        return 1 << int(exponent)
    if exponent > 1000:
        # coarse floor; only the integer part matters at this magnitude
        return 1 << math.floor(exponent)
    return max(1, math.floor(2.0 ** float(exponent)))


def gen_random_density(n: int, d, rng: RandomSource) -> Instance:
    """Weights and target uniform in [1, floor(2^(n/d))]: density ~d instances."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dfrac = Fraction(d)
    if dfrac <= 0:
        raise ValueError("density parameter must be positive")
    upper = _pow2_floor(Fraction(n) / dfrac)
    weights = tuple(1 + rng.randrange(upper) for _ in range(n))
    target = 1 + rng.randrange(upper)
    return Instance(weights, target)


def gen_geometric_pairs(n: int) -> Instance:
    """Weights 1,1,3,3,9,9,...: 3^(n/2) distinct sums but bins as large as 2^(n/2)."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    weights = []
    for i in range(n // 2):
        weights += [3**i, 3**i]
    target = sum(3**i for i in range(n // 2))  # one copy of each power
    return Instance(tuple(weights), target)


def gen_planted(n: int, bits: int, rng: RandomSource) -> tuple[Instance, int]:
    """Uniform `bits`-bit weights with the target planted on a uniform subset."""
    if n < 1 or bits < 1:
        raise ValueError("n and bits must be >= 1")
    weights = tuple(1 + rng.randrange(1 << bits) for _ in range(n))
    planted = rng.getrandbits(n)
    return Instance(weights, mask_sum(weights, planted)), planted


def gen_all_equal(n: int, target: int | None = None, value: int = 1) -> Instance:
    """All weights equal: one bin per cardinality, the modal bin is C(n, n/2)."""
    if n < 1 or value < 1:
        raise ValueError("n and value must be >= 1")
    if target is None:
        target = (n // 2) * value
    return Instance((value,) * n, target)


def gen_super_increasing(n: int) -> Instance:
    """Weights 2^i: all 2^n subset sums distinct (every bin has size one)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    weights = tuple(1 << i for i in range(n))
    target = sum(1 << i for i in range(0, n, 2))
    return Instance(weights, target)


# ---------------------------------------------------------------------------
# instance text format:
#   optional '#' comment lines; then three data lines: n, the n weights, t

def write_instance(instance: Instance, dest) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w") as fh:
            write_instance(instance, fh)
        return
    dest.write(f"{instance.n}\n")
    dest.write(" ".join(str(w) for w in instance.weights) + "\n")
    dest.write(f"{instance.target}\n")


def read_instance(src) -> Instance:
    """Parse the text format; rejects malformed counts and non-integer tokens."""
    if isinstance(src, (str, os.PathLike)):
        with open(src) as fh:
            return read_instance(fh)
    lines = [ln.rstrip("\n") for ln in src if not ln.lstrip().startswith("#")]
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) != 3:
        raise ValueError(f"malformed instance: expected 3 data lines, got {len(lines)}")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ValueError("malformed instance: first data line must be the item count") from None
    tokens = lines[1].split()
    if n < 0:
        raise ValueError("malformed instance: negative item count")
    if len(tokens) != n:
        raise ValueError(f"malformed instance: expected {n} weights, got {len(tokens)}")
    try:
        weights = tuple(int(tok) for tok in tokens)
        target = int(lines[2].strip())
    except ValueError:
        raise ValueError("malformed instance: weights and target must be integers") from None
    return Instance(weights, target)


def instance_to_text(instance: Instance) -> str:
    buf = io.StringIO()
    write_instance(instance, buf)
    return buf.getvalue()
