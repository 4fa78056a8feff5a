"""Shared vocabulary for the samplers: randomness, weight arithmetic, errors.

Every sampler in this package owns a private ``numpy.random.Generator``
(PCG64).  The reproducibility contract is: identical seed plus identical
sequence of calls produces identical output, bit for bit.  Generators are
never shared between samplers; the parallel merge derives one child seed
per stream from a single master seed with :func:`derive_seed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidWeightError",
    "EmptyStreamError",
    "RunningTotal",
    "WeightedItem",
    "make_rng",
    "ensure_rng",
    "fresh_seed",
    "derive_seed",
    "splitmix64",
    "uniform_open",
    "check_weight",
    "check_weight_array",
    "weighted_indices",
    "choose_distinct_indices",
]

_MASK64 = 0xFFFFFFFFFFFFFFFF


class InvalidWeightError(ValueError):
    """A stream item carried a weight that is not a positive finite real.

    ``index`` is the 0-based position of the offending item in the stream
    as presented to the sampler.
    """

    def __init__(self, index: int, weight) -> None:
        self.index = index
        self.weight = weight
        super().__init__(
            f"invalid weight {weight!r} at stream index {index}: "
            "weights must be positive and finite"
        )


class EmptyStreamError(ValueError):
    """A sample was requested before any stream item was observed."""


@dataclass
class WeightedItem:
    """An opaque payload with a strictly positive, finite weight.

    Unpacks like a (payload, weight) pair, so streams may yield either.
    """

    payload: object
    weight: float

    def __post_init__(self) -> None:
        w = float(self.weight)
        if not (w > 0.0) or math.isinf(w):
            raise ValueError(f"weight must be positive and finite, got {self.weight!r}")

    def __iter__(self):
        return iter((self.payload, self.weight))


@dataclass
class RunningTotal:
    """Cumulative weight of the stream consumed so far.

    Uses Kahan (compensated) summation so that very long streams of tiny
    weights do not silently lose mass to rounding.  ``value`` is the
    running estimate and ``compensation`` the pending correction; the true
    total is ``value + compensation`` to within one ulp.
    """

    value: float = 0.0
    compensation: float = 0.0
    count: int = 0

    def add(self, weight: float) -> None:
        w = float(weight)
        if not (w > 0.0) or math.isinf(w):
            raise InvalidWeightError(self.count, weight)
        y = w - self.compensation
        t = self.value + y
        self.compensation = (t - self.value) - y
        self.value = t
        self.count += 1

    def rebase(self, value: float, added: int) -> None:
        # Kernels accumulate plainly inside one call; fold their result back
        # and restart the compensation from zero.
        self.value = float(value)
        self.compensation = 0.0
        self.count += added


def splitmix64(x: int) -> int:
    """One SplitMix64 mixing step; a stable 64-bit avalanche function."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master: int, index: int) -> int:
    """Deterministic per-stream child seed: mix the master with the index.

    The rule is fixed (master XOR mixed index, mixed again) so that a run
    can be replayed from the master seed alone.
    """
    return splitmix64((master & _MASK64) ^ splitmix64(index & _MASK64))


def fresh_seed() -> int:
    """A 64-bit seed drawn from OS entropy."""
    return int(np.random.SeedSequence().entropy) & _MASK64


def make_rng(seed: int | None = None) -> np.random.Generator:
    """A new PCG64 generator; entropy-seeded when ``seed`` is None."""
    return np.random.default_rng(seed)


def ensure_rng(rng) -> np.random.Generator:
    """Accept a Generator, a seed, or None, and return a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def uniform_open(rng: np.random.Generator) -> float:
    """A uniform draw strictly inside (0, 1).

    ``Generator.random`` can return exactly 0.0 (never 1.0); redraw until
    the result is nonzero so downstream divisions and roots stay finite.
    """
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def check_weight(weight, index: int, *, skip_zero: bool = False) -> bool:
    """Validate one weight; return False when a zero is leniently skipped.

    Raises :class:`InvalidWeightError` for negative, NaN or infinite
    weights always, and for zero weights unless ``skip_zero`` is set.
    """
    w = float(weight)
    if w > 0.0 and not math.isinf(w):
        return True
    if skip_zero and w == 0.0:
        return False
    raise InvalidWeightError(index, weight)


def check_weight_array(
    weights: np.ndarray, start_index: int, *, skip_zero: bool = False
) -> tuple[np.ndarray, np.ndarray | None]:
    """Validate a float64 weight chunk with two reductions, no temporaries.

    min() propagates NaN and flags non-positives; max() flags +inf.
    Returns ``(weights, keep_mask)`` where ``keep_mask`` is None unless
    lenient zero-skipping removed entries.  The error names the global
    stream index of the first offending item.
    """
    if weights.size == 0:
        return weights, None
    lo = weights.min()
    bad = not (lo >= 0.0 if skip_zero else lo > 0.0) or weights.max() == np.inf
    if bad:
        ok = np.isfinite(weights) & (
            weights >= 0.0 if skip_zero else weights > 0.0
        )
        i = int(np.argmax(~ok))
        raise InvalidWeightError(start_index + i, float(weights[i]))
    if skip_zero and lo == 0.0:
        keep = weights > 0.0
        return weights[keep], keep
    return weights, None


def weighted_indices(
    weights: np.ndarray, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``size`` indices i.i.d. with probability proportional to weight.

    Inverse-CDF over the cumulative weight array: one prefix pass plus one
    binary search per draw.  This is the package's standard non-streaming
    technique, used for the warm-up conversion, the two-pass splitter and
    the benchmark baseline alike.
    """
    cum = np.cumsum(weights)
    total = cum[-1]
    idx = np.searchsorted(cum, rng.random(size) * total, side="right")
    # u*total can round up onto total itself; clip the (probability ~2^-53)
    # overshoot back into range, which also guards cumsum drift.
    return np.minimum(idx, len(cum) - 1)


def choose_distinct_indices(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """k distinct indices from range(n), uniform over all C(n, k) subsets.

    Partial Fisher-Yates over a virtual identity permutation; O(k) time.
    """
    if not 0 <= k <= n:
        raise ValueError(f"cannot choose {k} distinct indices from {n}")
    out = np.empty(k, dtype=np.int64)
    displaced: dict[int, int] = {}
    for j in range(k):
        r = j + int(rng.random() * (n - j))
        vr = displaced.get(r, r)
        out[j] = vr
        displaced[r] = displaced.get(j, j)
    return out
