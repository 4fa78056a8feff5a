"""Combine per-stream samples into one, and the two-pass splitter.

One skip sampler runs per stream (concurrently when asked); each exports a
:class:`StreamSummary` -- its size-m reservoir plus the stream's total
weight.  The reduction allocates the m output slots across streams with a
multinomial on the weight shares, takes a uniform without-replacement
subsample of that size from each reservoir, and concatenates.  Any element
with weight w then occupies Binomial(m, w/W) slots of the result, exactly
as if one sampler had consumed the concatenated stream.

Every per-stream sample must itself have size m: a single stream can in
principle supply all m output slots, so a smaller export could not.

The reduction is a single O(m) step run once after all streams finish; it
is not designed for continuous re-querying while streams are still
flowing (re-running it per item would cost O(m) each time).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    check_weight_array,
    choose_distinct_indices,
    derive_seed,
    ensure_rng,
    fresh_seed,
    weighted_indices,
)
from .skip import SkipSampler

__all__ = [
    "StreamSummary",
    "multinomial_split",
    "subsample_wor",
    "merge_reduce",
    "parallel_sample",
    "two_pass_sample",
]


@dataclass
class StreamSummary:
    """What one stream contributes to the merge."""

    reservoir: list
    total_weight: float
    item_count: int


def multinomial_split(size: int, weights: Sequence[float], rng=None) -> np.ndarray:
    """Split ``size`` slots across categories with probability weight/total.

    Sampled as a chain of conditional binomials: n_1 ~ B(size, p_1), then
    n_2 ~ B(size - n_1, p_2 / (1 - p_1)), and so on -- exact, O(k) draws.
    """
    gen = ensure_rng(rng)
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-d sequence")
    if not (np.isfinite(w).all() and (w > 0.0).all()):
        raise ValueError("all category weights must be positive and finite")
    counts = np.zeros(w.size, dtype=np.int64)
    remaining = int(size)
    rest = float(w.sum())
    for i in range(w.size - 1):
        if remaining == 0:
            break
        p = min(max(w[i] / rest, 0.0), 1.0)
        n_i = int(gen.binomial(remaining, p))
        counts[i] = n_i
        remaining -= n_i
        rest -= w[i]
    counts[-1] += remaining
    return counts


def subsample_wor(reservoir: Sequence, n: int, rng=None) -> list:
    """n payloads off n distinct uniformly chosen slots, without replacement.

    Selection is by slot index, not payload identity, so duplicated
    payloads count as distinct slots.
    """
    gen = ensure_rng(rng)
    m = len(reservoir)
    if not 0 <= n <= m:
        raise ValueError(f"cannot take {n} slots without replacement from {m}")
    if n == 0:
        return []
    idx = choose_distinct_indices(m, n, gen)
    return [reservoir[i] for i in idx]


def merge_reduce(summaries: Sequence[StreamSummary], size: int, rng=None) -> list:
    """Reduce per-stream summaries into one size-m reservoir.

    Output slots follow stream order; consumers must not read meaning into
    slot positions.
    """
    gen = ensure_rng(rng)
    if len(summaries) == 0:
        raise ValueError("nothing to merge: empty summary list")
    for i, s in enumerate(summaries):
        if len(s.reservoir) != size:
            raise ValueError(
                f"summary {i} carries a reservoir of size {len(s.reservoir)}, "
                f"expected {size}"
            )
        if not s.total_weight > 0.0:
            raise ValueError(f"summary {i} has non-positive total weight")
    counts = multinomial_split(size, [s.total_weight for s in summaries], gen)
    merged: list = []
    for s, n_i in zip(summaries, counts):
        merged.extend(subsample_wor(s.reservoir, int(n_i), gen))
    return merged


def _as_arrays(stream):
    """Normalize one stream to (payloads, float64 weights) when array-fed."""
    if (
        isinstance(stream, tuple)
        and len(stream) == 2
        and isinstance(stream[1], np.ndarray)
    ):
        return stream[0], np.ascontiguousarray(stream[1], dtype=np.float64)
    return None


def _run_one(stream, index, size, seed, warmup, skip_zero_weights):
    sampler = SkipSampler(size, seed, warmup=warmup,
                          skip_zero_weights=skip_zero_weights)
    pair = _as_arrays(stream)
    if pair is not None:
        sampler.observe_many(pair[0], pair[1])
    else:
        sampler.consume(stream)
    if sampler.items_seen == 0:
        raise ValueError(f"stream {index} is empty")
    return sampler.summary()


def parallel_sample(
    streams: Sequence,
    size: int,
    *,
    seed: int | None = None,
    seeds: Sequence[int] | None = None,
    reduce_seed: int | None = None,
    parallel: bool | int = True,
    warmup: bool = True,
    skip_zero_weights: bool = False,
) -> list:
    """One-pass weighted with-replacement sample over several streams.

    A stream is either an iterable of (payload, weight) pairs or a
    ``(payloads, weights_array)`` tuple with a numpy weight array.  Each
    stream is consumed exactly once by its own skip sampler; samplers run
    on a thread pool when ``parallel`` is truthy (pass an int to cap the
    workers).  No state is shared before the final reduction, so the
    output law does not depend on scheduling.

    Seeding: pass explicit per-stream ``seeds`` (plus ``reduce_seed``), or
    a single master ``seed`` from which child seeds are derived as
    ``derive_seed(master, stream_index)`` and the reducer's as
    ``derive_seed(master, len(streams))``.
    """
    streams = list(streams)
    k = len(streams)
    if k == 0:
        raise ValueError("at least one stream is required")
    if seeds is not None:
        if len(seeds) != k:
            raise ValueError(f"got {len(seeds)} seeds for {k} streams")
        child_seeds = [int(s) for s in seeds]
        if reduce_seed is None:
            raise ValueError("explicit seeds also require reduce_seed")
        rseed = int(reduce_seed)
    else:
        master = fresh_seed() if seed is None else int(seed)
        child_seeds = [derive_seed(master, i) for i in range(k)]
        rseed = derive_seed(master, k) if reduce_seed is None else int(reduce_seed)

    if parallel and k > 1:
        workers = parallel if isinstance(parallel, int) and parallel > 1 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(
                pool.map(
                    _run_one,
                    streams,
                    range(k),
                    [size] * k,
                    child_seeds,
                    [warmup] * k,
                    [skip_zero_weights] * k,
                )
            )
    else:
        summaries = [
            _run_one(stream, i, size, child_seeds[i], warmup, skip_zero_weights)
            for i, stream in enumerate(streams)
        ]
    return merge_reduce(summaries, size, ensure_rng(rseed))


def two_pass_sample(slices: Sequence, size: int, rng=None) -> list:
    """Non-streaming variant over materialized slices.

    First pass totals each slice's weight; a multinomial then fixes how
    many of the m output slots each slice supplies, and the second pass
    draws that many items from the slice with probability proportional to
    weight (with replacement).  Matches :func:`parallel_sample` in law but
    needs random access to the data.
    """
    gen = ensure_rng(rng)
    if len(slices) == 0:
        raise ValueError("at least one slice is required")
    normalized = []
    for i, s in enumerate(slices):
        pair = _as_arrays(s)
        if pair is None:
            pairs = list(s)
            if not pairs:
                raise ValueError(f"slice {i} is empty")
            payloads = [p for p, _ in pairs]
            w = np.asarray([wt for _, wt in pairs], dtype=np.float64)
        else:
            payloads, w = pair
            if w.size == 0:
                raise ValueError(f"slice {i} is empty")
        check_weight_array(w, 0)
        normalized.append((payloads, w))
    totals = [float(w.sum()) for _, w in normalized]
    counts = multinomial_split(size, totals, gen)
    out: list = []
    for (payloads, w), n_i in zip(normalized, counts):
        if n_i == 0:
            continue
        idx = weighted_indices(w, int(n_i), gen)
        if isinstance(payloads, np.ndarray):
            out.extend(payloads[idx].tolist())
        else:
            out.extend(payloads[j] for j in idx)
    return out
