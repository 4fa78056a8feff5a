"""
One sample over many streams
============================

When the data arrives as several independent streams, run one sampler per
stream and reduce the per-stream samples into a single one at the end.
The merged sample follows exactly the law of a single sampler run over
the concatenation: any element with weight w occupies Binomial(m, w/W)
of the m output slots.
"""

import numpy as np

from streamsample import SkipSampler, merge_reduce, parallel_sample, two_pass_sample
from streamsample.oracle import exact_count_pmf

# ---------------------------------------------------------------------------
# The whole pipeline in one call: samplers run concurrently (threads),
# summaries are reduced with a multinomial split over the streams' weight
# shares plus a without-replacement subsample from each reservoir.

streams = [
    [("a1", 1.0), ("a2", 2.0), ("a3", 1.0)],
    [("b1", 3.0), ("b2", 1.0)],
    [("c1", 2.0)],
]
print("merged sample:", parallel_sample(streams, 5, seed=99))

# Reproducible: one master seed derives every per-stream seed and the
# reducer's seed, so the same call replays bit for bit.
assert parallel_sample(streams, 5, seed=99) == parallel_sample(streams, 5, seed=99)

# ---------------------------------------------------------------------------
# The same thing assembled by hand, e.g. with samplers on different hosts:
# ship (reservoir, total weight, item count) summaries to the reducer.

summaries = []
for i, stream in enumerate(streams):
    sampler = SkipSampler(5, seed=1000 + i)
    for payload, weight in stream:
        sampler.observe(payload, weight)
    summaries.append(sampler.summary())

print("hand-rolled merge:", merge_reduce(summaries, 5, np.random.default_rng(5)))

# ---------------------------------------------------------------------------
# Verify the count law on a tiny example: streams {(A,1),(B,2)} and
# {(C,3)}, so C should fill Binomial(m, 3/6) slots of an m=2 sample.

tiny = [[("A", 1.0), ("B", 2.0)], [("C", 3.0)]]
replications = 20_000
hist = np.zeros(3)
for seed in range(replications):
    got = parallel_sample(tiny, 2, seed=seed, parallel=False)
    hist[got.count("C")] += 1

print("\n count of C   empirical   Binomial(2, 1/2)")
for k, p in enumerate(exact_count_pmf([1.0, 2.0, 3.0], 2, 2)):
    print(f" {k:10d}   {hist[k] / replications:9.4f}   {p:9.4f}")

# ---------------------------------------------------------------------------
# Non-streaming data that is already materialized in slices supports the
# two-pass variant: total each slice, split the quota, then sample each
# slice directly.  Same output law, no reservoir bookkeeping.

slices = [
    (np.arange(1000), np.random.default_rng(1).random(1000) + 0.01),
    (np.arange(1000, 1500), np.random.default_rng(2).random(500) + 0.01),
]
print("\ntwo-pass sample:", two_pass_sample(slices, 8, 7))
