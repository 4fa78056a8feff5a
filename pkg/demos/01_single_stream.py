"""
Sampling one weighted stream
============================

Maintain a fixed-size random sample, with replacement, over a stream you
can only read once.  Every item's chance of occupying a reservoir slot is
proportional to its weight, no matter how long the stream turns out to be.
"""

import numpy as np

from streamsample import BernoulliSampler, HeapSampler, SkipSampler, sample_stream

# ---------------------------------------------------------------------------
# A stream is anything that yields (payload, weight) pairs.  Payloads are
# opaque; weights must be positive and finite.

stream = [("alpha", 1.0), ("beta", 2.0), ("gamma", 3.0), ("delta", 4.0)]

# The one-liner: sample 6 slots with the default (skip-based) algorithm.
print("quick sample:", sample_stream(stream, 6, seed=7))

# ---------------------------------------------------------------------------
# Three interchangeable samplers produce the same output law.  The skip
# sampler is the fast default; the Bernoulli sampler is the transparent
# reference; the heap sampler tracks m single-element instances jointly.

for cls in (BernoulliSampler, HeapSampler, SkipSampler):
    sampler = cls(4, seed=42)
    for payload, weight in stream:
        sampler.observe(payload, weight)
    print(f"{cls.__name__:18s} -> {sampler.sample()}")

# ---------------------------------------------------------------------------
# The law: each slot independently holds item i with probability w_i / W.
# Check it empirically for one slot over many seeded replications.

weights = np.array([1.0, 2.0, 3.0, 4.0])
names = ["alpha", "beta", "gamma", "delta"]
replications = 20_000

counts = dict.fromkeys(names, 0)
for seed in range(replications):
    sampler = SkipSampler(1, seed)
    sampler.observe_many(names, weights)
    counts[sampler.sample()[0]] += 1

print("\n item     empirical   exact w/W")
for name, w in zip(names, weights):
    print(f" {name:8s} {counts[name] / replications:9.4f}   {w / weights.sum():9.4f}")

# ---------------------------------------------------------------------------
# Streams longer than memory: feed numpy chunks.  The sampler keeps only
# the reservoir, the running weight total and O(m) scratch state.

big = SkipSampler(5, seed=123)
rng = np.random.default_rng(0)
for chunk in range(100):
    payloads = np.arange(chunk * 10_000, (chunk + 1) * 10_000)
    big.observe_many(payloads, rng.random(10_000) + 0.01)
print("\nafter", big.items_seen, "items, total weight", round(big.total_weight, 1))
print("reservoir:", [int(x) for x in big.sample()])
