"""Single-pass weighted reservoir sampling with replacement.

Maintain a fixed-size weighted random sample, with replacement, over a
stream of unknown length in one pass.  Three interchangeable samplers
produce the same output law:

- :class:`BernoulliSampler` -- literal per-slot replacement trials; the
  transparent reference implementation.
- :class:`HeapSampler` -- m single-element without-replacement instances
  tracked jointly in a min-priority queue.
- :class:`SkipSampler` -- jumps over runs of rejected items in closed
  form; the fast default.

:func:`parallel_sample` runs one skip sampler per stream and reduces the
per-stream samples into one, and :func:`two_pass_sample` is the
non-streaming two-pass variant.  :mod:`streamsample.oracle` holds the
exact distributions the test suite verifies everything against, and
:mod:`streamsample.bench` the timing harness.
"""

from .base import ReservoirSampler
from .basic import BernoulliSampler
from .core import (
    EmptyStreamError,
    InvalidWeightError,
    RunningTotal,
    WeightedItem,
    derive_seed,
    make_rng,
    uniform_open,
)
from .heap import HeapSampler
from .merge import (
    StreamSummary,
    merge_reduce,
    multinomial_split,
    parallel_sample,
    subsample_wor,
    two_pass_sample,
)
from .skip import SkipSampler, replace_k_slots, truncated_binomial

__version__ = "0.1.0"

_SAMPLER_CLASSES = {
    "basic": BernoulliSampler,
    "heap": HeapSampler,
    "skip": SkipSampler,
}

__all__ = [
    "BernoulliSampler",
    "HeapSampler",
    "SkipSampler",
    "ReservoirSampler",
    "StreamSummary",
    "WeightedItem",
    "RunningTotal",
    "InvalidWeightError",
    "EmptyStreamError",
    "sample_stream",
    "parallel_sample",
    "two_pass_sample",
    "merge_reduce",
    "multinomial_split",
    "subsample_wor",
    "truncated_binomial",
    "replace_k_slots",
    "make_rng",
    "derive_seed",
    "uniform_open",
    "__version__",
]


def sample_stream(items, size, *, algorithm="skip", seed=None, **kwargs):
    """Sample ``size`` payloads from an iterable of (payload, weight) pairs.

    Convenience wrapper: builds the requested sampler, drains the stream
    in one pass and returns the reservoir as a list.
    """
    try:
        cls = _SAMPLER_CLASSES[algorithm]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; pick one of {sorted(_SAMPLER_CLASSES)}"
        ) from None
    return cls(size, seed, **kwargs).consume(items).sample()
