"""Benchmark harness: relative timings of the samplers at desk scale.

Populations are materialized up front so the timed region covers sampling
work only; every algorithm is driven through its public entry point (no
benchmark-only fast paths).  Each timed run covers construction through a
fully materialized reservoir inside the sampler; exporting the reservoir
to a list is excluded uniformly.  Reported numbers are medians over
repetitions with the interquartile range as dispersion -- medians resist
scheduler noise, absolute values remain hardware-dependent.  Meaningful
claims at this scale are ordinal: which algorithm is faster, and how the
gap moves with the weight structure and the sample ratio.

Output is CSV with a fixed header (one row per algorithm and sample
size); plot it with e.g.::

    python3 -c "import pandas as pd, matplotlib.pyplot as p; \
d=pd.read_csv('bench.csv'); d.pivot(index='sample_ratio', \
columns='algorithm', values='median_seconds').plot(loglog=True); \
p.savefig('bench.png')"
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basic import BernoulliSampler
from .core import check_weight_array, derive_seed, ensure_rng, weighted_indices
from .heap import HeapSampler
from .merge import parallel_sample, two_pass_sample
from .skip import SkipSampler

__all__ = [
    "WEIGHT_STRUCTURES",
    "ALGORITHMS",
    "CSV_COLUMNS",
    "BenchScenario",
    "gen_weights",
    "baseline_sample",
    "run_bench",
    "write_csv",
    "main",
]

WEIGHT_STRUCTURES = ("constant", "increasing", "decreasing")
ALGORITHMS = ("basic", "heap", "skip", "baseline", "parallel-skip", "two-pass")
CSV_COLUMNS = (
    "n",
    "m",
    "sample_ratio",
    "weight_structure",
    "algorithm",
    "streams",
    "repetitions",
    "median_seconds",
    "iqr_seconds",
)


def gen_weights(n: int, structure: str, seed: int | None = None) -> np.ndarray:
    """Weight sequence for a benchmark population.

    constant: all ones.  increasing: a linear ramp 1..n, so late items
    carry most of the mass.  decreasing: the same ramp reversed.  ``seed``
    is reserved for randomized structures and unused by the current ones.
    """
    if n < 1:
        raise ValueError("population size must be positive")
    if structure == "constant":
        return np.ones(n, dtype=np.float64)
    if structure == "increasing":
        return np.arange(1, n + 1, dtype=np.float64)
    if structure == "decreasing":
        return np.arange(n, 0, -1, dtype=np.float64)
    raise ValueError(f"unknown weight structure {structure!r}")


def baseline_sample(payloads, weights: np.ndarray, size: int, rng=None):
    """Naive full-materialization weighted sampler, the non-streaming baseline.

    One O(n) prefix pass over the cumulative weights, then one binary
    search per draw.  Stands in for the stock weighted-choice routines of
    general numeric libraries.
    """
    gen = ensure_rng(rng)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    check_weight_array(w, 0)
    idx = weighted_indices(w, size, gen)
    if isinstance(payloads, np.ndarray):
        return payloads[idx]
    return [payloads[i] for i in idx]


@dataclass
class BenchScenario:
    """One sweep: population, sample sizes, weight structure, algorithms."""

    n: int = 10**6
    sample_sizes: Sequence[int] = (10**3, 10**4, 10**5)
    weight_structure: str = "constant"
    algorithms: Sequence[str] = ("heap", "skip", "baseline")
    repetitions: int = 5
    seed: int = 0
    streams: int = field(default_factory=lambda: os.cpu_count() or 1)

    def validate(self) -> None:
        if self.n < 1:
            raise ValueError("population size must be positive")
        if self.weight_structure not in WEIGHT_STRUCTURES:
            raise ValueError(f"unknown weight structure {self.weight_structure!r}")
        if self.repetitions < 5:
            raise ValueError("at least 5 repetitions are required (median reported)")
        for m in self.sample_sizes:
            if not 1 <= m <= self.n:
                raise ValueError(f"sample size {m} must lie in [1, n={self.n}]")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
        if self.streams < 1:
            raise ValueError("stream count must be positive")


def _slice_population(payloads, weights, streams):
    bounds = np.linspace(0, len(weights), streams + 1).astype(np.int64)
    return [
        (payloads[a:b], weights[a:b])
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]


def _make_runner(algorithm, payloads, weights, m, streams):
    if algorithm == "basic":
        def run(seed):
            BernoulliSampler(m, seed, method="binomial").observe_many(payloads, weights)
    elif algorithm == "heap":
        def run(seed):
            HeapSampler(m, seed).observe_many(payloads, weights)
    elif algorithm == "skip":
        def run(seed):
            SkipSampler(m, seed).observe_many(payloads, weights)
    elif algorithm == "baseline":
        def run(seed):
            baseline_sample(payloads, weights, m, seed)
    elif algorithm == "parallel-skip":
        slices = _slice_population(payloads, weights, streams)
        def run(seed):
            parallel_sample(slices, m, seed=seed, parallel=streams)
    elif algorithm == "two-pass":
        slices = _slice_population(payloads, weights, streams)
        def run(seed):
            two_pass_sample(slices, m, seed)
    else:  # pragma: no cover - guarded by validate()
        raise ValueError(algorithm)
    return run


def run_bench(scenario: BenchScenario) -> list[dict]:
    """Execute a scenario; one result row per (algorithm, sample size)."""
    scenario.validate()
    weights = gen_weights(scenario.n, scenario.weight_structure, scenario.seed)
    payloads = np.arange(scenario.n, dtype=np.int64)
    rows = []
    for m in scenario.sample_sizes:
        for algorithm in scenario.algorithms:
            runner = _make_runner(algorithm, payloads, weights, int(m),
                                  scenario.streams)
            runner(derive_seed(scenario.seed, 0))  # warm compile and caches
            times = []
            for rep in range(scenario.repetitions):
                seed = derive_seed(scenario.seed, rep + 1)
                t0 = time.perf_counter()
                runner(seed)
                times.append(time.perf_counter() - t0)
            q1, median, q3 = np.percentile(times, (25, 50, 75))
            uses_streams = algorithm in ("parallel-skip", "two-pass")
            rows.append({
                "n": scenario.n,
                "m": int(m),
                "sample_ratio": int(m) / scenario.n,
                "weight_structure": scenario.weight_structure,
                "algorithm": algorithm,
                "streams": scenario.streams if uses_streams else 1,
                "repetitions": scenario.repetitions,
                "median_seconds": float(median),
                "iqr_seconds": float(q3 - q1),
            })
    return rows


def write_csv(rows: list[dict], out) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    writer.writerows(rows)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the ``bench`` subcommand."""
    import argparse

    parser = argparse.ArgumentParser(
        prog="streamsample bench",
        description="Benchmark the samplers and emit CSV timings.",
    )
    parser.add_argument("--n", type=int, default=10**6,
                        help="population size (default 1e6)")
    parser.add_argument("--m", default="1000,10000,100000",
                        help="comma-separated sample sizes")
    parser.add_argument("--weights", default="constant",
                        choices=WEIGHT_STRUCTURES, help="weight structure")
    parser.add_argument("--algorithms", default="heap,skip,baseline",
                        help=f"comma-separated subset of {', '.join(ALGORITHMS)}")
    parser.add_argument("--repetitions", type=int, default=5,
                        help="repetitions per cell, median reported (min 5)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--streams", type=int, default=os.cpu_count() or 1,
                        help="stream count for the parallel algorithms")
    parser.add_argument("--output", default="-",
                        help="CSV path, '-' for standard output")
    args = parser.parse_args(argv)

    scenario = BenchScenario(
        n=args.n,
        sample_sizes=[int(x) for x in args.m.split(",") if x],
        weight_structure=args.weights,
        algorithms=[a.strip() for a in args.algorithms.split(",") if a.strip()],
        repetitions=args.repetitions,
        seed=args.seed,
        streams=args.streams,
    )
    rows = run_bench(scenario)
    if args.output == "-":
        buf = io.StringIO()
        write_csv(rows, buf)
        print(buf.getvalue(), end="")
    else:
        with open(args.output, "w", newline="") as fh:
            write_csv(rows, fh)
    return 0
