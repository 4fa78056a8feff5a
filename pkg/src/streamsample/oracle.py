"""Ground truth for the distribution tests.

For any of the samplers run over a finite stream with weights w_1..w_n
(total W) and capacity m, each reservoir slot independently holds item i
with probability w_i/W, so the number of copies of item i follows
Binomial(m, w_i/W).  The functions here compute those laws analytically,
enumerate the literal per-slot procedure as an independent cross-check on
tiny inputs, and wrap the goodness-of-fit machinery every statistical test
in the suite shares.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np
from scipy import stats

__all__ = [
    "GofReport",
    "exact_marginals",
    "exact_count_pmf",
    "truncated_binomial_pmf",
    "enumerate_bernoulli_tree",
    "tv_distance",
    "chi_square_gof",
    "chi_square_two_sample",
]


@dataclass
class GofReport:
    """Outcome of one goodness-of-fit test."""

    statistic: float
    dof: int
    p_value: float
    tv_distance: float
    replications: int


def exact_marginals(weights: Sequence[float]) -> np.ndarray:
    """Per-item slot probability w_i / W, exactly proportional."""
    w = np.asarray(weights, dtype=np.float64)
    if w.size == 0:
        raise ValueError("no weights given")
    if not (np.isfinite(w).all() and (w > 0.0).all()):
        raise ValueError("weights must be positive and finite")
    return w / w.sum()


def exact_count_pmf(weights: Sequence[float], size: int, index: int) -> np.ndarray:
    """Binomial(size, w_i/W) pmf over counts 0..size for item ``index``.

    ``index`` is 0-based into ``weights``.
    """
    if size < 1:
        raise ValueError("size must be a positive integer")
    marginals = exact_marginals(weights)
    if not 0 <= index < marginals.size:
        raise ValueError(f"item index {index} out of range for {marginals.size} items")
    return stats.binom.pmf(np.arange(size + 1), size, marginals[index])


def truncated_binomial_pmf(size: int, p: float) -> np.ndarray:
    """Binomial(size, p) conditioned on k >= 1; pmf over k = 1..size."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    pmf = stats.binom.pmf(np.arange(1, size + 1), size, p)
    return pmf / pmf.sum()


def enumerate_bernoulli_tree(weights: Sequence[float], size: int) -> dict[int, np.ndarray]:
    """Exact per-item count pmfs by enumerating every per-slot trial outcome.

    Walks the full execution tree of the literal per-slot Bernoulli
    procedure (all 2^size outcomes per item), accumulating the probability
    of every reachable reservoir.  Exponential in stream length and size;
    meant for streams of a few items and size <= 2, as the independent
    check that the analytic binomial law matches the literal procedure.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.size == 0:
        raise ValueError("no weights given")
    states: dict[tuple, float] = {(0,) * size: 1.0}
    total = w[0]
    for n in range(1, w.size):
        total += w[n]
        p = w[n] / total
        nxt: dict[tuple, float] = {}
        for pattern in product((False, True), repeat=size):
            hits = sum(pattern)
            prob = p ** hits * (1.0 - p) ** (size - hits)
            if prob == 0.0:
                continue
            for state, mass in states.items():
                new = tuple(n if pattern[s] else state[s] for s in range(size))
                nxt[new] = nxt.get(new, 0.0) + mass * prob
        states = nxt
    pmfs = {i: np.zeros(size + 1) for i in range(w.size)}
    for state, mass in states.items():
        for i in range(w.size):
            pmfs[i][sum(1 for s in state if s == i)] += mass
    return pmfs


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance between two pmfs on the same support."""
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def chi_square_gof(
    observed: Sequence[int],
    expected_pmf: Sequence[float],
    *,
    min_expected: float = 5.0,
) -> GofReport:
    """Pearson goodness-of-fit of an observed histogram against a pmf.

    Bins whose expected count falls below ``min_expected`` are pooled into
    a single tail bin (the standard validity rule); fewer than two bins
    after pooling is a degenerate test and raises.  The total-variation
    distance is reported on the unpooled bins.
    """
    obs = np.asarray(observed, dtype=np.float64)
    pmf = np.asarray(expected_pmf, dtype=np.float64)
    if obs.shape != pmf.shape:
        raise ValueError("observed and expected must align")
    if abs(pmf.sum() - 1.0) > 1e-9:
        raise ValueError(f"expected pmf sums to {pmf.sum()!r}, not 1")
    n = obs.sum()
    expected = pmf * n
    small = expected < min_expected
    keep_obs = obs[~small]
    keep_exp = expected[~small]
    if small.any():
        keep_obs = np.append(keep_obs, obs[small].sum())
        keep_exp = np.append(keep_exp, expected[small].sum())
    if keep_exp.size < 2:
        raise ValueError("degenerate test: fewer than 2 bins after pooling")
    statistic = float(((keep_obs - keep_exp) ** 2 / keep_exp).sum())
    dof = keep_exp.size - 1
    p_value = float(stats.chi2.sf(statistic, dof))
    tv = tv_distance(obs / n, pmf)
    return GofReport(statistic, dof, p_value, tv, int(n))


def chi_square_two_sample(
    counts_a: Sequence[int],
    counts_b: Sequence[int],
    *,
    min_expected: float = 5.0,
) -> GofReport:
    """Two-sample homogeneity test on aligned histograms.

    Tests whether two observed histograms were drawn from one common
    distribution; bins with a small pooled expectation are merged into a
    tail bin as in :func:`chi_square_gof`.
    """
    a = np.asarray(counts_a, dtype=np.float64)
    b = np.asarray(counts_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("histograms must align")
    na, nb = a.sum(), b.sum()
    pooled = (a + b) / (na + nb)
    exp_a = pooled * na
    small = exp_a < min_expected
    if small.any():
        a = np.append(a[~small], a[small].sum())
        b = np.append(b[~small], b[small].sum())
        exp_a = np.append(exp_a[~small], exp_a[small].sum())
    if exp_a.size < 2:
        raise ValueError("degenerate test: fewer than 2 bins after pooling")
    exp_b = exp_a * (nb / na)
    statistic = float(
        ((a - exp_a) ** 2 / exp_a).sum() + ((b - exp_b) ** 2 / exp_b).sum()
    )
    dof = exp_a.size - 1
    p_value = float(stats.chi2.sf(statistic, dof))
    tv = tv_distance(np.asarray(counts_a) / na, np.asarray(counts_b) / nb)
    return GofReport(statistic, dof, p_value, tv, int(na + nb))
