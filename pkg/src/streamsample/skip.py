"""Skip sampler: jump over runs of rejected items in closed form.

Past the early phase, most stream items replace nothing: the chance any
slot is touched at step n is 1 - (1 - w_n/W_n)^m, which shrinks as the
total grows.  Instead of deciding item by item, the sampler draws the next
acceptance target W/q**(1/m) once and then only accumulates weights until
the running total reaches it.  The accepted item overwrites k > 0 slots,
with k from a Binomial(m, w/W) conditioned on being positive, and a new
target is drawn.  Between acceptances the reservoir is never touched.

The target comparison is a weak inequality (accept when the total reaches
or exceeds the target); with continuous q exact equality has probability
zero, so the convention only pins down replayed traces.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .base import ReservoirSampler
from .core import ensure_rng

__all__ = ["SkipSampler", "truncated_binomial", "replace_k_slots"]


def truncated_binomial(size: int, p: float, rng=None) -> int:
    """Draw from Binomial(size, p) conditioned on a positive outcome.

    This is the number of reservoir slots an accepted item overwrites.
    """
    if size < 1:
        raise ValueError("size must be a positive integer")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p!r}")
    return int(K.trunc_binomial_py(ensure_rng(rng), size, p))


def replace_k_slots(reservoir, k: int, payload, rng=None) -> list:
    """Overwrite k distinct uniformly chosen slots with one payload.

    Returns a new list; the input reservoir is left untouched.
    """
    from .core import choose_distinct_indices

    m = len(reservoir)
    if not 1 <= k <= m:
        raise ValueError(f"k must lie in [1, {m}], got {k}")
    out = list(reservoir)
    for s in choose_distinct_indices(m, k, ensure_rng(rng)):
        out[s] = payload
    return out


class SkipSampler(ReservoirSampler):
    """Weighted with-replacement reservoir with closed-form skips.

    ``warmup=True`` (default) buffers the first m items and converts them
    directly into a with-replacement sample before skipping starts, see
    :class:`streamsample.heap.HeapSampler` for the rationale.
    """

    algorithm = "skip"
    _uses_warmup = True

    def __init__(self, size, seed=None, *, rng=None, skip_zero_weights=False,
                 warmup: bool = True) -> None:
        super().__init__(size, seed, rng=rng, skip_zero_weights=skip_zero_weights)
        self.warmup = bool(warmup)
        self._state = np.zeros(2, dtype=np.float64)  # [total, threshold]
        self._perm = np.zeros(self.size, dtype=np.int64)
        self._stamp = np.full(self.size, -1, dtype=np.int64)
        self._sel = np.empty(self.size, dtype=np.int64)
        self._eid = 0
        self._inv_m = 1.0 / self.size
        self._threshold = np.inf
        if self.warmup:
            self._begin_warmup()

    @property
    def pending_threshold(self) -> float:
        """The running-total value that triggers the next acceptance."""
        return self._threshold

    def _draw_threshold(self) -> None:
        self._threshold = K.skip_threshold_py(self._gen, self._total.value,
                                              self._inv_m)

    def _literal_init(self, payload, w: float) -> None:
        self._new_slots(payload)
        self._total.add(w)
        self._draw_threshold()

    def _start_after_warmup(self) -> None:
        self._draw_threshold()

    def _run_scalar(self, payload, w: float) -> None:
        self._total.add(w)
        W = self._total.value
        if W >= self._threshold:
            gen = self._gen
            k = K.trunc_binomial_py(gen, self.size, w / W)
            self._eid += 1
            K.select_distinct_py(gen, self.size, k, self._perm, self._stamp,
                                 self._eid, self._sel)
            for j in range(k):
                self._write_slot(int(self._sel[j]), payload)
            self._draw_threshold()

    def _run_kernel(self, weights: np.ndarray) -> None:
        self._state[0] = self._total.value + self._total.compensation
        self._state[1] = self._threshold
        self._eid = K.skip_run(self._gen, weights, self.size, self._state,
                               self._res_pos, self._perm, self._stamp,
                               self._sel, self._eid)
        self._threshold = float(self._state[1])

    def _kernel_total(self) -> float:
        return float(self._state[0])
